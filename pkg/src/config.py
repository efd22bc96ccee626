"""
프로젝트 설정 및 경로 관리
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict

logger = logging.getLogger(__name__)

# 프로젝트 루트 디렉토리
ROOT_DIR = Path(__file__).parent.parent

# 데이터 디렉토리
DATA_DIR = ROOT_DIR / "data"
RUNS_DIR = DATA_DIR / "runs"

# 골든 픽스처
FIXTURES_DIR = ROOT_DIR / "fixtures"

# 사용자 설정 파일
SETTINGS_FILE = ROOT_DIR / ".timtin.json"

# 오라클 (유한 P 수치 계산)
DEFAULT_SEED = 0
ORACLE_SEEDS = (0, 1, 2)
ORACLE_POWERS = (1e6, 1e10)
ORACLE_P_CAP = 1e12
ORACLE_TOLERANCE = 0.05
LOGDET_TOLERANCE = 1e-9


# TIM 분수 채색 (정확한 LP를 쓰는 최대 사용자 수)
COLORING_EXACT_MAX_USERS = 12
COLORING_MAX_DENOMINATOR = 1000

# 분해 탐색
DEFAULT_EXHAUSTIVE_CAP = 16

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

_DEFAULT_SETTINGS: Dict[str, Any] = {
    "exhaustive_cap": DEFAULT_EXHAUSTIVE_CAP,
    "oracle_seeds": list(ORACLE_SEEDS),
    "oracle_powers": list(ORACLE_POWERS),
    "log_level": "WARNING",
}


def ensure_dirs():
    """필요한 디렉토리 생성"""
    for dir_path in [DATA_DIR, RUNS_DIR]:
        dir_path.mkdir(parents=True, exist_ok=True)


def load_settings(path: Path | None = None) -> Dict[str, Any]:
    """설정 파일(.timtin.json)을 기본값 위에 병합하여 로드"""
    settings = dict(_DEFAULT_SETTINGS)
    settings_file = Path(path) if path else SETTINGS_FILE
    if not settings_file.exists():
        return settings

    try:
        overrides = json.loads(settings_file.read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        logger.warning("설정 파일을 읽을 수 없습니다 (%s): %s", settings_file, e)
        return settings

    if not isinstance(overrides, dict):
        logger.warning("설정 파일 형식이 올바르지 않습니다: %s", settings_file)
        return settings

    for key, value in overrides.items():
        if key in settings:
            settings[key] = value
        else:
            logger.warning("알 수 없는 설정 키 무시: %s", key)
    return settings


def setup_logging(level: str | int = "WARNING") -> None:
    """stderr 로깅 설정 (stdout은 JSON 출력 전용)"""
    if isinstance(level, str):
        level = getattr(logging, level.upper(), logging.WARNING)
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)
