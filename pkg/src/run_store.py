"""
실행 기록 관리 모듈
분해 탐색 실행의 생성, 저장, 로드, 수정, 삭제
"""

import json
import logging
import shutil
import uuid
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .config import RUNS_DIR
from .model import channel_to_dict, ChannelMatrix

logger = logging.getLogger(__name__)


class RunNotFoundError(KeyError):
    """없는 실행 ID"""


class RunStore:
    """분해 탐색 실행 기록 관리 (data/runs/<uuid>/)"""

    def __init__(self, base_dir: Optional[Path] = None):
        self.base_dir = Path(base_dir) if base_dir else RUNS_DIR
        self.base_dir.mkdir(parents=True, exist_ok=True)

    def _get_run_dir(self, run_id: str) -> Path:
        run_dir = self.base_dir / run_id
        # 경로 조작 방지: 기준 디렉토리 바로 아래만 허용
        if run_dir.parent != self.base_dir or not (run_dir / "metadata.json").exists():
            raise RunNotFoundError(run_id)
        return run_dir

    def _load_json(self, path: Path) -> Dict[str, Any]:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)

    def _save_json(self, path: Path, data: Any) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, ensure_ascii=False, indent=2)

    def create_run(
        self,
        channel: ChannelMatrix,
        title: str = "",
        exhaustive_cap: Optional[int] = None,
    ) -> Tuple[str, Dict[str, Any]]:
        """새 실행 생성"""
        run_id = str(uuid.uuid4())
        run_dir = self.base_dir / run_id
        run_dir.mkdir(parents=True, exist_ok=True)

        metadata = {
            "id": run_id,
            "title": title or "제목 없음",
            "K": channel.K,
            "num_links": len(channel.cross_links()),
            "exhaustive_cap": exhaustive_cap,
            "created_at": datetime.now().isoformat(),
        }
        self._save_json(run_dir / "metadata.json", metadata)
        self._save_json(run_dir / "topology.json", channel_to_dict(channel))
        logger.info("실행 생성: %s", run_id)
        return run_id, metadata

    def save_result(self, run_id: str, result: Dict[str, Any]) -> None:
        """탐색 보고서 저장"""
        self._save_json(self._get_run_dir(run_id) / "result.json", result)

    def save_run(self, channel: ChannelMatrix, result: Dict[str, Any], title: str = "",
                 exhaustive_cap: Optional[int] = None) -> str:
        """실행 생성 및 결과 저장"""
        run_id, _ = self.create_run(channel, title, exhaustive_cap)
        self.save_result(run_id, result)
        return run_id

    def list_runs(self) -> List[Dict[str, Any]]:
        """실행 목록 조회 (최신순)"""
        runs = []
        for meta_path in self.base_dir.glob("*/metadata.json"):
            try:
                runs.append(self._load_json(meta_path))
            except (OSError, ValueError) as e:
                logger.warning("실행 메타데이터 로드 오류 (%s): %s", meta_path, e)

        runs.sort(key=lambda x: x.get("created_at", ""), reverse=True)
        return runs

    def load_run(self, run_id: str) -> Tuple[Dict[str, Any], Optional[Dict[str, Any]]]:
        """실행 메타데이터와 결과 로드"""
        run_dir = self._get_run_dir(run_id)
        metadata = self._load_json(run_dir / "metadata.json")

        result = None
        result_path = run_dir / "result.json"
        if result_path.exists():
            result = self._load_json(result_path)
        return metadata, result

    def update_run_title(self, run_id: str, new_title: str) -> None:
        """실행 제목 수정"""
        meta_path = self._get_run_dir(run_id) / "metadata.json"
        metadata = self._load_json(meta_path)
        metadata["title"] = new_title
        self._save_json(meta_path, metadata)

    def delete_run(self, run_id: str) -> None:
        """실행 삭제"""
        shutil.rmtree(self._get_run_dir(run_id))
        logger.info("실행 삭제: %s", run_id)
