"""
명령줄 인터페이스
eval | sc | oracle | tin | tim | decompose | timeshare, 결과는 stdout 에 JSON 으로
"""

import argparse
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from .config import DEFAULT_SEED, load_settings, setup_logging
from .decomp import SearchBudget, evaluate_map, result_to_dict, search, time_share
from .model import (
    FormatError,
    GdofError,
    dumps,
    format_rationals,
    load_channel,
    load_json,
    load_map,
    load_scheme,
    validate_scheme,
)
from .report import (
    DecompositionReportGenerator,
    gdof_document,
    oracle_document,
    tim_document,
    tin_document,
)
from .run_store import RunStore
from .tim import TimTopology
from .tin import TinTarget

logger = logging.getLogger(__name__)


def _split_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _parse_powers(text: str) -> List[float]:
    try:
        return [float(x) for x in _split_list(text)]
    except ValueError:
        raise FormatError(f"P 값을 해석할 수 없습니다: {text!r}") from None


def _parse_links(text: str) -> frozenset:
    """"2,1;3,2" -> {(1,0), (2,1)} (입력은 1-based 수신기,송신기)"""
    links = set()
    for pair in filter(None, (p.strip() for p in text.split(";"))):
        parts = _split_list(pair)
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise FormatError(f"링크는 'k,i' 형식이어야 합니다: {pair!r}")
        links.add((int(parts[0]) - 1, int(parts[1]) - 1))
    return frozenset(links)


def _load_pair(args):
    channel = load_channel(args.topology)
    scheme = validate_scheme(load_scheme(args.scheme), channel)
    return channel, scheme


# ---------------------------------------------------------------------------
# 명령 처리
# ---------------------------------------------------------------------------

def cmd_eval(args) -> Dict[str, Any]:
    channel, scheme = _load_pair(args)
    return gdof_document(scheme, channel, with_streams=args.command == "sc")


def cmd_oracle(args) -> Dict[str, Any]:
    channel, scheme = _load_pair(args)
    check_seeds = args.settings["oracle_seeds"] if args.check else None
    return oracle_document(scheme, channel, _parse_powers(args.powers), args.seed, check_seeds)


def cmd_tin(args) -> Dict[str, Any]:
    channel = load_channel(args.topology)
    target = None if args.target is None else TinTarget.of(_split_list(args.target))
    return tin_document(channel, target)


def cmd_tim(args) -> Dict[str, Any]:
    channel = load_channel(args.topology)
    if args.links is not None:
        topo = TimTopology(channel.K, _parse_links(args.links))
    else:
        topo = TimTopology.from_channel(channel, args.threshold)
    return tim_document(topo)


def cmd_decompose(args) -> Dict[str, Any]:
    channel = load_channel(args.topology)
    targets = None if args.tin_targets is None else tuple(TinTarget.of(_split_list(args.tin_targets)).d)

    if args.map:
        result = evaluate_map(channel, load_map(args.map), targets)
        return result_to_dict(result, with_scheme=True)

    cap = args.exhaustive_cap if args.exhaustive_cap is not None else args.settings["exhaustive_cap"]
    search_result = search(channel, SearchBudget(exhaustive_cap=int(cap), tin_targets=targets))

    generator = DecompositionReportGenerator()
    report = generator.strip_volatile(generator.generate(channel, search_result, title=args.title))

    if args.emit_schemes:
        written = generator.emit_schemes(search_result, args.emit_schemes)
        logger.info("스킴 %d 개 저장: %s", len(written), args.emit_schemes)
    if args.markdown:
        generator.save_markdown(report, args.markdown)
    if args.save:
        report["run_id"] = RunStore().save_run(channel, report, title=args.title, exhaustive_cap=int(cap))
    return report


def _gdof_tuple(item: str) -> List[Any]:
    """파일(verified / gdof 키를 가진 JSON) 또는 쉼표로 구분된 값"""
    path = Path(item)
    if path.is_file():
        doc = load_json(path)
        for key in ("verified", "gdof"):
            if isinstance(doc, dict) and key in doc:
                return list(doc[key])
        raise FormatError(f"{item}: 'verified' 또는 'gdof' 키가 없습니다")
    return _split_list(item)


def cmd_timeshare(args) -> Dict[str, Any]:
    tuples = [_gdof_tuple(item) for item in args.items]
    return {"gdof": format_rationals(time_share(tuples, _split_list(args.weights)))}


# ---------------------------------------------------------------------------
# 파서
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="run.py",
        description="TIM-TIN GDoF 계산기",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
예시:
  python run.py eval -t fixtures/golden_topology.json -s fixtures/baseline_scheme.json
  python run.py oracle -t topo.json -s scheme.json -P 1e6,1e10 --seed 0
  python run.py decompose -t fixtures/golden_topology.json --emit-schemes out/
  python run.py timeshare -w 0.5,0.5 0.3,0.3 1/3,1/3
        """,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="디버그 로그 (stderr)")
    parser.add_argument("--settings", dest="settings_file", help="설정 파일 경로 (기본: .timtin.json)")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_pair(p):
        p.add_argument("-t", "--topology", required=True, help="위상 JSON 파일")
        p.add_argument("-s", "--scheme", required=True, help="스킴 JSON 파일")
        return p

    with_pair(sub.add_parser("eval", help="사용자별 GDoF"))
    with_pair(sub.add_parser("sc", help="GDoF + 스트림별 연속 간섭 제거 분해"))

    p = with_pair(sub.add_parser("oracle", help="유한 P 전송률과 기울기"))
    p.add_argument("-P", dest="powers", default="1e6,1e10", help="쉼표로 구분된 P 값 (기본: 1e6,1e10)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="위상 난수 시드 (기본: 0)")
    p.add_argument("--check", action="store_true", help="여러 시드 과반수 일치 검사")

    p = sub.add_parser("tin", help="TIN 대칭 GDoF 또는 목표 달성 가능성")
    p.add_argument("-t", "--topology", required=True)
    p.add_argument("--target", help="쉼표로 구분된 사용자별 목표 GDoF")

    p = sub.add_parser("tim", help="TIM 비율과 벡터 할당")
    p.add_argument("-t", "--topology", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--threshold", default="0", help="강도가 이 값보다 큰 링크를 TIM 링크로 (기본: 0)")
    group.add_argument("--links", help="명시적 링크 목록 'k,i;k,i' (1-based 수신기,송신기)")

    p = sub.add_parser("decompose", help="TIM-TIN 분해 탐색")
    p.add_argument("-t", "--topology", required=True)
    p.add_argument("--exhaustive-cap", type=int, help="전수 탐색 최대 링크 수 (기본: 16)")
    p.add_argument("--map", help="탐색 대신 주어진 분해 맵 하나만 평가")
    p.add_argument("--tin-targets", help="비대칭 TIN 목표 (쉼표로 구분)")
    p.add_argument("--emit-schemes", metavar="DIR", help="프런티어 스킴을 DIR 에 저장")
    p.add_argument("--markdown", metavar="FILE", help="마크다운 보고서 저장")
    p.add_argument("--title", default="TIM-TIN 분해 보고서", help="보고서 제목")
    p.add_argument("--save", action="store_true", help="실행 기록을 data/runs 에 저장")

    p = sub.add_parser("timeshare", help="GDoF 튜플의 시분할")
    p.add_argument("-w", "--weights", required=True, help="쉼표로 구분된 가중치 (합 1)")
    p.add_argument("items", nargs="+", help="결과 JSON 파일 또는 'a,b,...' 튜플")

    return parser


COMMANDS = {
    "eval": cmd_eval,
    "sc": cmd_eval,
    "oracle": cmd_oracle,
    "tin": cmd_tin,
    "tim": cmd_tim,
    "decompose": cmd_decompose,
    "timeshare": cmd_timeshare,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """명령 실행, 종료 코드 반환 (0 성공 / 1 도메인 오류 / 2 사용법 오류)"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0

    args.settings = load_settings(args.settings_file)
    setup_logging("DEBUG" if args.verbose else args.settings["log_level"])

    try:
        data = COMMANDS[args.command](args)
    except (GdofError, OSError, ValueError) as e:
        logger.debug("명령 실패", exc_info=True)
        print(dumps({"error": str(e)}))
        return 1

    print(dumps(data))
    return 0
