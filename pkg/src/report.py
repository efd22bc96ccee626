"""
분해 보고서 생성 모듈
분해 탐색 결과를 JSON / 마크다운 보고서와 프런티어별 스킴 파일로 변환
"""

from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from .config import DEFAULT_SEED
from .decomp import SearchResult, result_to_dict
from .evaluator import evaluate, finite_p_rate, oracle_agreement, slope_estimate
from .model import (
    ChannelMatrix,
    Scheme,
    channel_to_dict,
    dumps,
    format_rational,
    format_rationals,
    report_to_dict,
    save_json,
    scheme_to_dict,
)
from .tim import TimTopology, check_assignment, tim_solve
from .tin import TinTarget, tin_feasible, tin_symmetric


class DecompositionReportGenerator:
    """분해 탐색 보고서 생성"""

    def generate(
        self,
        channel: ChannelMatrix,
        search_result: SearchResult,
        title: str = "TIM-TIN 분해 보고서",
        include_evaluated: bool = True,
    ) -> Dict[str, Any]:
        """탐색 결과로부터 보고서 생성"""
        frontier = [result_to_dict(r) for r in search_result.frontier]
        best = max(search_result.frontier, key=lambda r: (r.symmetric, -r.mask), default=None)

        report: Dict[str, Any] = {
            "title": title,
            "date": datetime.now().strftime("%Y-%m-%d %H:%M"),
            "topology": channel_to_dict(channel),
            "mode": search_result.mode,
            "num_links": len(channel.cross_links()),
            "num_evaluated": len(search_result.evaluated),
            "num_failed": sum(1 for r in search_result.evaluated if not r.verdict),
            "best_symmetric": None if best is None else format_rational(best.symmetric),
            "best_mask": None if best is None else best.mask,
            "frontier": frontier,
        }
        if include_evaluated:
            report["evaluated"] = [result_to_dict(r) for r in search_result.evaluated]
        return report

    def strip_volatile(self, report: Dict[str, Any]) -> Dict[str, Any]:
        """같은 입력이면 같은 바이트가 나오도록 생성 시각 제거"""
        return {key: value for key, value in report.items() if key != "date"}

    def to_markdown(self, report: Dict[str, Any]) -> str:
        """보고서를 마크다운 형식으로 변환"""
        lines = [
            f"# {report['title']}",
            "",
        ]
        if report.get("date"):
            lines.append(f"**일시:** {report['date']}")
        lines.extend([
            f"**사용자 수:** {report['topology']['K']}",
            f"**교차 링크 수:** {report['num_links']}",
            f"**탐색 방식:** {report['mode']} (맵 {report['num_evaluated']}개)",
        ])
        if report["best_symmetric"] is not None:
            lines.append(f"**최대 대칭 GDoF:** {report['best_symmetric']} (맵 #{report['best_mask']})")
        lines.append("")

        lines.extend(["## 파레토 프런티어", ""])
        if not report["frontier"]:
            lines.extend(["검증을 통과한 분해가 없습니다.", ""])
        for entry in report["frontier"]:
            lines.extend(self._result_section(entry))

        if report["num_failed"]:
            lines.extend(["## 검증 실패", ""])
            for entry in report.get("evaluated", []):
                if not entry["verdict"]:
                    lines.append(f"- 맵 #{entry['mask']}: 곱 {', '.join(entry['products'])} / "
                                 f"검증 {', '.join(entry['verified'])}")
            lines.append("")

        return "\n".join(lines)

    def _result_section(self, entry: Dict[str, Any]) -> List[str]:
        tim = ", ".join(f"{k}<-{i}" for k, i in entry["map"]["tim_links"]) or "없음"
        lines = [
            f"### 맵 #{entry['mask']} (대칭 {entry['symmetric']})",
            "",
            f"- TIM 링크: {tim}",
            f"- TIN 대칭 GDoF: {entry['tin_sym'] if entry['tin_sym'] is not None else '-'}",
            f"- TIM 방법: {entry['tim_method']}",
            "",
            "| 사용자 | TIN | TIM | 곱 | 검증 |",
            "|---|---|---|---|---|",
        ]
        rows = zip(entry["tin_fractions"], entry["tim_fractions"], entry["products"], entry["verified"])
        for k, (tin, tim_frac, product, verified) in enumerate(rows, 1):
            lines.append(f"| {k} | {tin} | {tim_frac} | {product} | {verified} |")
        lines.append("")
        return lines

    def to_json(self, report: Dict[str, Any]) -> str:
        """보고서를 JSON 형식으로 변환"""
        return dumps(report)

    def save_markdown(self, report: Dict[str, Any], filepath: str) -> None:
        """보고서를 마크다운 파일로 저장"""
        Path(filepath).write_text(self.to_markdown(report), encoding="utf-8")

    def save_json(self, report: Dict[str, Any], filepath: str) -> None:
        """보고서를 JSON 파일로 저장"""
        Path(filepath).write_text(self.to_json(report) + "\n", encoding="utf-8")

    def emit_schemes(self, search_result: SearchResult, directory: str, prefix: Optional[str] = None) -> List[str]:
        """프런티어의 각 합성 스킴을 scheme_<mask>.json 으로 저장"""
        out_dir = Path(directory)
        out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        for r in search_result.frontier:
            if r.scheme is None:
                continue
            path = out_dir / f"{prefix or 'scheme'}_{r.mask}.json"
            save_json(path, scheme_to_dict(r.scheme))
            written.append(str(path))
        return written


# ---------------------------------------------------------------------------
# 명령별 JSON 문서 (CLI / HTTP API 공용)
# ---------------------------------------------------------------------------

def _float_str(x: float) -> str:
    return f"{x:.6f}"


def gdof_document(scheme: Scheme, channel: ChannelMatrix, with_streams: bool = False) -> Dict[str, Any]:
    report = evaluate(scheme, channel)
    data = report_to_dict(report, with_streams=with_streams)
    data["symmetric"] = format_rational(report.symmetric)
    return data


def oracle_document(
    scheme: Scheme,
    channel: ChannelMatrix,
    powers: Sequence[float],
    seed: int = DEFAULT_SEED,
    check_seeds: Optional[Sequence[int]] = None,
) -> Dict[str, Any]:
    """P 별 전송률, 처음 두 P 사이 기울기, (check_seeds 가 있으면) 시드 과반수 일치 여부"""
    data: Dict[str, Any] = {
        "seed": seed,
        "P": [f"{p:g}" for p in powers],
        "rates": [[_float_str(x) for x in finite_p_rate(scheme, channel, p, seed)] for p in powers],
    }
    if len(powers) >= 2:
        report = evaluate(scheme, channel)
        slopes = slope_estimate(scheme, channel, powers[0], powers[1], seed)
        data["slopes"] = [_float_str(x) for x in slopes]
        data["gdof"] = format_rationals(report.gdof)
        if check_seeds:
            check = oracle_agreement(scheme, channel, report, seeds=check_seeds, powers=powers[:2])
            data["agree"] = list(check.agree)
    return data


def tin_document(channel: ChannelMatrix, target: Optional[TinTarget] = None) -> Dict[str, Any]:
    if target is None:
        d_sym, solution = tin_symmetric(channel)
        return {"feasible": True, "d_sym": format_rational(d_sym), "r": format_rationals(solution.r)}

    solution = tin_feasible(channel, target)
    data: Dict[str, Any] = {"feasible": solution.feasible, "target": format_rationals(target.d)}
    if solution.feasible:
        data["r"] = format_rationals(solution.r)
    else:
        # 기준 노드는 0, 사용자는 1-based
        data["negative_cycle"] = [0 if v == channel.K else v + 1 for v in solution.negative_cycle]
        data["cycle_weight"] = format_rational(solution.cycle_weight)
    return data


def tim_document(topo: TimTopology) -> Dict[str, Any]:
    solution = tim_solve(topo)
    return {
        "fractions": format_rationals(solution.fractions),
        "method": solution.method,
        "n": solution.n,
        "directions": [[format_rationals(v) for v in vectors] for vectors in solution.directions],
        "user_methods": list(solution.user_methods),
        "certified": check_assignment(topo, solution),
    }
