"""
TIM-TIN 분해 모듈
교차 링크를 TIM / TIN 성분으로 나누어 각각 풀고, 사용자별 곱 GDoF를 주장한 뒤
결합 스킴을 합성해 평가기로 검증한다. 분해 탐색, 파레토 필터, 시분할 포함.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .config import DEFAULT_EXHAUSTIVE_CAP
from .evaluator import tin_reduction_gdof, user_gdof
from .model import (
    ChannelMatrix,
    DecompositionMap,
    GdofError,
    MapMismatchError,
    Scheme,
    WeightMismatchError,
    format_rational,
    format_rationals,
    map_to_dict,
    parse_rational,
    scheme_to_dict,
    validate_scheme,
)
from .tim import TimSolution, TimTopology, tim_solve
from .tin import TinSolution, TinTarget, tin_feasible, tin_symmetric

logger = logging.getLogger(__name__)

EXHAUSTIVE = "exhaustive"
THRESHOLD = "threshold"


@dataclass(frozen=True)
class DecompositionResult:
    """분해 맵 하나의 평가 결과 (주장값과 검증값, 판정)"""

    map: DecompositionMap
    mask: int
    tin_sym: Optional[Fraction]
    tin_feasible: bool
    tin_fractions: Tuple[Fraction, ...]
    tim_fractions: Tuple[Fraction, ...]
    tim_method: str
    products: Tuple[Fraction, ...]
    power_exps: Optional[Tuple[Fraction, ...]]
    scheme: Optional[Scheme]
    verified: Tuple[Fraction, ...]
    verdict: bool

    @property
    def symmetric(self) -> Fraction:
        return min(self.verified)


@dataclass(frozen=True)
class SearchBudget:
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP
    tin_targets: Optional[Tuple[Fraction, ...]] = None


@dataclass
class SearchResult:
    frontier: List[DecompositionResult]
    evaluated: List[DecompositionResult] = field(default_factory=list)
    mode: str = EXHAUSTIVE


def split(channel: ChannelMatrix, dmap: DecompositionMap) -> Tuple[ChannelMatrix, TimTopology]:
    """TIN 채널(TIM 링크 제거)과 TIM 위상(TIM 링크만)으로 분리"""
    present = set(channel.cross_links())
    overlap = dmap.tim_links & dmap.tin_links
    missing = {link for link in present if dmap.tag(*link) is None}
    extra = (dmap.tim_links | dmap.tin_links) - present
    for problem, reason in ((overlap, "TIM과 TIN에 모두 지정됨"),
                            (missing, "태그가 없음"),
                            (extra, "채널에 없는 링크")):
        if problem:
            k, i = min(problem)
            raise MapMismatchError(f"링크 ({k + 1},{i + 1}): {reason}")

    return channel.without_links(dmap.tim_links), TimTopology(channel.K, frozenset(dmap.tim_links))


def synthesize_scheme(tin: TinSolution, tim: TimSolution, channel: ChannelMatrix) -> Scheme:
    """TIM 벡터마다 스트림 하나, 전력 지수는 TIN 해의 r_k 그대로"""
    if not tin.feasible:
        raise GdofError("TIN 해가 실행 불가능하여 스킴을 합성할 수 없습니다")
    streams = [
        (k, vector, tin.r[k])
        for k in range(channel.K)
        for vector in tim.directions[k]
    ]
    return validate_scheme(Scheme.build(tim.n, streams), channel)


def evaluate_map(
    channel: ChannelMatrix,
    dmap: DecompositionMap,
    tin_targets: Optional[Sequence[Any]] = None,
) -> DecompositionResult:
    """분해 맵 평가: TIN / TIM 풀이 -> 곱 -> 스킴 합성 -> 평가기 검증"""
    tin_channel, topo = split(channel, dmap)
    K = channel.K

    if tin_targets is None:
        tin_sym, tin_sol = tin_symmetric(tin_channel)
    else:
        tin_sym = None
        tin_sol = tin_feasible(tin_channel, TinTarget.of(tin_targets))

    tim_sol = tim_solve(topo)

    if tin_sol.feasible:
        # 표준 r 이 실제로 달성하는 n=1 GDoF (대칭 목표 이상)
        tin_fractions = tin_reduction_gdof(tin_channel, tin_sol.r)
        products = tuple(a * b for a, b in zip(tin_fractions, tim_sol.fractions))
        scheme = synthesize_scheme(tin_sol, tim_sol, channel)
        verified = tuple(user_gdof(scheme, channel, k).gdof for k in range(K))
        verdict = all(v >= p for v, p in zip(verified, products))
        if not verdict:
            logger.warning("맵 %d: 검증값 %s 가 곱 %s 에 못 미침",
                           dmap.bitmask(channel), format_rationals(verified), format_rationals(products))
    else:
        tin_fractions = TinTarget.of(tin_targets).d
        logger.info("TIN 목표 %s 가 실행 불가능합니다", format_rationals(tin_fractions))
        products = tuple(a * b for a, b in zip(tin_fractions, tim_sol.fractions))
        scheme = None
        verified = (Fraction(0),) * K
        verdict = False

    return DecompositionResult(
        map=dmap,
        mask=dmap.bitmask(channel),
        tin_sym=tin_sym,
        tin_feasible=tin_sol.feasible,
        tin_fractions=tuple(tin_fractions),
        tim_fractions=tim_sol.fractions,
        tim_method=tim_sol.method,
        products=products,
        power_exps=tin_sol.r,
        scheme=scheme,
        verified=verified,
        verdict=verdict,
    )


def threshold_maps(channel: ChannelMatrix) -> List[DecompositionMap]:
    """서로 다른 교차 강도 tau 마다 강도 >= tau 를 TIM으로, 그리고 전부 TIN인 맵"""
    strengths = sorted({channel.strength(k, i) for k, i in channel.cross_links()})
    maps = [DecompositionMap.from_bitmask(channel, 0)]
    maps.extend(DecompositionMap.by_threshold(channel, tau) for tau in strengths)
    return maps


def _dominates(a: Sequence[Fraction], b: Sequence[Fraction]) -> bool:
    return all(x >= y for x, y in zip(a, b)) and any(x > y for x, y in zip(a, b))


def pareto_front(results: Sequence[DecompositionResult]) -> List[DecompositionResult]:
    """판정이 참인 결과 중 검증값이 지배되지 않는 것 (같은 튜플은 비트마스크가 작은 하나만)"""
    best: Dict[Tuple[Fraction, ...], DecompositionResult] = {}
    for r in sorted((r for r in results if r.verdict), key=lambda r: r.mask):
        best.setdefault(r.verified, r)
    distinct = list(best.values())
    return [
        r for r in distinct
        if not any(_dominates(o.verified, r.verified) for o in distinct)
    ]


def search(channel: ChannelMatrix, budget: Optional[SearchBudget] = None) -> SearchResult:
    """분해 탐색: L <= 상한이면 2^L 전수, 아니면 임계값 맵 + 단일 링크 뒤집기"""
    budget = budget or SearchBudget()
    L = len(channel.cross_links())

    if L <= budget.exhaustive_cap:
        mode = EXHAUSTIVE
        masks = list(range(1 << L))
    else:
        mode = THRESHOLD
        base = {m.bitmask(channel) for m in threshold_maps(channel)}
        flipped = {mask ^ (1 << j) for mask in base for j in range(L)}
        masks = sorted(base | flipped)
    logger.info("분해 탐색 시작: L=%d, mode=%s, 맵 %d 개", L, mode, len(masks))

    evaluated = []
    for count, mask in enumerate(masks, start=1):
        dmap = DecompositionMap.from_bitmask(channel, mask)
        evaluated.append(evaluate_map(channel, dmap, budget.tin_targets))
        if count % 256 == 0:
            logger.info("진행: %d / %d", count, len(masks))

    frontier = pareto_front(evaluated)
    failed = sum(1 for r in evaluated if not r.verdict)
    if failed:
        logger.warning("검증 실패 맵 %d 개 (프런티어에서 제외)", failed)
    logger.info("프런티어 %d 개", len(frontier))
    return SearchResult(frontier, evaluated, mode)


def time_share(
    items: Sequence[Union[DecompositionResult, Sequence[Any]]],
    weights: Sequence[Any],
) -> Tuple[Fraction, ...]:
    """검증된 GDoF 튜플들의 가중 평균 (가중치 >= 0, 합 1)"""
    if not items or len(items) != len(weights):
        raise WeightMismatchError(f"튜플 {len(items)} 개와 가중치 {len(weights)} 개가 맞지 않습니다")
    w = [parse_rational(x) for x in weights]
    if any(x < 0 for x in w):
        raise WeightMismatchError("가중치는 0 이상이어야 합니다")
    if sum(w) != 1:
        raise WeightMismatchError(f"가중치 합이 1이 아닙니다: {format_rational(sum(w))}")

    tuples = [
        item.verified if isinstance(item, DecompositionResult) else tuple(parse_rational(x) for x in item)
        for item in items
    ]
    K = len(tuples[0])
    if any(len(t) != K for t in tuples):
        raise WeightMismatchError("GDoF 튜플 길이가 서로 다릅니다")
    return tuple(sum((wj * t[k] for wj, t in zip(w, tuples)), Fraction(0)) for k in range(K))


def result_to_dict(result: DecompositionResult, with_scheme: bool = False) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "mask": result.mask,
        "map": map_to_dict(result.map),
        "tin_sym": None if result.tin_sym is None else format_rational(result.tin_sym),
        "tin_feasible": result.tin_feasible,
        "tin_fractions": format_rationals(result.tin_fractions),
        "tim_fractions": format_rationals(result.tim_fractions),
        "tim_method": result.tim_method,
        "products": format_rationals(result.products),
        "power_exps": None if result.power_exps is None else format_rationals(result.power_exps),
        "verified": format_rationals(result.verified),
        "symmetric": format_rational(result.symmetric),
        "verdict": result.verdict,
    }
    if with_scheme and result.scheme is not None:
        data["scheme"] = scheme_to_dict(result.scheme)
    return data
