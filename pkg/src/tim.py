"""
TIM(위상 간섭 관리) 모듈
이진 위상에서 정렬 그래프 / 충돌 그래프를 만들고, 내부 충돌이 없으면 1/2 전송률,
그렇지 않으면 충돌 그래프의 분수 채색(직교 시분할)으로 사용자별 신호 공간 비율과
벡터 할당을 구한다.
"""

from __future__ import annotations

import functools
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Tuple

import networkx as nx
import numpy as np
from scipy.optimize import linprog

from .config import COLORING_EXACT_MAX_USERS, COLORING_MAX_DENOMINATOR
from .evaluator import exact_rank
from .model import ChannelMatrix, DimensionMismatchError, Link, parse_rational

logger = logging.getLogger(__name__)

FULL = "full"
HALF_RATE = "half_rate"
COLORING = "coloring"

Vector = Tuple[Fraction, ...]


@dataclass(frozen=True)
class TimTopology:
    """K 사용자와 교차 링크 집합 L, (k, i) = 수신기 k 가 송신기 i 를 들음 (모두 같은 강도)"""

    K: int
    links: FrozenSet[Link]

    def __post_init__(self):
        for k, i in self.links:
            if k == i:
                raise DimensionMismatchError(f"자기 링크는 허용되지 않습니다: ({k + 1},{i + 1})")
            if not (0 <= k < self.K and 0 <= i < self.K):
                raise DimensionMismatchError(f"링크 ({k + 1},{i + 1})가 범위(1..{self.K}) 밖입니다")

    @classmethod
    def from_channel(cls, channel: ChannelMatrix, threshold=0) -> "TimTopology":
        """강도가 threshold 보다 큰 교차 링크를 TIM 링크로"""
        threshold = parse_rational(threshold)
        return cls(channel.K, frozenset(
            (k, i) for k, i in channel.cross_links() if channel.strength(k, i) > threshold
        ))

    def interferers(self, k: int) -> List[int]:
        return sorted(i for kk, i in self.links if kk == k)


class TimGraphs(NamedTuple):
    alignment: nx.Graph
    conflict: nx.Graph


@dataclass(frozen=True)
class TimSolution:
    """사용자별 신호 공간 비율과 n 차원 벡터 할당 (사용자별 벡터 목록)"""

    fractions: Tuple[Fraction, ...]
    method: str
    n: int
    directions: Tuple[Tuple[Vector, ...], ...]
    user_methods: Tuple[str, ...]


def build_graphs(topo: TimTopology) -> TimGraphs:
    """정렬 간선 {i,j}: 어떤 수신기 k 가 i, j 를 모두 들음 / 충돌 간선 {i,k}: (k,i) in L"""
    alignment = nx.Graph()
    conflict = nx.Graph()
    alignment.add_nodes_from(range(topo.K))
    conflict.add_nodes_from(range(topo.K))
    for k in range(topo.K):
        alignment.add_edges_from(itertools.combinations(topo.interferers(k), 2))
    conflict.add_edges_from((i, k) for k, i in topo.links)
    return TimGraphs(alignment, conflict)


# ---------------------------------------------------------------------------
# 하위 문제별 계획: (블록 길이, 사용자 -> 블록 내 벡터 목록, 비율)
# ---------------------------------------------------------------------------

class _Plan(NamedTuple):
    method: str
    fraction: Fraction
    block: int
    vectors: Dict[int, List[Vector]]


def _half_rate_plan(graphs: TimGraphs, members: List[int], next_t: int) -> Optional[_Plan]:
    """정렬 성분 내부에 충돌 간선이 없으면 성분마다 방향 [1, t] 하나"""
    aligned = graphs.alignment.subgraph(members)
    components = sorted((sorted(c) for c in nx.connected_components(aligned)), key=lambda c: c[0])
    for comp in components:
        for u, v in itertools.combinations(comp, 2):
            if graphs.conflict.has_edge(u, v):
                logger.debug("내부 충돌: 사용자 %d, %d", u + 1, v + 1)
                return None

    vectors = {}
    for offset, comp in enumerate(components):
        direction = (Fraction(1), Fraction(next_t + offset))
        for user in comp:
            vectors[user] = [direction]
    return _Plan(HALF_RATE, Fraction(1, 2), 2, vectors)


def fractional_coloring(conflict: nx.Graph) -> Optional[Tuple[Fraction, Dict[Tuple[int, ...], Fraction]]]:
    """극대 독립 집합 위의 LP로 분수 채색수와 가중치 (정확한 유리수로 스냅 후 검증)

    원문제 해가 정확히 실행 가능하지 않으면 None. 쌍대 증명서까지 맞으면 최적.
    """
    nodes = sorted(conflict.nodes)
    sets = sorted(tuple(sorted(c)) for c in nx.find_cliques(nx.complement(conflict)))
    cover = np.array([[1.0 if v in s else 0.0 for s in sets] for v in nodes])

    result = linprog(
        c=np.ones(len(sets)),
        A_ub=-cover,
        b_ub=-np.ones(len(nodes)),
        bounds=(0, None),
        method="highs",
    )
    if result.status != 0:
        logger.warning("분수 채색 LP 실패: %s", result.message)
        return None

    x = [max(Fraction(0), Fraction(v).limit_denominator(COLORING_MAX_DENOMINATOR)) for v in result.x]
    for v in nodes:
        if sum(x[j] for j, s in enumerate(sets) if v in s) < 1:
            logger.info("LP 해 스냅 후 사용자 %d 가 덮이지 않아 거부", v + 1)
            return None
    chi = sum(x)

    y = [max(Fraction(0), Fraction(-m).limit_denominator(COLORING_MAX_DENOMINATOR))
         for m in result.ineqlin.marginals]
    dual_ok = sum(y) == chi and all(
        sum(y[nodes.index(v)] for v in s) <= 1 for s in sets
    )
    if not dual_ok:
        logger.info("쌍대 증명서 검증 실패, chi=%s 를 상계로 사용", chi)

    return chi, {s: x[j] for j, s in enumerate(sets) if x[j] > 0}


@functools.lru_cache(maxsize=4096)
def _cached_coloring(nodes: Tuple[int, ...], edges: Tuple[Tuple[int, int], ...]):
    # 분해 탐색에서 같은 충돌 하위 그래프가 반복되므로 LP 결과를 재사용
    graph = nx.Graph()
    graph.add_nodes_from(nodes)
    graph.add_edges_from(edges)
    return fractional_coloring(graph)


def _coloring_plan(graphs: TimGraphs, members: List[int]) -> _Plan:
    """충돌 그래프 채색 -> 직교 시간 슬롯"""
    sub = graphs.conflict.subgraph(members)
    lp = None
    if len(members) <= COLORING_EXACT_MAX_USERS:
        lp = _cached_coloring(tuple(members), tuple(sorted(tuple(sorted(e)) for e in sub.edges)))
    if lp is None:
        coloring = nx.greedy_color(sub, strategy="largest_first")
        classes: Dict[int, List[int]] = {}
        for user, color in coloring.items():
            classes.setdefault(color, []).append(user)
        chi = Fraction(len(classes))
        weights = {tuple(sorted(c)): Fraction(1) for c in classes.values()}
        logger.debug("탐욕 채색: %d 색", len(classes))
    else:
        chi, weights = lp

    shares = {s: w / chi for s, w in sorted(weights.items())}
    block = math.lcm(*(share.denominator for share in shares.values()))
    slots: Dict[int, List[int]] = {user: [] for user in members}
    cursor = 0
    for s, share in shares.items():
        count = int(share * block)
        for user in s:
            slots[user].extend(range(cursor, cursor + count))
        cursor += count

    vectors = {
        user: [_unit(block, t) for t in sorted(slots[user])]
        for user in members
    }
    return _Plan(COLORING, 1 / chi, block, vectors)


def _unit(n: int, t: int) -> Vector:
    return tuple(Fraction(1) if j == t else Fraction(0) for j in range(n))


def _tile(vector: Vector, block: int, n: int) -> List[Vector]:
    """블록 벡터를 n 차원에 블록 대각으로 반복 배치"""
    tiled = []
    for rep in range(n // block):
        full = [Fraction(0)] * n
        full[rep * block:(rep + 1) * block] = vector
        tiled.append(tuple(full))
    return tiled


def tim_solve(topo: TimTopology) -> TimSolution:
    """TIM 성분의 사용자별 신호 공간 비율과 벡터 할당"""
    graphs = build_graphs(topo)
    active = [u for u in range(topo.K) if graphs.conflict.degree(u) > 0]
    components = sorted(
        (sorted(c) for c in nx.connected_components(graphs.conflict.subgraph(active))),
        key=lambda c: c[0],
    )

    plans: List[Tuple[List[int], _Plan]] = []
    next_t = 0
    for members in components:
        plan = _half_rate_plan(graphs, members, next_t)
        if plan is None:
            plan = _coloring_plan(graphs, members)
        else:
            next_t += len({v[0] for v in plan.vectors.values()})
        plans.append((members, plan))

    n = math.lcm(*(plan.block for _, plan in plans)) if plans else 1

    fractions = [Fraction(1)] * topo.K
    user_methods = [FULL] * topo.K
    directions: List[Tuple[Vector, ...]] = [
        tuple(_unit(n, t) for t in range(n)) for _ in range(topo.K)
    ]
    for members, plan in plans:
        for user in members:
            fractions[user] = plan.fraction
            user_methods[user] = plan.method
            directions[user] = tuple(
                tiled for v in plan.vectors[user] for tiled in _tile(v, plan.block, n)
            )

    methods = {plan.method for _, plan in plans}
    method = COLORING if COLORING in methods else HALF_RATE if methods else FULL
    logger.debug("TIM 해: method=%s n=%d fractions=%s", method, n, fractions)
    return TimSolution(tuple(fractions), method, n, tuple(directions), tuple(user_methods))


def check_assignment(topo: TimTopology, solution: TimSolution) -> bool:
    """벡터 할당의 정확한 건전성 검사

    - 충돌하는 두 사용자의 부분공간은 서로 독립
    - 1/2 방법에서 정렬된 사용자는 같은 방향
    - 사용자 자신의 벡터는 독립이고 개수 / n >= 비율
    """
    graphs = build_graphs(topo)
    for k in range(topo.K):
        own = list(solution.directions[k])
        if exact_rank(own) != len(own) or Fraction(len(own), solution.n) < solution.fractions[k]:
            return False
    for i, k in graphs.conflict.edges:
        vi, vk = list(solution.directions[i]), list(solution.directions[k])
        if exact_rank(vi + vk) != exact_rank(vi) + exact_rank(vk):
            return False
    for i, j in graphs.alignment.edges:
        if solution.user_methods[i] == solution.user_methods[j] == HALF_RATE:
            if solution.directions[i] != solution.directions[j]:
                return False
    return True
