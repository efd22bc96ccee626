"""
TIN(간섭을 잡음으로 취급) 전력 레벨 할당 모듈
목표 GDoF 달성 가능성을 차분 제약 시스템의 음의 사이클 판정(벨만-포드)으로 결정하고,
대칭 GDoF를 최대화하며 이를 달성하는 전력 지수를 추출한다.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .model import ChannelMatrix, DimensionMismatchError, format_rational, parse_rational

logger = logging.getLogger(__name__)

Edge = Tuple[int, int, Any]


@dataclass(frozen=True)
class TinTarget:
    """사용자별 목표 GDoF (유리수 >= 0)"""

    d: Tuple[Fraction, ...]

    @classmethod
    def of(cls, values: Sequence[Any]) -> "TinTarget":
        return cls(tuple(parse_rational(v) for v in values))

    @classmethod
    def symmetric(cls, K: int, t: Any) -> "TinTarget":
        return cls((parse_rational(t),) * K)


@dataclass(frozen=True)
class TinSolution:
    """feasible 이면 r (표준 해: 성분별 최대 전력 지수), 아니면 음의 사이클 증거"""

    feasible: bool
    r: Optional[Tuple[Fraction, ...]] = None
    negative_cycle: Optional[Tuple[int, ...]] = None
    cycle_weight: Optional[Fraction] = None


def constraint_graph(channel: ChannelMatrix, d: Sequence[Any]) -> Dict[Tuple[int, int], Any]:
    """차분 제약 그래프 {(u, v): w}, 제약 x_v - x_u <= w, 노드 K는 기준(전력 0) 노드

    - r_k <= 0                                : K -> k, 0
    - r_k >= d_k - a_kk                       : k -> K, a_kk - d_k
    - r_k - r_j >= d_k - a_kk + a_kj (a_kj>0) : k -> j, a_kk - a_kj - d_k
    d_k = 0 인 사용자는 GDoF 0이 항상 달성되므로 하한 / 간섭 제약이 없다.
    """
    K = channel.K
    source = K
    numeric = type(d[0]) if d and isinstance(d[0], float) else Fraction
    graph: Dict[Tuple[int, int], Any] = {}
    for k in range(K):
        graph[(source, k)] = numeric(0)
    for k in range(K):
        if d[k] <= 0:
            continue
        a_kk = numeric(channel.strength(k, k))
        graph[(k, source)] = a_kk - d[k]
        for j in range(K):
            if j != k and channel.is_present(k, j):
                graph[(k, j)] = a_kk - numeric(channel.strength(k, j)) - d[k]
    return graph


def bellman_ford(
    num_nodes: int, edges: Sequence[Edge], source: int
) -> Tuple[List[Any], Optional[List[int]]]:
    """최단 거리와 (있으면) 음의 사이클 노드 목록 (간선 순서대로)"""
    dist: List[Any] = [None] * num_nodes
    pred: List[Optional[int]] = [None] * num_nodes
    dist[source] = 0

    last = None
    for _ in range(num_nodes):
        last = None
        for u, v, w in edges:
            if dist[u] is None:
                continue
            if dist[v] is None or dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                pred[v] = u
                last = v
        if last is None:
            return dist, None

    # num_nodes 번째 반복에서도 완화되면 음의 사이클
    x = last
    for _ in range(num_nodes):
        x = pred[x]
    cycle = [x]
    y = pred[x]
    while y != x:
        cycle.append(y)
        y = pred[y]
    cycle.reverse()
    return dist, cycle


def _solve(channel: ChannelMatrix, d: Sequence[Any]) -> TinSolution:
    graph = constraint_graph(channel, d)
    edges = [(u, v, w) for (u, v), w in graph.items()]
    dist, cycle = bellman_ford(channel.K + 1, edges, channel.K)
    if cycle is not None:
        weight = sum(graph[(cycle[i], cycle[(i + 1) % len(cycle)])] for i in range(len(cycle)))
        return TinSolution(False, negative_cycle=tuple(cycle), cycle_weight=weight)
    return TinSolution(True, r=tuple(dist[k] - dist[channel.K] for k in range(channel.K)))


def tin_feasible(channel: ChannelMatrix, target: TinTarget) -> TinSolution:
    """목표 GDoF 튜플이 전력 제어 + TIN으로 달성 가능한지 (정확한 유리수)"""
    if len(target.d) != channel.K:
        raise DimensionMismatchError(f"목표 길이 {len(target.d)} != K={channel.K}")
    if any(x < 0 for x in target.d):
        raise ValueError("목표 GDoF는 0 이상이어야 합니다")
    solution = _solve(channel, [Fraction(x) for x in target.d])
    if solution.feasible:
        logger.debug("TIN 달성 가능: d=%s r=%s",
                     [format_rational(x) for x in target.d],
                     [format_rational(x) for x in solution.r])
    return solution


def _refine_by_cycles(channel: ChannelMatrix, t: Fraction) -> Tuple[Fraction, TinSolution]:
    """음의 사이클의 비율 C/m 으로 t를 낮춰 가며 정확한 최댓값에 도달

    t 는 항상 최적값 이상이고 매 단계 엄격히 줄어든다 (사이클 수는 유한).
    """
    target = TinTarget.symmetric(channel.K, t)
    solution = tin_feasible(channel, target)
    while not solution.feasible:
        # 사이클 가중치 = C - m t, m = 사이클 위 사용자 노드 수
        m = sum(1 for node in solution.negative_cycle if node != channel.K)
        t = max(Fraction(0), (solution.cycle_weight + m * t) / m)
        logger.debug("음의 사이클 %s, t -> %s", solution.negative_cycle, format_rational(t))
        solution = tin_feasible(channel, TinTarget.symmetric(channel.K, t))
    return t, solution


def tin_symmetric(channel: ChannelMatrix) -> Tuple[Fraction, TinSolution]:
    """대칭 GDoF 최대화: 직접 링크 최솟값에서 시작해 사이클 비율로 하강"""
    upper = min(channel.strength(k, k) for k in range(channel.K))
    return _refine_by_cycles(channel, upper)
