from fractions import Fraction as F

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src import fixtures
from src.evaluator import user_gdof
from src.model import DimensionMismatchError, Scheme, validate_channel, validate_scheme
from src.tim import (
    COLORING,
    FULL,
    HALF_RATE,
    TimSolution,
    TimTopology,
    build_graphs,
    check_assignment,
    fractional_coloring,
    tim_solve,
)


def topology(K, pairs):
    """1-based (수신기, 송신기) 목록으로 위상 생성"""
    return TimTopology(K, frozenset((k - 1, i - 1) for k, i in pairs))


def edge_set(graph):
    return {frozenset((u + 1, v + 1)) for u, v in graph.edges}


def binary_channel(topo):
    alpha = [[1 if k == i or (k, i) in topo.links else 0 for i in range(topo.K)] for k in range(topo.K)]
    return validate_channel(alpha)


def scheme_from_solution(topo, solution):
    streams = [(k, v, 0) for k in range(topo.K) for v in solution.directions[k]]
    return Scheme.build(solution.n, streams)


@st.composite
def topologies(draw, max_users=4):
    K = draw(st.integers(1, max_users))
    pairs = [(k, i) for k in range(K) for i in range(K) if k != i]
    links = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) if pairs else set()
    return TimTopology(K, frozenset(links))


# ---------------------------------------------------------------------------
# 그래프
# ---------------------------------------------------------------------------

def test_golden_graphs(golden):
    topo = TimTopology(5, fixtures.baseline_map().tim_links)
    graphs = build_graphs(topo)
    assert edge_set(graphs.alignment) == {frozenset((2, 5))}
    assert edge_set(graphs.conflict) == {
        frozenset(p) for p in [(1, 4), (1, 2), (2, 3), (3, 5), (4, 5)]
    }


def test_from_channel_threshold(golden):
    assert TimTopology.from_channel(golden, "0.5").links == fixtures.baseline_map().tim_links
    assert len(TimTopology.from_channel(golden).links) == 11


@pytest.mark.parametrize("pairs", [[(1, 1)], [(1, 3)], [(0, 1)]])
def test_invalid_links_rejected(pairs):
    with pytest.raises(DimensionMismatchError):
        topology(2, pairs)


# ---------------------------------------------------------------------------
# 풀이
# ---------------------------------------------------------------------------

def test_golden_baseline_half_rate():
    topo = TimTopology(5, fixtures.baseline_map().tim_links)
    solution = tim_solve(topo)
    assert solution.method == HALF_RATE
    assert solution.fractions == (F(1, 2),) * 5
    assert solution.n == 2
    # 사용자 2, 5 정렬, 나머지는 서로 다른 방향
    first = [d[0] for d in solution.directions]
    assert first[1] == first[4]
    assert len(set(first)) == 4
    assert check_assignment(topo, solution)


def test_golden_improved_half_rate():
    topo = TimTopology(5, fixtures.improved_map().tim_links)
    solution = tim_solve(topo)
    assert solution.method == HALF_RATE
    assert solution.fractions == (F(1, 2),) * 5
    first = [d[0] for d in solution.directions]
    assert first[0] == first[2]
    assert first[1] == first[4]
    assert len(set(first)) == 3
    assert check_assignment(topo, solution)


def test_no_links_full_rate():
    solution = tim_solve(TimTopology(3, frozenset()))
    assert solution.method == FULL
    assert solution.n == 1
    assert solution.fractions == (1, 1, 1)
    assert solution.user_methods == (FULL,) * 3


def test_complete_three_user_coloring():
    topo = topology(3, [(k, i) for k in range(1, 4) for i in range(1, 4) if k != i])
    solution = tim_solve(topo)
    assert solution.method == COLORING
    assert solution.fractions == (F(1, 3),) * 3
    assert solution.n == 3
    assert check_assignment(topo, solution)


def test_cycle_of_five_needs_coloring():
    # 수신기 k 가 k-1, k+1 을 들음: 충돌 그래프 C5, 정렬 성분 안에 충돌
    topo = topology(5, [(k, (k % 5) + 1) for k in range(1, 6)] + [(k, ((k - 2) % 5) + 1) for k in range(1, 6)])
    solution = tim_solve(topo)
    assert solution.method == COLORING
    assert solution.fractions == (F(2, 5),) * 5
    assert solution.n == 5
    assert check_assignment(topo, solution)


def test_directed_cycle_is_half_rate():
    topo = topology(5, [(k, (k % 5) + 1) for k in range(1, 6)])
    solution = tim_solve(topo)
    assert solution.method == HALF_RATE
    assert solution.fractions == (F(1, 2),) * 5


def test_isolated_user_keeps_full_space():
    topo = topology(3, [(1, 2)])
    solution = tim_solve(topo)
    assert solution.fractions == (F(1, 2), F(1, 2), F(1))
    assert solution.user_methods[2] == FULL
    assert len(solution.directions[2]) == solution.n
    assert check_assignment(topo, solution)


def test_fractional_coloring_of_cycle():
    chi, weights = fractional_coloring(nx.cycle_graph(5))
    assert chi == F(5, 2)
    assert all(w == F(1, 2) for w in weights.values())
    assert len(weights) == 5


def test_fractional_coloring_of_empty_graph():
    graph = nx.empty_graph(3)
    chi, weights = fractional_coloring(graph)
    assert chi == 1
    assert weights == {(0, 1, 2): 1}


def test_check_assignment_rejects_shared_direction():
    topo = topology(2, [(1, 2)])
    solution = tim_solve(topo)
    same = ((F(1), F(0)),)
    broken = TimSolution(solution.fractions, solution.method, solution.n, (same, same), solution.user_methods)
    assert not check_assignment(topo, broken)


def test_check_assignment_rejects_overclaimed_fraction():
    topo = topology(2, [(1, 2)])
    solution = tim_solve(topo)
    inflated = TimSolution((F(1), F(1, 2)), solution.method, solution.n, solution.directions, solution.user_methods)
    assert not check_assignment(topo, inflated)


def test_half_rate_scheme_evaluates_to_one_half():
    topo = TimTopology(5, fixtures.baseline_map().tim_links)
    solution = tim_solve(topo)
    channel = binary_channel(topo)
    scheme = validate_scheme(scheme_from_solution(topo, solution), channel)
    assert [user_gdof(scheme, channel, k).gdof for k in range(5)] == [F(1, 2)] * 5


# ---------------------------------------------------------------------------
# 속성
# ---------------------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(topologies(max_users=6))
def test_assignment_is_sound(topo):
    solution = tim_solve(topo)
    assert check_assignment(topo, solution)
    conflict = build_graphs(topo).conflict
    for k in range(topo.K):
        if conflict.degree(k) == 0:
            assert solution.fractions[k] == 1
        else:
            assert 0 < solution.fractions[k] <= F(1, 2)


@settings(max_examples=50, deadline=None)
@given(topologies(max_users=4))
def test_assignment_achieves_fractions_on_binary_channel(topo):
    solution = tim_solve(topo)
    channel = binary_channel(topo)
    scheme = validate_scheme(scheme_from_solution(topo, solution), channel)
    for k in range(topo.K):
        assert user_gdof(scheme, channel, k).gdof >= solution.fractions[k]


@st.composite
def topology_with_extra_link(draw):
    """(위상, 같은 위상 + 없던 링크 하나)"""
    K = draw(st.integers(2, 6))
    pairs = [(k, i) for k in range(K) for i in range(K) if k != i]
    extra = draw(st.sampled_from(pairs))
    rest = [p for p in pairs if p != extra]
    links = frozenset(draw(st.sets(st.sampled_from(rest), max_size=len(rest))))
    return TimTopology(K, links), TimTopology(K, links | {extra})


@settings(max_examples=100, deadline=None)
@given(topology_with_extra_link())
def test_adding_a_link_never_raises_fractions(pair):
    before, after = pair
    old = tim_solve(before).fractions
    new = tim_solve(after).fractions
    assert all(n <= o for n, o in zip(new, old))


def test_large_complete_topology_uses_greedy_coloring():
    K = 13
    topo = topology(K, [(k, i) for k in range(1, K + 1) for i in range(1, K + 1) if k != i])
    solution = tim_solve(topo)
    assert solution.method == COLORING
    assert solution.n == K
    assert solution.fractions == (F(1, K),) * K
    assert check_assignment(topo, solution)
