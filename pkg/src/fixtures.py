"""
골든 픽스처
5 사용자 예제 위상(직접 링크 1, 강도 1 / 0.5 교차 링크), 기본 / 개선 분해 맵,
명시적 스킴 두 개, 2 차원 연쇄 복호 예제
"""

from typing import Any, Callable, Dict, List, Tuple

from .model import (
    ChannelMatrix,
    DecompositionMap,
    Scheme,
    channel_to_dict,
    map_to_dict,
    scheme_to_dict,
    validate_channel,
)

# (수신기, 송신기), 1-based
STRONG_LINKS: List[Tuple[int, int]] = [(1, 4), (2, 1), (3, 2), (3, 5), (4, 1), (5, 4)]
MEDIUM_LINKS: List[Tuple[int, int]] = [(1, 2), (2, 3), (2, 5), (3, 4), (4, 5)]


def _links(pairs) -> frozenset:
    return frozenset((k - 1, i - 1) for k, i in pairs)


def golden_channel() -> ChannelMatrix:
    alpha = [["0"] * 5 for _ in range(5)]
    for k in range(5):
        alpha[k][k] = "1"
    for k, i in STRONG_LINKS:
        alpha[k - 1][i - 1] = "1"
    for k, i in MEDIUM_LINKS:
        alpha[k - 1][i - 1] = "0.5"
    return validate_channel(alpha)


def baseline_map() -> DecompositionMap:
    """강한 링크 -> TIM, 중간 링크 -> TIN"""
    return DecompositionMap(_links(STRONG_LINKS), _links(MEDIUM_LINKS))


def improved_map() -> DecompositionMap:
    """기본 맵에서 링크 2<-3 을 TIM 으로 이동"""
    moved = [(2, 3)]
    return DecompositionMap(
        _links(STRONG_LINKS + moved),
        _links([link for link in MEDIUM_LINKS if link not in moved]),
    )


def baseline_scheme() -> Scheme:
    """2 차원, 방향 4개 (사용자 2, 5 정렬), 전력 P^0 .. P^-0.4"""
    directions = [[1, 0], [1, 1], [1, 2], [1, 3], [1, 1]]
    powers = ["0", "-0.1", "-0.2", "-0.3", "-0.4"]
    return Scheme.build(2, [(k, directions[k], powers[k]) for k in range(5)])


def improved_scheme() -> Scheme:
    """2 차원, 방향 3개 (사용자 1/3, 2/5 정렬)"""
    directions = [[1, 0], [1, 1], [1, 0], [1, 2], [1, 1]]
    powers = ["0", "-1/6", "0", "-1/6", "-1/3"]
    return Scheme.build(2, [(k, directions[k], powers[k]) for k in range(5)])


def example1_channel() -> ChannelMatrix:
    """3 사용자, 수신기 1 이 송신기 2, 3 을 강도 1/2 로 들음"""
    return validate_channel([
        ["1", "0.5", "0.5"],
        ["0", "1", "0"],
        ["0", "0", "1"],
    ])


def example1_scheme() -> Scheme:
    """사용자 1 두 스트림(복호 순서대로), 사용자 2 두 스트림, 사용자 3 한 스트림"""
    return Scheme.build(2, [
        (0, [1, 0], "0"),
        (0, [0, 1], "-0.2"),
        (1, [1, 1], "-0.2"),
        (1, [1, 2], "-0.3"),
        (2, [1, 1], "0"),
    ])


FIXTURES: Dict[str, Callable[[], Dict[str, Any]]] = {
    "golden_topology": lambda: channel_to_dict(golden_channel()),
    "baseline_map": lambda: map_to_dict(baseline_map()),
    "improved_map": lambda: map_to_dict(improved_map()),
    "baseline_scheme": lambda: scheme_to_dict(baseline_scheme()),
    "improved_scheme": lambda: scheme_to_dict(improved_scheme()),
    "example1_topology": lambda: channel_to_dict(example1_channel()),
    "example1_scheme": lambda: scheme_to_dict(example1_scheme()),
}


def fixture_names() -> List[str]:
    return sorted(FIXTURES)


def fixture_document(name: str) -> Dict[str, Any]:
    """이름으로 픽스처 JSON 문서 (없으면 KeyError)"""
    return FIXTURES[name]()
