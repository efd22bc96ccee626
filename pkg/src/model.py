"""
핵심 데이터 타입 모듈
채널 강도 행렬, 빔포밍 스킴, GDoF 결과, TIM-TIN 분해 맵과
검증 / 정확한(유리수) JSON 직렬화
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

Link = Tuple[int, int]

TIM = "TIM"
TIN = "TIN"


# ---------------------------------------------------------------------------
# 오류
# ---------------------------------------------------------------------------

class GdofError(Exception):
    """도메인 오류 기본 클래스 (CLI 종료 코드 1)"""


class FormatError(GdofError):
    """JSON 문서 또는 숫자 형식 오류"""


class NonSquareError(GdofError):
    """정방 행렬이 아닌 채널 입력"""


class ZeroDirectLinkError(GdofError):
    """직접 링크 강도가 0인 사용자"""

    def __init__(self, k: int):
        self.k = k
        super().__init__(f"사용자 {k + 1}의 직접 링크 강도가 0 이하입니다")


class DimensionMismatchError(GdofError):
    """벡터 길이 / 사용자 인덱스 불일치"""


class PositivePowerExponentError(GdofError):
    """전력 지수 r > 0 (전력 제약 위반)"""


class EmptyVectorError(GdofError):
    """영벡터 빔포밍 방향"""


class NumericalFailureError(GdofError):
    """유한 P 수치 계산 실패 (공분산 행렬이 양의 정부호가 아님)"""


class MapMismatchError(GdofError):
    """분해 맵과 채널의 교차 링크 집합 불일치"""


class WeightMismatchError(GdofError):
    """시분할 가중치 오류"""


# ---------------------------------------------------------------------------
# 유리수 입출력
# ---------------------------------------------------------------------------

def parse_rational(value: Any) -> Fraction:
    """숫자 / 10진 문자열 / "p/q" 문자열을 정확한 유리수로 변환"""
    if isinstance(value, bool):
        raise FormatError(f"숫자가 아닙니다: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise FormatError(f"유한한 숫자가 아닙니다: {value!r}")
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise FormatError(f"유한한 숫자가 아닙니다: {value!r}")
        # 최단 10진 표기를 거쳐 0.3 -> 3/10
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"숫자로 해석할 수 없습니다: {value!r}") from None
    raise FormatError(f"지원하지 않는 숫자 형식: {value!r}")


def format_rational(value: Any) -> str:
    """분모가 2^a·5^b이면 정확한 10진 문자열, 아니면 "p/q" """
    q = Fraction(value)
    if q.denominator == 1:
        return str(q.numerator)

    rest, twos, fives = q.denominator, 0, 0
    while rest % 2 == 0:
        rest //= 2
        twos += 1
    while rest % 5 == 0:
        rest //= 5
        fives += 1
    if rest != 1:
        return f"{q.numerator}/{q.denominator}"

    digits = max(twos, fives)
    scaled = abs(q.numerator) * 10 ** digits // q.denominator
    whole, frac = divmod(scaled, 10 ** digits)
    sign = "-" if q < 0 else ""
    return f"{sign}{whole}.{str(frac).rjust(digits, '0').rstrip('0')}"


def format_rationals(values: Iterable[Any]) -> List[str]:
    return [format_rational(v) for v in values]


# ---------------------------------------------------------------------------
# 채널
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChannelMatrix:
    """K x K 채널 강도 지수 행렬, alpha[k][i] = 송신기 i -> 수신기 k"""

    K: int
    alpha: Tuple[Tuple[Fraction, ...], ...]

    def strength(self, k: int, i: int) -> Fraction:
        return self.alpha[k][i]

    def is_present(self, k: int, i: int) -> bool:
        return self.alpha[k][i] > 0

    def cross_links(self) -> List[Link]:
        """존재하는 교차 링크 (수신기, 송신기), 사전식 순서"""
        return [
            (k, i)
            for k in range(self.K)
            for i in range(self.K)
            if k != i and self.alpha[k][i] > 0
        ]

    def without_links(self, links: Iterable[Link]) -> "ChannelMatrix":
        """주어진 교차 링크를 0으로 만든 복사본"""
        removed = set(links)
        alpha = tuple(
            tuple(Fraction(0) if (k, i) in removed else self.alpha[k][i] for i in range(self.K))
            for k in range(self.K)
        )
        return ChannelMatrix(self.K, alpha)


def validate_channel(raw: Any) -> ChannelMatrix:
    """원시 K x K 행렬 검증: 음수는 0으로, 유리수로 변환, 대각 성분 > 0 확인"""
    rows = raw.alpha if isinstance(raw, ChannelMatrix) else raw
    if not isinstance(rows, (list, tuple)) or len(rows) == 0:
        raise NonSquareError("채널 행렬은 비어 있지 않은 K x K 목록이어야 합니다")

    K = len(rows)
    alpha: List[Tuple[Fraction, ...]] = []
    for k, row in enumerate(rows):
        if not isinstance(row, (list, tuple)) or len(row) != K:
            raise NonSquareError(f"{k + 1}번째 행의 길이가 {K}가 아닙니다")
        alpha.append(tuple(max(Fraction(0), parse_rational(x)) for x in row))

    for k in range(K):
        if alpha[k][k] <= 0:
            raise ZeroDirectLinkError(k)

    return ChannelMatrix(K, tuple(alpha))


# ---------------------------------------------------------------------------
# 스킴
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Stream:
    """사용자 user의 데이터 스트림 하나 (방향 벡터 + 전력 지수 r <= 0)"""

    user: int
    vector: Tuple[Fraction, ...]
    power_exp: Fraction


@dataclass(frozen=True)
class Scheme:
    """n 채널 사용 블록에 대한 스트림 목록, 사용자별 순서 = 복호 순서"""

    n: int
    streams: Tuple[Stream, ...]

    @classmethod
    def build(cls, n: int, streams: Iterable[Tuple[int, Sequence[Any], Any]]) -> "Scheme":
        """(user, vector, power_exp) 튜플 목록으로부터 생성 (0-based user)"""
        return cls(
            n,
            tuple(
                Stream(user, tuple(parse_rational(x) for x in vector), parse_rational(r))
                for user, vector, r in streams
            ),
        )

    def streams_of(self, k: int) -> List[Stream]:
        return [s for s in self.streams if s.user == k]

    def stream_counts(self, K: int) -> List[int]:
        counts = [0] * K
        for s in self.streams:
            counts[s.user] += 1
        return counts


def _normalize(vector: Tuple[Fraction, ...]) -> Tuple[Fraction, ...]:
    lead = next(x for x in vector if x != 0)
    return tuple(x / lead for x in vector)


def validate_scheme(scheme: Scheme, channel: ChannelMatrix) -> Scheme:
    """스킴 검증 후 정규화된 스킴 반환 (첫 비영 좌표를 1로 스케일)"""
    if not isinstance(scheme.n, int) or isinstance(scheme.n, bool) or scheme.n < 1:
        raise DimensionMismatchError(f"블록 길이 n은 양의 정수여야 합니다: {scheme.n!r}")

    normalized = []
    for idx, stream in enumerate(scheme.streams):
        if not 0 <= stream.user < channel.K:
            raise DimensionMismatchError(
                f"스트림 {idx + 1}: 사용자 인덱스 {stream.user + 1}가 범위(1..{channel.K}) 밖입니다"
            )
        if len(stream.vector) != scheme.n:
            raise DimensionMismatchError(
                f"스트림 {idx + 1}: 벡터 길이 {len(stream.vector)} != n={scheme.n}"
            )
        vector = tuple(parse_rational(x) for x in stream.vector)
        if all(x == 0 for x in vector):
            raise EmptyVectorError(f"스트림 {idx + 1}: 빔포밍 벡터가 영벡터입니다")
        power_exp = parse_rational(stream.power_exp)
        if power_exp > 0:
            raise PositivePowerExponentError(
                f"스트림 {idx + 1}: 전력 지수 {format_rational(power_exp)} > 0"
            )
        normalized.append(Stream(stream.user, _normalize(vector), power_exp))

    return Scheme(scheme.n, tuple(normalized))


# ---------------------------------------------------------------------------
# GDoF 결과
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GDoFReport:
    """사용자별 d', d'', d_k 와 스트림별 연속 간섭 제거 GDoF"""

    n: int
    d_prime: Tuple[Fraction, ...]
    d_dprime: Tuple[Fraction, ...]
    gdof: Tuple[Fraction, ...]
    sc_gdof: Tuple[Tuple[Fraction, ...], ...]

    @property
    def symmetric(self) -> Fraction:
        return min(self.gdof)


# ---------------------------------------------------------------------------
# 분해 맵
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecompositionMap:
    """교차 링크 (수신기 k, 송신기 i) 마다 TIM 또는 TIN 태그"""

    tim_links: FrozenSet[Link]
    tin_links: FrozenSet[Link]

    def tag(self, k: int, i: int) -> Optional[str]:
        if (k, i) in self.tim_links:
            return TIM
        if (k, i) in self.tin_links:
            return TIN
        return None

    @classmethod
    def from_bitmask(cls, channel: ChannelMatrix, mask: int) -> "DecompositionMap":
        """비트 j가 1이면 j번째 교차 링크(사전식)를 TIM으로"""
        links = channel.cross_links()
        tim = frozenset(link for j, link in enumerate(links) if mask >> j & 1)
        return cls(tim, frozenset(links) - tim)

    @classmethod
    def by_threshold(cls, channel: ChannelMatrix, tau: Any) -> "DecompositionMap":
        """강도 >= tau 인 교차 링크를 TIM으로"""
        tau = parse_rational(tau)
        links = channel.cross_links()
        tim = frozenset(link for link in links if channel.strength(*link) >= tau)
        return cls(tim, frozenset(links) - tim)

    def bitmask(self, channel: ChannelMatrix) -> int:
        return sum(1 << j for j, link in enumerate(channel.cross_links()) if link in self.tim_links)


# ---------------------------------------------------------------------------
# JSON 직렬화 (파일은 1-based 인덱스)
# ---------------------------------------------------------------------------

def _require(data: Any, key: str) -> Any:
    if not isinstance(data, dict) or key not in data:
        raise FormatError(f"필수 키가 없습니다: {key}")
    return data[key]


def channel_to_dict(channel: ChannelMatrix) -> Dict[str, Any]:
    return {"K": channel.K, "alpha": [format_rationals(row) for row in channel.alpha]}


def channel_from_dict(data: Dict[str, Any]) -> ChannelMatrix:
    channel = validate_channel(_require(data, "alpha"))
    if "K" in data and data["K"] != channel.K:
        raise NonSquareError(f"K={data['K']} 이지만 행렬은 {channel.K} x {channel.K} 입니다")
    return channel


def scheme_to_dict(scheme: Scheme) -> Dict[str, Any]:
    return {
        "n": scheme.n,
        "streams": [
            {
                "user": s.user + 1,
                "vector": format_rationals(s.vector),
                "power_exp": format_rational(s.power_exp),
            }
            for s in scheme.streams
        ],
    }


def scheme_from_dict(data: Dict[str, Any]) -> Scheme:
    n = _require(data, "n")
    if not isinstance(n, int) or isinstance(n, bool):
        raise FormatError(f"n은 정수여야 합니다: {n!r}")
    streams = []
    for entry in _require(data, "streams"):
        user = _require(entry, "user")
        if not isinstance(user, int) or isinstance(user, bool):
            raise FormatError(f"user는 정수여야 합니다: {user!r}")
        vector = _require(entry, "vector")
        if not isinstance(vector, list):
            raise FormatError("vector는 목록이어야 합니다")
        streams.append((user - 1, vector, entry.get("power_exp", "0")))
    return Scheme.build(n, streams)


def _parse_links(raw: Any, key: str) -> FrozenSet[Link]:
    links = set()
    for pair in raw:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise FormatError(f"{key}의 항목은 [k, i] 쌍이어야 합니다: {pair!r}")
        k, i = pair
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (k, i)):
            raise FormatError(f"{key}의 인덱스는 정수여야 합니다: {pair!r}")
        links.add((k - 1, i - 1))
    return frozenset(links)


def map_to_dict(dmap: DecompositionMap) -> Dict[str, Any]:
    return {
        "tim_links": [[k + 1, i + 1] for k, i in sorted(dmap.tim_links)],
        "tin_links": [[k + 1, i + 1] for k, i in sorted(dmap.tin_links)],
    }


def map_from_dict(data: Dict[str, Any]) -> DecompositionMap:
    if not isinstance(data, dict):
        raise FormatError("분해 맵은 JSON 객체여야 합니다")
    tim = _parse_links(data.get("tim_links", []), "tim_links")
    tin = _parse_links(data.get("tin_links", []), "tin_links")
    both = tim & tin
    if both:
        k, i = min(both)
        raise MapMismatchError(f"링크 ({k + 1},{i + 1})가 TIM과 TIN에 모두 지정되었습니다")
    return DecompositionMap(tim, tin)


def report_to_dict(report: GDoFReport, with_streams: bool = False) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "n": report.n,
        "gdof": format_rationals(report.gdof),
        "d_prime": format_rationals(report.d_prime),
        "d_dprime": format_rationals(report.d_dprime),
    }
    if with_streams:
        data["sc_gdof"] = [format_rationals(row) for row in report.sc_gdof]
    return data


def dumps(data: Any) -> str:
    """결정적 JSON 문자열 (한글 그대로, 들여쓰기 2)"""
    return json.dumps(data, ensure_ascii=False, indent=2)


def load_json(path: str | Path) -> Any:
    """JSON 파일 로드, 실수 리터럴은 정확한 유리수로"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f, parse_float=Fraction)
    except json.JSONDecodeError as e:
        raise FormatError(f"JSON 파싱 오류 ({path}): {e}") from None


def save_json(path: str | Path, data: Any) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(data) + "\n")


def load_channel(path: str | Path) -> ChannelMatrix:
    return channel_from_dict(load_json(path))


def load_scheme(path: str | Path) -> Scheme:
    return scheme_from_dict(load_json(path))


def load_map(path: str | Path) -> DecompositionMap:
    return map_from_dict(load_json(path))
