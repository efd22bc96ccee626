"""
GDoF 평가 모듈
가중 벡터 집합의 최대 지수-랭크 계산(정확한 유리수), 스트림별 연속 간섭 제거 분해,
유한 P 로그-행렬식 수치 오라클
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .config import (
    DEFAULT_SEED,
    LOGDET_TOLERANCE,
    ORACLE_P_CAP,
    ORACLE_POWERS,
    ORACLE_SEEDS,
    ORACLE_TOLERANCE,
)
from .model import (
    ChannelMatrix,
    DimensionMismatchError,
    GDoFReport,
    NumericalFailureError,
    Scheme,
    Stream,
)

logger = logging.getLogger(__name__)


class WeightedVector(NamedTuple):
    vector: Tuple[Fraction, ...]
    kappa: Fraction
    label: Tuple[int, int]  # (user, stream)


@dataclass(frozen=True)
class WeightedVectorSet:
    """최대 지수-랭크 입력: (벡터, 수신 지수 kappa >= 0, 출처 라벨) 목록"""

    entries: Tuple[WeightedVector, ...]

    def __post_init__(self):
        for entry in self.entries:
            if entry.kappa < 0:
                raise ValueError(f"음의 수신 지수는 미리 제거해야 합니다: {entry.label}")

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[Sequence, object]]) -> "WeightedVectorSet":
        """(vector, kappa) 쌍 목록, 라벨은 (0, 순번)"""
        return cls(tuple(
            WeightedVector(tuple(Fraction(x) for x in v), Fraction(kappa), (0, j))
            for j, (v, kappa) in enumerate(pairs)
        ))


class UserGdof(NamedTuple):
    d_prime: Fraction
    d_dprime: Fraction
    gdof: Fraction


# ---------------------------------------------------------------------------
# 정확한 랭크 판정
# ---------------------------------------------------------------------------

def _integer_row(vector: Sequence[Fraction]) -> List[int]:
    scale = math.lcm(*(Fraction(x).denominator for x in vector))
    return [int(Fraction(x) * scale) for x in vector]


class ExactBasis:
    """정수 행 사다리꼴 기저 (분수 없는 가우스 소거, 임계값 없음)"""

    def __init__(self, n: int):
        self.n = n
        self._rows: List[Tuple[int, List[int]]] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, vector: Sequence[Fraction]) -> List[int]:
        v = _integer_row(vector)
        for pivot, row in self._rows:
            if v[pivot]:
                a, b = row[pivot], v[pivot]
                v = [a * x - b * y for x, y in zip(v, row)]
                g = math.gcd(*v)
                if g > 1:
                    v = [x // g for x in v]
        return v

    def contains(self, vector: Sequence[Fraction]) -> bool:
        return not any(self.reduce(vector))

    def add(self, vector: Sequence[Fraction]) -> bool:
        """기저의 생성 공간 밖이면 추가하고 True"""
        v = self.reduce(vector)
        pivot = next((j for j, x in enumerate(v) if x), None)
        if pivot is None:
            return False
        self._rows.append((pivot, v))
        return True


def exact_rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    if not vectors:
        return 0
    basis = ExactBasis(len(vectors[0]))
    for v in vectors:
        basis.add(v)
    return basis.rank


# ---------------------------------------------------------------------------
# 최대 가중 기저 (탐욕)
# ---------------------------------------------------------------------------

def greedy_basis(wset: WeightedVectorSet) -> List[WeightedVector]:
    """kappa 내림차순(동률: user, stream 오름차순)으로 선형 독립인 벡터만 탐욕적으로 선택"""
    if not wset.entries:
        return []
    n = len(wset.entries[0].vector)
    for entry in wset.entries:
        if len(entry.vector) != n:
            raise DimensionMismatchError(
                f"벡터 길이 불일치: {entry.label}의 길이 {len(entry.vector)} != {n}"
            )

    basis = ExactBasis(n)
    kept = []
    for entry in sorted(wset.entries, key=lambda e: (-e.kappa, e.label)):
        if basis.rank == n:
            break
        if basis.add(entry.vector):
            kept.append(entry)
    return kept


def lemma1_exponent(wset: WeightedVectorSet) -> Fraction:
    """log det(I + sum P^kappa v v^H) 의 log P 계수"""
    return sum((e.kappa for e in greedy_basis(wset)), Fraction(0))


# ---------------------------------------------------------------------------
# GDoF
# ---------------------------------------------------------------------------

def _indexed_streams(scheme: Scheme) -> List[Tuple[int, int, Stream]]:
    seen: dict = {}
    indexed = []
    for stream in scheme.streams:
        l = seen.get(stream.user, 0)
        seen[stream.user] = l + 1
        indexed.append((stream.user, l, stream))
    return indexed


def _check_user(channel: ChannelMatrix, k: int) -> None:
    if not 0 <= k < channel.K:
        raise DimensionMismatchError(f"사용자 인덱스 {k + 1}가 범위(1..{channel.K}) 밖입니다")


def receive_set(
    scheme: Scheme,
    channel: ChannelMatrix,
    k: int,
    first_own: Optional[int] = 0,
) -> WeightedVectorSet:
    """수신기 k의 (벡터, 수신 지수) 집합

    first_own=l 이면 사용자 k 자신의 스트림 l.. 을 포함하고, None 이면 간섭만 포함한다.
    수신 지수가 음수인 스트림은 GDoF에 영향이 없으므로 제외한다.
    """
    entries = []
    for user, l, stream in _indexed_streams(scheme):
        if user == k and (first_own is None or l < first_own):
            continue
        kappa = channel.strength(k, user) + stream.power_exp
        if kappa < 0:
            continue
        entries.append(WeightedVector(stream.vector, kappa, (user, l)))
    return WeightedVectorSet(tuple(entries))


def user_gdof(scheme: Scheme, channel: ChannelMatrix, k: int) -> UserGdof:
    """사용자 k의 (d', d'', d_k)"""
    _check_user(channel, k)
    d_prime = lemma1_exponent(receive_set(scheme, channel, k, first_own=0))
    d_dprime = lemma1_exponent(receive_set(scheme, channel, k, first_own=None))
    assert d_prime >= d_dprime, "간섭 집합은 전체 집합의 부분집합"
    return UserGdof(d_prime, d_dprime, (d_prime - d_dprime) / scheme.n)


def successive_gdof(scheme: Scheme, channel: ChannelMatrix, k: int) -> List[Fraction]:
    """복호 순서대로 스트림별 GDoF d_{k,l}, 합은 d_k와 정확히 같다"""
    _check_user(channel, k)
    b_k = len(scheme.streams_of(k))
    exponents = [
        lemma1_exponent(receive_set(scheme, channel, k, first_own=l))
        for l in range(b_k)
    ]
    exponents.append(lemma1_exponent(receive_set(scheme, channel, k, first_own=None)))
    return [(exponents[l] - exponents[l + 1]) / scheme.n for l in range(b_k)]


def evaluate(scheme: Scheme, channel: ChannelMatrix) -> GDoFReport:
    """전체 사용자 GDoF 보고서"""
    per_user = [user_gdof(scheme, channel, k) for k in range(channel.K)]
    return GDoFReport(
        n=scheme.n,
        d_prime=tuple(u.d_prime for u in per_user),
        d_dprime=tuple(u.d_dprime for u in per_user),
        gdof=tuple(u.gdof for u in per_user),
        sc_gdof=tuple(tuple(successive_gdof(scheme, channel, k)) for k in range(channel.K)),
    )


def single_stream_scheme(r: Sequence[Fraction]) -> Scheme:
    """n=1, 사용자당 스트림 하나 (TIN 형태)"""
    return Scheme.build(1, [(k, [1], r_k) for k, r_k in enumerate(r)])


def tin_reduction_gdof(channel: ChannelMatrix, r: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """n=1 단일 스트림의 닫힌 형태: max(0, a_kk + r_k - max(0, max_j(a_kj + r_j)))"""
    values = []
    for k in range(channel.K):
        interference = max(
            [Fraction(0)] + [channel.strength(k, j) + r[j] for j in range(channel.K) if j != k]
        )
        values.append(max(Fraction(0), channel.strength(k, k) + r[k] - interference))
    return tuple(values)


# ---------------------------------------------------------------------------
# 유한 P 오라클
# ---------------------------------------------------------------------------

def _effective_power(P: float) -> float:
    if P <= 1:
        raise ValueError(f"P는 1보다 커야 합니다: {P}")
    if P > ORACLE_P_CAP:
        logger.warning("P=%.3g 가 상한 %.0e 을 넘어 잘라냅니다", P, ORACLE_P_CAP)
        return ORACLE_P_CAP
    return float(P)


def _phases(K: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, 2.0 * np.pi, size=(K, K))


def _receive_columns(
    scheme: Scheme, channel: ChannelMatrix, k: int, P: float, theta: np.ndarray
) -> Tuple[List[np.ndarray], np.ndarray]:
    """수신기 k의 유효 채널 열벡터: 자기 스트림(복호 순서) 목록과 간섭 행렬 (n x m)

    Q = I + G G^H 이므로 공분산을 직접 만들지 않고 인자 G를 다룬다.
    """
    own = []
    interference = []
    for user, _, stream in _indexed_streams(scheme):
        v = np.array([float(x) for x in stream.vector], dtype=complex)
        v /= np.linalg.norm(v)
        exponent = float(channel.strength(k, user) + stream.power_exp)
        h = math.sqrt(P ** exponent) * np.exp(1j * theta[k, user]) * v
        if user == k:
            own.append(h)
        else:
            interference.append(h)
    return own, _stack(interference, scheme.n)


def _stack(columns: Sequence[np.ndarray], n: int) -> np.ndarray:
    if not columns:
        return np.zeros((n, 0), dtype=complex)
    return np.column_stack(columns)


def logdet2(factor: np.ndarray) -> float:
    """log2 det(I + G G^H), G의 특이값으로 계산 (공분산의 조건수 제곱을 피함)"""
    if factor.shape[1] == 0:
        return 0.0
    if not np.all(np.isfinite(factor)):
        raise NumericalFailureError("유효 채널 행렬에 유한하지 않은 값이 있습니다")
    try:
        sigma = np.linalg.svd(factor, compute_uv=False)
    except np.linalg.LinAlgError as e:
        raise NumericalFailureError(f"특이값 분해 실패: {e}") from None
    if not np.all(np.isfinite(sigma)):
        raise NumericalFailureError("특이값 계산 결과가 유한하지 않습니다")
    value = float(np.sum(np.log2(1.0 + sigma ** 2)))
    if value < -LOGDET_TOLERANCE:
        raise NumericalFailureError(f"log det 가 음수입니다: {value:.3e}")
    return value


def finite_p_rate(
    scheme: Scheme, channel: ChannelMatrix, P: float, seed: int = DEFAULT_SEED
) -> np.ndarray:
    """사용자별 채널 사용당 달성 전송률 R_k [bits]"""
    P = _effective_power(P)
    theta = _phases(channel.K, seed)
    rates = np.zeros(channel.K)
    for k in range(channel.K):
        own, interference = _receive_columns(scheme, channel, k, P, theta)
        total = np.hstack([interference, _stack(own, scheme.n)])
        rates[k] = (logdet2(total) - logdet2(interference)) / scheme.n
    return rates


def successive_rates(
    scheme: Scheme, channel: ChannelMatrix, P: float, seed: int = DEFAULT_SEED
) -> List[np.ndarray]:
    """연쇄 법칙의 스트림별 조건부 상호정보량 I(s_kl; y_k | s_k1..s_k,l-1) / n"""
    P = _effective_power(P)
    theta = _phases(channel.K, seed)
    result = []
    for k in range(channel.K):
        own, interference = _receive_columns(scheme, channel, k, P, theta)
        # logdets[l]: 간섭 + 자기 스트림 l.. 이 남아 있는 상태
        logdets = [
            logdet2(np.hstack([interference, _stack(own[l:], scheme.n)]))
            for l in range(len(own) + 1)
        ]
        result.append(np.array([
            (logdets[l] - logdets[l + 1]) / scheme.n for l in range(len(own))
        ]))
    return result


def slope_estimate(
    scheme: Scheme,
    channel: ChannelMatrix,
    P_low: float,
    P_high: float,
    seed: int = DEFAULT_SEED,
) -> np.ndarray:
    """(R(P_high) - R(P_low)) / (log2 P_high - log2 P_low), 같은 위상 추출"""
    if not 1 < P_low < P_high:
        raise ValueError(f"1 < P_low < P_high 이어야 합니다: {P_low}, {P_high}")
    low, high = _effective_power(P_low), _effective_power(P_high)
    if not low < high:
        raise ValueError("상한 적용 후 P_low < P_high 가 성립하지 않습니다")
    r_low = finite_p_rate(scheme, channel, low, seed)
    r_high = finite_p_rate(scheme, channel, high, seed)
    return (r_high - r_low) / (math.log2(high) - math.log2(low))


@dataclass(frozen=True)
class OracleCheck:
    seeds: Tuple[int, ...]
    slopes: np.ndarray  # (시드 수, K)
    agree: Tuple[bool, ...]

    @property
    def all_agree(self) -> bool:
        return all(self.agree)


def oracle_agreement(
    scheme: Scheme,
    channel: ChannelMatrix,
    report: Optional[GDoFReport] = None,
    seeds: Sequence[int] = ORACLE_SEEDS,
    powers: Sequence[float] = ORACLE_POWERS,
    tolerance: float = ORACLE_TOLERANCE,
) -> OracleCheck:
    """기울기 추정과 정확한 GDoF 비교, 사용자별로 시드 과반수가 허용오차 내이면 일치"""
    report = report or evaluate(scheme, channel)
    exact = np.array([float(d) for d in report.gdof])
    slopes = np.array([
        slope_estimate(scheme, channel, powers[0], powers[1], seed) for seed in seeds
    ])
    hits = (np.abs(slopes - exact) <= tolerance).sum(axis=0)
    agree = tuple(bool(h * 2 > len(seeds)) for h in hits)
    for k, ok in enumerate(agree):
        if not ok:
            logger.info("사용자 %d: 기울기 %s 가 GDoF %s 와 불일치", k + 1, slopes[:, k], exact[k])
    return OracleCheck(tuple(seeds), slopes, agree)
