"""
TIM-TIN GDoF Lab - 간섭 채널의 TIM-TIN 분해와 GDoF 계산
"""

from .model import (
    ChannelMatrix,
    DecompositionMap,
    GDoFReport,
    GdofError,
    Scheme,
    Stream,
    validate_channel,
    validate_scheme,
)
from .evaluator import evaluate, lemma1_exponent, successive_gdof, user_gdof
from .tin import TinTarget, tin_feasible, tin_symmetric
from .tim import TimTopology, tim_solve
from .decomp import evaluate_map, search, synthesize_scheme, time_share

__all__ = [
    "ChannelMatrix",
    "DecompositionMap",
    "GDoFReport",
    "GdofError",
    "Scheme",
    "Stream",
    "validate_channel",
    "validate_scheme",
    "evaluate",
    "lemma1_exponent",
    "successive_gdof",
    "user_gdof",
    "TinTarget",
    "tin_feasible",
    "tin_symmetric",
    "TimTopology",
    "tim_solve",
    "evaluate_map",
    "search",
    "synthesize_scheme",
    "time_share",
]
