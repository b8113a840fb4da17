"""History functionals F, delay functionals τ and Lipschitz estimators."""

from .builders import build_constant_lag, build_multi_lag, build_ode, build_state_dependent, build_trivial
from .builtins import BUILTIN_MODELS, BuiltinModel, build_builtin
from .delays import (
    build_constant_delay,
    build_proportional_delay,
    build_rezounenko_delay,
    build_state_delay,
    build_variable_delay,
)
from .dto import DelayFunctional, HistoryFunctional, LipschitzEstimate
from .lipschitz import (
    DENOMINATOR_FLOOR,
    check_constancy_about_memories,
    draw_pairs,
    estimate_lipschitz,
    estimate_uniform_lipschitz,
    score_pairs,
)
from .sampling import MODE_KINDS, LipschitzMode, PairSample, draw_pair

__all__ = [
    "BUILTIN_MODELS",
    "BuiltinModel",
    "DENOMINATOR_FLOOR",
    "DelayFunctional",
    "HistoryFunctional",
    "LipschitzEstimate",
    "LipschitzMode",
    "MODE_KINDS",
    "PairSample",
    "build_builtin",
    "build_constant_delay",
    "build_constant_lag",
    "build_multi_lag",
    "build_ode",
    "build_proportional_delay",
    "build_rezounenko_delay",
    "build_state_delay",
    "build_state_dependent",
    "build_trivial",
    "build_variable_delay",
    "check_constancy_about_memories",
    "draw_pair",
    "draw_pairs",
    "estimate_lipschitz",
    "estimate_uniform_lipschitz",
    "score_pairs",
]
