"""Problem-config schema keys and constants.

키 문자열은 여기서만 정의하고 검증(`validation`)과 로더(`problem_config`)가
같은 계약을 참조합니다.
"""

SCHEMA_VERSION = 1

# ---- 최상위 ----
SCHEMA = "schema"
N = "n"
PAST_INTERVAL = "past_interval"
MODEL = "model"
INITIAL_HISTORY = "initial_history"
T0 = "t0"
HORIZON = "horizon"
SOLVE = "solve"
PROBE = "probe"
NAME = "name"

TOP_LEVEL_KEYS = frozenset({SCHEMA, N, PAST_INTERVAL, MODEL, INITIAL_HISTORY, T0, HORIZON, SOLVE, PROBE, NAME})
REQUIRED_KEYS = (N, PAST_INTERVAL, MODEL, INITIAL_HISTORY, HORIZON)

# ---- past_interval ----
COMPACT = "compact"
WHOLE = "whole"
POINT = "point"

# ---- model ----
KIND = "kind"
F = "f"
R = "r"
TAU = "tau"
V = "v"
PARAMS = "params"
BUILTIN_PREFIX = "builtin:"

MODEL_TRIVIAL = "trivial"
MODEL_CONSTANT_LAG = "constant_lag"
MODEL_STATE_DEPENDENT = "state_dependent"
MODEL_ODE = "ode"
MODEL_KINDS = (MODEL_TRIVIAL, MODEL_CONSTANT_LAG, MODEL_STATE_DEPENDENT, MODEL_ODE)

# ---- initial_history ----
HISTORY_CLOSED_FORM = "closed_form"
HISTORY_SAMPLED = "sampled"
EXPR = "expr"
DERIVATIVE = "derivative"
GRID = "grid"
VALUES = "values"
DERIVATIVES = "derivatives"

# ---- solve ----
LIPSCHITZ = "lipschitz"
LIPSCHITZ_L = "L"
LIPSCHITZ_SAMPLES = "samples"
LIPSCHITZ_SEED = "seed"

# ---- probe ----
PROBE_KEYS = frozenset(
    {
        "samples",
        "seed",
        "eps",
        "eps_schedule",
        "tau1",
        "tau2",
        "window",
        "k",
        "T",
        "n_starts",
        "t1",
        "t2",
        "ratio_bound",
        "margin_factor",
    }
)

GRID_TOL = 1e-9
