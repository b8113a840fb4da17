"""Picard solver: local steps, maximal continuation, solution process and oracles."""

from .dto import (
    BLOW_UP,
    BOUND_FROM_LIPSCHITZ,
    BOUND_SAMPLED,
    DOMAIN_EXIT,
    ESCAPE_CAUSES,
    HORIZON_REACHED,
    PICARD_DIVERGED,
    STEP_COLLAPSE,
    EscapeReport,
    LipschitzSource,
    SolveDiagnostics,
    SolveOptions,
    StepPolicyDTO,
)
from .local import choose_horizon, estimate_bound, lattice_step, reachable_span, solve_local
from .maximal import continue_maximal, solution_process
from .oracles import (
    CLOSED_FORMS,
    DEFAULT_SERIES_TERMS,
    closed_form_trajectory,
    pantograph_series,
    pantograph_trajectory,
    step_method_solve,
)
from .picard import integrand, normalized_picard_apply, picard_apply
from .policies import build_halving_policy, build_no_retry_policy

__all__ = [
    "BLOW_UP",
    "BOUND_FROM_LIPSCHITZ",
    "BOUND_SAMPLED",
    "CLOSED_FORMS",
    "DEFAULT_SERIES_TERMS",
    "DOMAIN_EXIT",
    "ESCAPE_CAUSES",
    "EscapeReport",
    "HORIZON_REACHED",
    "LipschitzSource",
    "PICARD_DIVERGED",
    "STEP_COLLAPSE",
    "SolveDiagnostics",
    "SolveOptions",
    "StepPolicyDTO",
    "build_halving_policy",
    "build_no_retry_policy",
    "choose_horizon",
    "closed_form_trajectory",
    "continue_maximal",
    "estimate_bound",
    "integrand",
    "lattice_step",
    "normalized_picard_apply",
    "pantograph_series",
    "pantograph_trajectory",
    "picard_apply",
    "reachable_span",
    "solution_process",
    "solve_local",
    "step_method_solve",
]
