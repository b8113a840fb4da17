"""One local step: horizon rule, bound/Lipschitz estimates and the Picard loop.

Segment grids sit on the absolute lattice k·h (h = 1 / grid_nodes_per_unit)
whenever the step starts on it, so integer lags keep their kinks on nodes.
A step that starts off the lattice first bridges to the next lattice point.
"""

from __future__ import annotations

import logging
import math
from typing import Callable

import numpy as np

from modules.rfde.core.history import History
from modules.rfde.core.metrics import rho1
from modules.rfde.core.segment import Segment
from modules.rfde.core.trajectory import HistoryView, Trajectory
from modules.rfde.errors import (
    DelayExceedsIntervalError,
    DomainExitError,
    EvalError,
    NoValidPairsError,
    OutOfDomainError,
    PicardDivergedError,
    StepCollapseError,
)
from modules.rfde.functional.dto import HistoryFunctional
from modules.rfde.functional.lipschitz import estimate_lipschitz
from modules.rfde.functional.sampling import LipschitzMode
from modules.rfde.solver.dto import BOUND_FROM_LIPSCHITZ, SolveDiagnostics, SolveOptions, StepPolicyDTO
from modules.rfde.solver.picard import picard_apply
from modules.rfde.solver.policies import build_halving_policy, build_no_retry_policy
from modules.rfde.transforms.prolongation import prolongation_history, random_prolongation
from modules.rfde.transforms.rectangle import C1, RectangleSpec

logger = logging.getLogger(__name__)

FLOOR = 1e-12
_LATTICE_TOL = 1e-9
_BOUND_RAY_POINTS = (0.0, 0.25, 0.5, 0.75, 1.0)
_DIVERGENCE_FACTOR = 1e6

StartFactory = Callable[[float, float, int], Segment]


def choose_horizon(M: float, L: float, delta: float, T_cap: float) -> float:
    """T = min{T_cap, δ/(4M), 1/(4L)} with M, L floored at 1e-12."""
    return min(T_cap, delta / (4.0 * max(M, FLOOR)), 1.0 / (4.0 * max(L, FLOOR)))


def reachable_span(v: np.ndarray, delta: float, T_cap: float) -> float:
    """Longest step the horizon rule can pick: M ≥ ‖v‖ gives T ≤ δ/(4‖v‖)."""
    return min(T_cap, delta / (4.0 * max(float(np.max(np.abs(v), initial=0.0)), FLOOR)))


def lattice_step(sigma: float, span: float, h: float, t_limit: float | None = None) -> tuple[float, int]:
    """(t_end, n_cells) for a step of at most ``span`` from σ on the absolute h-lattice."""
    k0 = sigma / h
    on_lattice = abs(k0 - round(k0)) <= _LATTICE_TOL
    if span >= h * (1.0 - _LATTICE_TOL) and on_lattice:
        cells = max(1, int(math.floor(span / h + _LATTICE_TOL)))
        t_end = (round(k0) + cells) * h
    elif span >= h * (1.0 - _LATTICE_TOL):
        cells = 1
        t_end = (math.floor(k0) + 1) * h
    else:
        cells = 1
        t_end = sigma + span
    if t_limit is not None and t_end > t_limit - _LATTICE_TOL * h:
        t_end = float(t_limit)
        cells = max(1, int(math.ceil((t_end - sigma) / h - _LATTICE_TOL)))
    return float(t_end), cells


def _safe_norm(F: HistoryFunctional, t: float, view: History) -> float | None:
    try:
        if not F.in_domain(t, view):
            return None
        value = F(t, view)
    except (EvalError, DelayExceedsIntervalError, OutOfDomainError):
        return None
    norm = float(np.max(np.abs(value)))
    return norm if math.isfinite(norm) else None


def _ray_sup(F: HistoryFunctional, sigma: float, psi: History, v: np.ndarray, T: float) -> float:
    ray = Trajectory(psi, sigma, (Segment.line(sigma, sigma + T, psi.at_zero(), v),))
    norms = [_safe_norm(F, sigma + f * T, HistoryView(ray, sigma + f * T)) for f in _BOUND_RAY_POINTS]
    return max((x for x in norms if x is not None), default=float(np.max(np.abs(v))))


def estimate_bound(
    F: HistoryFunctional,
    sigma: float,
    psi: History,
    v: np.ndarray,
    T: float,
    delta: float,
    samples: int,
    seed: int,
    *,
    mode: str = "sampled",
    L: float | None = None,
) -> float:
    """Sampled M ≥ ‖F‖ over Γ¹_{σ,ψ}(T, δ, v) and the base ray ψ^{∧v}."""
    ray = _ray_sup(F, sigma, psi, v, T)
    if mode == BOUND_FROM_LIPSCHITZ:
        if L is None:
            raise ValueError("the lipschitz_bound mode needs L")
        return L * delta + ray
    rng = np.random.default_rng(seed)
    rect = RectangleSpec(sigma, psi, T, delta, C1, v)
    best = ray
    for _ in range(samples):
        tau = T * (1.0 - float(rng.random()))
        gamma = random_prolongation(rect, tau, int(rng.integers(2**63 - 1)))
        for t in (gamma.t_end, 0.5 * (gamma.t_start + gamma.t_end)):
            norm = _safe_norm(F, t, prolongation_history(sigma, psi, gamma, t))
            if norm is not None:
                best = max(best, norm)
    return best


def _lipschitz(
    F: HistoryFunctional, sigma: float, psi: History, opts: SolveOptions, T: float, seed_offset: int
) -> float:
    source = opts.lipschitz_source
    if source.kind == "user":
        return float(source.L)  # type: ignore[arg-type]
    try:
        est = estimate_lipschitz(
            F,
            (sigma, psi),
            LipschitzMode.about_c1_prolongations(),
            T,
            opts.delta,
            source.samples,
            source.seed + seed_offset,
        )
    except NoValidPairsError:
        logger.warning("[solver] no admissible Lipschitz pair at σ=%.6g, using L=0", sigma)
        return 0.0
    return est.value


def _iterate(
    F: HistoryFunctional,
    sigma: float,
    psi: History,
    start: Segment,
    base_ray: Segment,
    opts: SolveOptions,
    diag: SolveDiagnostics,
) -> Segment | None:
    """Picard loop; the converged segment, or None after a divergence/iteration overflow."""
    prev = start
    prev_step: float | None = None
    first_step: float | None = None
    ratios: list[float] = []
    for k in range(1, opts.max_picard_iters + 1):
        nxt = picard_apply(F, sigma, psi, prev)
        step = rho1(nxt, prev)
        diag.picard_iterations = k
        diag.ball_excursion = max(diag.ball_excursion, rho1(nxt, base_ray))
        if not math.isfinite(step):
            break
        if prev_step is not None and prev_step > opts.fixed_point_tol:
            ratios.append(step / prev_step)
        if step <= opts.fixed_point_tol:
            diag.contraction_ratios = ratios
            diag.residual = step
            return nxt
        first_step = step if first_step is None else first_step
        if step > _DIVERGENCE_FACTOR * max(first_step, opts.fixed_point_tol):
            break
        prev, prev_step = nxt, step
    diag.contraction_ratios = ratios
    diag.residual = prev_step if prev_step is not None else float("nan")
    return None


def solve_local(
    F: HistoryFunctional,
    sigma: float,
    psi: History,
    opts: SolveOptions,
    *,
    start: StartFactory | None = None,
    fixed_grid: tuple[float, int] | None = None,
    t_limit: float | None = None,
    policy: StepPolicyDTO | None = None,
    seed_offset: int = 0,
) -> tuple[Segment, SolveDiagnostics]:
    """Converged Picard fixed point on [σ, σ + T] and its diagnostics.

    ``start(t_start, t_end, n_cells)`` overrides the first iterate (default ψ^{∧v});
    ``fixed_grid=(t_end, n_cells)`` pins the grid and disables span halving.
    """
    try:
        if not F.in_domain(sigma, psi):
            raise DomainExitError(t=sigma, reason="base point outside dom F")
        v = F(sigma, psi)
    except (EvalError, DelayExceedsIntervalError, OutOfDomainError) as exc:
        raise DomainExitError(t=sigma, reason=str(exc)) from exc
    if not np.all(np.isfinite(v)):
        raise DomainExitError(t=sigma, reason="non-finite F(σ, ψ)")

    reach = reachable_span(v, opts.delta, opts.T_cap)
    L = _lipschitz(F, sigma, psi, opts, reach, seed_offset)
    M = estimate_bound(
        F,
        sigma,
        psi,
        v,
        reach,
        opts.delta,
        opts.bound_samples,
        opts.lipschitz_source.seed + seed_offset,
        mode=opts.bound_mode,
        L=L,
    )
    if fixed_grid is not None:
        policy = build_no_retry_policy()
        span = fixed_grid[0] - sigma
    else:
        policy = policy or build_halving_policy()
        span = choose_horizon(M, L, opts.delta, opts.T_cap)
        if span < opts.T_min:
            raise StepCollapseError(t=sigma, span=span, last_cause=f"horizon rule gave T={span:.3g} (M={M:.3g}, L={L:.3g})")
    shrink = policy.shrink_strategy or (lambda s, _: 0.5 * s)

    x0 = psi.at_zero()
    failures: list[str] = []
    last_ratios: list[float] = []
    for attempt in range(policy.max_retries + 1):
        if fixed_grid is not None:
            t_end, n_cells = fixed_grid
        else:
            t_end, n_cells = lattice_step(sigma, span, opts.grid_h, t_limit)
        diag = SolveDiagnostics(
            t_start=sigma,
            chosen_T=span,
            estimated_M=M,
            estimated_L=L,
            segment_span=t_end - sigma,
            n_cells=n_cells,
            halvings=attempt,
            failures=failures,
        )
        base_ray = Segment.line(sigma, t_end, x0, v, n_cells)
        first = start(sigma, t_end, n_cells) if start is not None else base_ray
        try:
            segment = _iterate(F, sigma, psi, first, base_ray, opts, diag)
        except DomainExitError as exc:
            failures.append(f"DomainExit@{exc.t:.6g}")
            logger.debug("[solver] domain exit at %.6g on span %.3g", exc.t, t_end - sigma)
        else:
            if segment is not None:
                logger.debug(
                    "[solver] step σ=%.6g T=%.3g iters=%d max ratio=%.3g",
                    sigma,
                    t_end - sigma,
                    diag.picard_iterations,
                    diag.max_ratio,
                )
                return segment, diag
            last_ratios = diag.contraction_ratios
            failures.append(f"NoConvergence@{t_end - sigma:.3g}")
        span = shrink(t_end - sigma, attempt)
        if span < opts.T_min:
            break

    if failures and failures[-1].startswith("DomainExit"):
        raise DomainExitError(t=sigma, reason=f"every retry left dom F ({failures[-1]})")
    tail = last_ratios[-3:]
    if tail and all(r > 1.0 for r in tail):
        raise PicardDivergedError(t=sigma, ratios=last_ratios)
    raise StepCollapseError(t=sigma, span=span, last_cause=failures[-1] if failures else "")
