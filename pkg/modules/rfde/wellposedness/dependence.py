"""Continuous dependence on the initial history and lower semi-continuity of escape times."""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from modules.rfde.core.history import History, history_sum
from modules.rfde.core.trajectory import Trajectory
from modules.rfde.errors import RfdeError
from modules.rfde.functional.dto import HistoryFunctional
from modules.rfde.solver.dto import HORIZON_REACHED, SolveOptions
from modules.rfde.solver.maximal import continue_maximal
from modules.rfde.transforms.bumps import touching_ramp
from modules.rfde.utils.devtools import record_exception
from modules.rfde.utils.worker_pool import map_ordered, worker_context
from modules.rfde.wellposedness.dto import ProbeReport, failed_report

logger = logging.getLogger(__name__)

DEFAULT_EPS = 1e-3
SPREAD_LIMIT = 2.0
ESCAPE_MARGIN_FACTOR = 10.0
_TIME_DENSITY = 64
_WHOLE_WINDOW = 1.0


def default_schedule(eps: float = DEFAULT_EPS) -> tuple[float, float, float]:
    return (eps, eps / 2.0, eps / 4.0)


def _window(phi: History) -> float:
    kind = phi.interval.kind
    if kind == "point":
        return 0.0
    return phi.interval.r if kind == "compact" else _WHOLE_WINDOW


def _deviation(a: Trajectory, b: Trajectory, lower: float, upper: float) -> float:
    count = max(2, int(np.ceil((upper - lower) * _TIME_DENSITY)) + 1)
    ts = np.concatenate([np.linspace(lower, upper, count), a.breakpoints(lower, upper), b.breakpoints(lower, upper)])
    ts = np.unique(np.clip(ts, lower, upper))
    return float(np.max(np.abs(a.value_at(ts) - b.value_at(ts))))


def probe_dependence(
    F: HistoryFunctional,
    base: tuple[float, History],
    T: float,
    eps_schedule: Sequence[float] | None = None,
    seed: int = 0,
    opts: SolveOptions | None = None,
    *,
    ratio_bound: float | None = None,
    threads: int = 1,
) -> ProbeReport:
    """Δ(ε) = sup over τ ∈ [0, T] of ‖𝒫(τ, t0, φ0 + εη) − 𝒫(τ, t0, φ0)‖ along a shrinking ε schedule.

    η is a seeded C¹ ramp with ‖η‖∞ = 1 attained at θ = 0. Passes when Δ shrinks
    along the schedule and Δ/ε stays within a factor two across it.
    """
    opts = opts or SolveOptions()
    schedule = [float(e) for e in (eps_schedule or default_schedule())]
    t0, phi0 = base
    rng = np.random.default_rng(seed)
    width = _window(phi0)
    eta = touching_ramp(phi0.interval, phi0.n, width, rng)

    def run(eps: float) -> tuple[Trajectory, str]:
        initial = phi0 if eps == 0.0 else history_sum(phi0, eta.scaled(eps))
        traj, report = continue_maximal(F, initial, t0, t0 + T, opts)
        return traj, report.cause

    try:
        with worker_context(probe="dependence", seed=seed):
            runs = map_ordered(run, [0.0, *schedule], threads)
    except RfdeError as exc:
        record_exception("probe dependence", exc)
        return failed_report("dependence", exc, samples=len(schedule), seed=seed)

    causes = [cause for _, cause in runs]
    if any(c != HORIZON_REACHED for c in causes):
        return ProbeReport(
            "dependence", False, samples=len(schedule), seed=seed, notes=[f"escaped before t0+T: {causes}"]
        )

    base_traj = runs[0][0]
    deltas = [_deviation(traj, base_traj, t0 - width, t0 + T) for traj, _ in runs[1:]]
    ratios = [d / e for d, e in zip(deltas, schedule) if e > 0]
    measured: dict[str, float] = {"T": T, "spread_limit": SPREAD_LIMIT}
    for k, (e, d) in enumerate(zip(schedule, deltas)):
        measured[f"eps_{k}"] = e
        measured[f"delta_{k}"] = d
        if e > 0:
            measured[f"ratio_{k}"] = d / e

    shrinking = all(b <= a * (1.0 + 1e-12) for a, b in zip(deltas, deltas[1:]))
    shrinking = shrinking and (len(deltas) < 2 or deltas[-1] < deltas[0])
    spread = max(ratios) / min(ratios) if ratios and min(ratios) > 0 else (1.0 if ratios else float("nan"))
    measured["ratio_spread"] = spread
    passed = shrinking and spread <= SPREAD_LIMIT
    if ratio_bound is not None:
        measured["ratio_bound"] = ratio_bound
        passed = passed and max(ratios, default=0.0) <= ratio_bound
    logger.info("[probe] dependence deltas=%s spread=%.3g", ["%.3g" % d for d in deltas], spread)
    return ProbeReport("dependence", passed, measured, samples=len(schedule), seed=seed)


def probe_escape_lsc(
    F: HistoryFunctional,
    base: tuple[float, History],
    eps: float,
    samples: int,
    seed: int,
    opts: SolveOptions,
    *,
    horizon: float,
    margin_factor: float = ESCAPE_MARGIN_FACTOR,
    threads: int = 1,
) -> ProbeReport:
    """Perturbed escape times may not drop below t* by more than margin_factor·ε·(t* − t0).

    A run that reaches the horizon counts the horizon as its escape time.
    """
    t0, phi0 = base
    rng = np.random.default_rng(seed)
    width = _window(phi0) or 1.0
    perturbations = [
        touching_ramp(phi0.interval, phi0.n, width, rng).scaled(eps * float(rng.uniform(0.1, 1.0)))
        for _ in range(samples)
    ]

    def escape_time(initial: History) -> float:
        _, report = continue_maximal(F, initial, t0, horizon, opts)
        return horizon if report.t_escape is None else report.t_escape

    try:
        with worker_context(probe="escape", seed=seed):
            times = map_ordered(
                escape_time, [phi0, *(history_sum(phi0, p) for p in perturbations)], threads
            )
    except RfdeError as exc:
        record_exception("probe escape", exc)
        return failed_report("escape", exc, samples=samples, seed=seed)

    t_star, perturbed = times[0], times[1:]
    margin = margin_factor * eps * (t_star - t0)
    worst = min(perturbed, default=t_star)
    return ProbeReport(
        "escape",
        all(t >= t_star - margin for t in perturbed),
        {"t_star": t_star, "min_t_perturbed": worst, "margin": margin, "eps": eps, "horizon": horizon},
        samples=samples,
        seed=seed,
    )
