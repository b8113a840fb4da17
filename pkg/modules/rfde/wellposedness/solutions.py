"""Probes on solutions themselves: uniqueness, process axioms and the extension order."""

from __future__ import annotations

import itertools
import logging

import numpy as np

from modules.rfde.core.history import History
from modules.rfde.core.metrics import rho1, sup_norm_diff
from modules.rfde.core.segment import Segment
from modules.rfde.core.trajectory import Trajectory, extends, history_at, join
from modules.rfde.errors import RfdeError
from modules.rfde.functional.dto import HistoryFunctional
from modules.rfde.solver.dto import HORIZON_REACHED, SolveOptions
from modules.rfde.solver.local import solve_local
from modules.rfde.solver.maximal import continue_maximal, solution_process
from modules.rfde.transforms.prolongation import random_prolongation
from modules.rfde.transforms.rectangle import C1, RectangleSpec
from modules.rfde.utils.devtools import record_exception
from modules.rfde.utils.worker_pool import map_ordered, worker_context
from modules.rfde.wellposedness.dto import ProbeReport, failed_report

logger = logging.getLogger(__name__)

UNIQUENESS_FACTOR = 10.0
COCYCLE_TOL = 1e-7
IDENTITY_TOL = 1e-12
EXTENSION_TOL = 1e-7
DEFAULT_PROBE_WINDOW = 1.0


def _starts(sigma: float, psi: History, v: np.ndarray, opts: SolveOptions, n_starts: int, seed: int):
    """Picard first iterates: ψ^{∧v}, ψ^{∧0}, then seeded Γ¹ members."""
    x0 = psi.at_zero()
    zero = np.zeros_like(v)
    starts = [None, lambda a, b, cells: Segment.line(a, b, x0, zero, cells)]
    rng = np.random.default_rng(seed)
    for _ in range(max(0, n_starts - 2)):
        member_seed = int(rng.integers(2**63 - 1))

        def start(a: float, b: float, cells: int, member_seed: int = member_seed) -> Segment:
            rect = RectangleSpec(sigma, psi, b - a, opts.delta, C1, v)
            return random_prolongation(rect, b - a, member_seed, n_cells=cells)

        starts.append(start)
    return starts[:n_starts]


def probe_uniqueness(
    F: HistoryFunctional,
    base: tuple[float, History],
    opts: SolveOptions,
    n_starts: int = 5,
    seed: int = 0,
    *,
    threads: int = 1,
) -> ProbeReport:
    """Distinct first iterates on one grid must reach the same fixed point."""
    sigma, psi = base
    try:
        reference, _ = solve_local(F, sigma, psi, opts)
        v = F(sigma, psi)
        grid = (reference.t_end, reference.n_cells)

        def run(start) -> Segment:
            return solve_local(F, sigma, psi, opts, start=start, fixed_grid=grid)[0]

        with worker_context(probe="uniqueness", seed=seed):
            solved = map_ordered(run, _starts(sigma, psi, v, opts, n_starts, seed), threads)
    except RfdeError as exc:
        record_exception("probe uniqueness", exc)
        return failed_report("uniqueness", exc, samples=n_starts, seed=seed)

    worst = max((rho1(a, b) for a, b in itertools.combinations([reference, *solved], 2)), default=0.0)
    threshold = UNIQUENESS_FACTOR * opts.fixed_point_tol
    return ProbeReport(
        "uniqueness",
        worst <= threshold,
        {"max_pairwise_rho1": worst, "threshold": threshold, "span": reference.t_end - sigma},
        samples=len(solved),
        seed=seed,
    )


def probe_cocycle(
    F: HistoryFunctional,
    base: tuple[float, History],
    tau1: float,
    tau2: float,
    opts: SolveOptions,
    *,
    R_probe: float = DEFAULT_PROBE_WINDOW,
    tol: float = COCYCLE_TOL,
) -> ProbeReport:
    """𝒫(τ₁ + τ₂, t0, φ0) against 𝒫(τ₂, t0 + τ₁, 𝒫(τ₁, t0, φ0))."""
    t0, phi0 = base
    try:
        one_shot = solution_process(F, tau1 + tau2, t0, phi0, opts)
        middle = solution_process(F, tau1, t0, phi0, opts)
        two_shot = solution_process(F, tau2, t0 + tau1, middle, opts)
    except RfdeError as exc:
        record_exception("probe cocycle", exc)
        return failed_report("cocycle", exc)
    window = (-min(tau1 + tau2, R_probe), 0.0)
    error = sup_norm_diff(one_shot, two_shot, window)
    logger.info("[probe] cocycle τ1=%.3g τ2=%.3g error=%.3g", tau1, tau2, error)
    return ProbeReport(
        "cocycle",
        error <= tol,
        {"error": error, "threshold": tol, "tau1": tau1, "tau2": tau2, "window": -window[0]},
        samples=1,
    )


def probe_identity(F: HistoryFunctional, base: tuple[float, History], opts: SolveOptions) -> ProbeReport:
    t0, phi0 = base
    state = solution_process(F, 0.0, t0, phi0, opts)
    window = None if phi0.interval.kind != "whole" else DEFAULT_PROBE_WINDOW
    error = sup_norm_diff(state, phi0, window)
    return ProbeReport("identity", error <= IDENTITY_TOL, {"error": error, "threshold": IDENTITY_TOL}, samples=1)


def _gap(a: Trajectory, b: Trajectory, t_end: float) -> float:
    ts = np.unique(np.concatenate([np.linspace(a.t0, t_end, 257), a.breakpoints(a.t0, t_end)]))
    return float(np.max(np.abs(a.value_at(ts) - b.value_at(ts))))


def probe_extension_order(
    F: HistoryFunctional,
    base: tuple[float, History],
    t1: float,
    t2: float,
    opts: SolveOptions,
    *,
    tol: float = EXTENSION_TOL,
) -> ProbeReport:
    """x|[t0, t1] ≤ x|[t0, t2], and joining a restart at t1 reproduces the one-shot solve."""
    t0, phi0 = base
    if not t0 < t1 < t2:
        raise ValueError(f"need t0 < t1 < t2, got {t0}, {t1}, {t2}")
    try:
        short, r1 = continue_maximal(F, phi0, t0, t1, opts)
        long, r2 = continue_maximal(F, phi0, t0, t2, opts)
        if r1.cause != HORIZON_REACHED or r2.cause != HORIZON_REACHED:
            return ProbeReport(
                "extension", False, notes=[f"escaped before t2: {r1.cause}, {r2.cause}"], samples=1
            )
        restart, r3 = continue_maximal(F, history_at(short, t1), t1, t2, opts)
        joined = join(short, restart, tol=tol)
    except RfdeError as exc:
        record_exception("probe extension", exc)
        return failed_report("extension", exc)
    order_gap = _gap(short, long, t1)
    join_gap = _gap(joined, long, t2)
    ordered = extends(short, long, tol)
    passed = ordered and r3.cause == HORIZON_REACHED and join_gap <= tol
    return ProbeReport(
        "extension",
        passed,
        {"order_gap": order_gap, "join_gap": join_gap, "threshold": tol, "t1": t1, "t2": t2},
        samples=1,
    )
