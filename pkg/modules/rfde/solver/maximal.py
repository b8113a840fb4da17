"""Maximal continuation: chain local steps until the horizon or an escape."""

from __future__ import annotations

import logging
import time

from modules.rfde.core.history import History
from modules.rfde.core.trajectory import JUNCTION_TOL, HistoryView, Trajectory, history_at
from modules.rfde.errors import DomainExitError, EscapeBeforeTauError, PicardDivergedError, StepCollapseError
from modules.rfde.functional.dto import HistoryFunctional
from modules.rfde.solver.dto import (
    BLOW_UP,
    DOMAIN_EXIT,
    HORIZON_REACHED,
    PICARD_DIVERGED,
    STEP_COLLAPSE,
    EscapeReport,
    SolveDiagnostics,
    SolveOptions,
    StepPolicyDTO,
)
from modules.rfde.solver.local import solve_local

logger = logging.getLogger(__name__)

_HORIZON_TOL = 1e-12
# 마지막 구간의 노름이 임계값의 이 비율을 넘으면 붕괴 대신 폭주로 본다
_BLOW_UP_FRACTION = 0.1


def _collapse_cause(traj: Trajectory, opts: SolveOptions) -> str:
    return BLOW_UP if traj.max_norm() > _BLOW_UP_FRACTION * opts.blow_threshold else STEP_COLLAPSE


def continue_maximal(
    F: HistoryFunctional,
    initial: History,
    t0: float,
    horizon: float,
    opts: SolveOptions,
    *,
    policy: StepPolicyDTO | None = None,
) -> tuple[Trajectory, EscapeReport]:
    """Solve (t0, initial) forward up to ``horizon``; the partial trajectory is always returned.

    A run that stops early reports the last solved time as ``t_escape``.
    """
    if horizon < t0:
        raise ValueError(f"horizon {horizon!r} lies before t0 {t0!r}")
    started = time.perf_counter()
    traj = Trajectory(initial, t0)
    diagnostics: list[SolveDiagnostics] = []
    cause, message = HORIZON_REACHED, ""
    tol = _HORIZON_TOL * max(1.0, abs(horizon))

    while traj.t_end < horizon - tol:
        sigma = traj.t_end
        try:
            segment, diag = solve_local(
                F,
                sigma,
                history_at(traj, sigma),
                opts,
                t_limit=horizon,
                policy=policy,
                seed_offset=len(diagnostics),
            )
        except DomainExitError as exc:
            cause, message = DOMAIN_EXIT, str(exc)
            break
        except PicardDivergedError as exc:
            cause, message = PICARD_DIVERGED, str(exc)
            break
        except StepCollapseError as exc:
            cause, message = _collapse_cause(traj, opts), str(exc)
            break

        if traj.segments:
            jump = float(abs(traj.segments[-1].derivatives[-1] - segment.derivatives[0]).max())
            if jump > JUNCTION_TOL:
                logger.warning("[solver] C1 junction mismatch %.3g at t=%.6g", jump, sigma)
                diag.failures.append(f"JunctionMismatch={jump:.3g}")
        traj = traj.appended(segment)
        diagnostics.append(diag)

        peak = float(abs(segment.values).max())
        if peak > opts.blow_threshold:
            cause, message = BLOW_UP, f"|x| = {peak:.3g} exceeds blow_threshold {opts.blow_threshold:.3g}"
            break

    t_escape = None if cause == HORIZON_REACHED else traj.t_end
    report = EscapeReport(cause, t_escape, traj.t_end, message, diagnostics)
    logger.info(
        "[solver] %s at t=%.6g after %d segments (%.2fs)",
        cause,
        traj.t_end,
        len(diagnostics),
        time.perf_counter() - started,
    )
    return traj, report


def solution_process(
    F: HistoryFunctional,
    tau: float,
    t0: float,
    phi0: History,
    opts: SolveOptions,
) -> HistoryView:
    """𝒫_F(τ, t0, φ0) = I_{t0+τ} x(·; t0, φ0)."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau!r}")
    if tau == 0:
        return history_at(Trajectory(phi0, t0), t0)
    traj, report = continue_maximal(F, phi0, t0, t0 + tau, opts)
    if report.cause != HORIZON_REACHED:
        raise EscapeBeforeTauError(tau=tau, report=report)
    return history_at(traj, t0 + tau)
