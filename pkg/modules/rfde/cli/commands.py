"""Subcommand handlers. Each returns ``(exit_code, result)``; ``result`` feeds the run log.

Exit codes: 0 success, 1 usage/config/internal error, 2 escape before the
horizon or a failed probe.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable

import numpy as np

from modules.rfde.config.problem_config import ProblemConfig, load_problem
from modules.rfde.core.export import read_trajectory_csv, state_columns, write_trajectory_csv
from modules.rfde.core.trajectory import Trajectory
from modules.rfde.errors import MethodInapplicableError
from modules.rfde.functional.lipschitz import estimate_lipschitz, estimate_uniform_lipschitz
from modules.rfde.functional.sampling import LipschitzMode
from modules.rfde.solver.dto import HORIZON_REACHED
from modules.rfde.solver.maximal import continue_maximal
from modules.rfde.solver.oracles import closed_form_trajectory, pantograph_trajectory, step_method_solve
from modules.rfde.wellposedness import (
    ProbeReport,
    default_schedule,
    probe_cocycle,
    probe_dependence,
    probe_escape_lsc,
    probe_extension_order,
    probe_identity,
    probe_semiflow,
    probe_uniqueness,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_ESCAPE = 2

Result = tuple[int, dict[str, Any]]


def escape_report_path(out: str | Path) -> Path:
    """``traj.csv`` → ``traj.escape.json``."""
    return Path(out).with_suffix(".escape.json")


def _write_json(payload: dict[str, Any], out: str | Path | None) -> None:
    text = json.dumps(payload, indent=2, ensure_ascii=False, allow_nan=True)
    if out is None:
        sys.stdout.write(text + "\n")
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text + "\n", encoding="utf-8", newline="\n")


def cmd_solve(args: argparse.Namespace) -> Result:
    problem = load_problem(args.config)
    traj, report = continue_maximal(
        problem.functional, problem.initial, problem.t0, problem.horizon, problem.options
    )
    write_trajectory_csv(traj, args.out, args.dense)
    payload = {
        "schema": 1,
        "problem": problem.describe(),
        "options": problem.options.to_dict(),
        "report": report.to_dict(with_segments=args.segments),
    }
    _write_json(payload, escape_report_path(args.out))
    print(f"{report.cause}: reached t={traj.t_end:.17g} in {len(report.diagnostics)} segments")
    code = EXIT_OK if report.cause == HORIZON_REACHED else EXIT_ESCAPE
    return code, {"cause": report.cause, "t_reached": traj.t_end, "t_escape": report.t_escape}


def _grid_cells(problem: ProblemConfig) -> int:
    return max(1, int(math.ceil((problem.horizon - problem.t0) * problem.options.grid_nodes_per_unit)))


def _oracle_step(problem: ProblemConfig, args: argparse.Namespace) -> Trajectory:
    if problem.lag is None or problem.lag_rhs is None:
        raise MethodInapplicableError(method="step", kind=problem.model_kind)
    h = args.h if args.h is not None else problem.options.grid_h
    return step_method_solve(problem.lag_rhs, problem.lag, problem.initial, problem.t0, problem.horizon, h)


def _oracle_series(problem: ProblemConfig, args: argparse.Namespace) -> Trajectory:
    if problem.series is None or problem.n != 1:
        raise MethodInapplicableError(method="series", kind=problem.model_kind)
    s = problem.series
    return pantograph_trajectory(
        s["a"],
        s["b"],
        s["lambda"],
        float(problem.initial.at_zero()[0]),
        problem.t0,
        problem.horizon,
        _grid_cells(problem),
        n_terms=args.terms,
        interval=problem.interval,
    )


def _oracle_closed_form(problem: ProblemConfig, args: argparse.Namespace) -> Trajectory:
    if problem.closed_form is None:
        raise MethodInapplicableError(method="ode_closed_form", kind=problem.model_kind)
    return closed_form_trajectory(
        problem.closed_form, problem.params, problem.initial, problem.t0, problem.horizon, _grid_cells(problem)
    )


_ORACLES: dict[str, Callable[[ProblemConfig, argparse.Namespace], Trajectory]] = {
    "step": _oracle_step,
    "series": _oracle_series,
    "ode_closed_form": _oracle_closed_form,
}


def cmd_oracle(args: argparse.Namespace) -> Result:
    problem = load_problem(args.config)
    traj = _ORACLES[args.method](problem, args)
    write_trajectory_csv(traj, args.out, args.dense)
    print(f"oracle {args.method}: t in [{traj.t0:.17g}, {traj.t_end:.17g}]")
    return EXIT_OK, {"method": args.method, "t_end": traj.t_end}


def _run_probe(problem: ProblemConfig, args: argparse.Namespace) -> ProbeReport:
    cfg = dict(problem.probe)
    for key in ("samples", "seed", "eps"):
        value = getattr(args, key)
        if value is not None:
            cfg[key] = value
    F, base, opts, threads = problem.functional, problem.base, problem.options, args.threads
    seed = int(cfg.get("seed", 0))
    span = problem.horizon - problem.t0
    name = args.name
    if name == "uniqueness":
        return probe_uniqueness(F, base, opts, int(cfg.get("n_starts", 5)), seed, threads=threads)
    if name == "dependence":
        schedule = cfg.get("eps_schedule") or default_schedule(float(cfg.get("eps", 1e-3)))
        return probe_dependence(
            F, base, float(cfg.get("T", span)), schedule, seed, opts, ratio_bound=cfg.get("ratio_bound"), threads=threads
        )
    if name == "semiflow":
        return probe_semiflow(
            problem.interval,
            float(cfg.get("k", 1.0)),
            float(cfg.get("T", 1.0)),
            int(cfg.get("samples", 1000)),
            seed,
            n=problem.n,
            threads=threads,
        )
    if name == "cocycle":
        tau1 = float(cfg.get("tau1", span / 2.0))
        tau2 = float(cfg.get("tau2", span - tau1))
        return probe_cocycle(F, base, tau1, tau2, opts, R_probe=float(cfg.get("window", 1.0)))
    if name == "escape":
        return probe_escape_lsc(
            F,
            base,
            float(cfg.get("eps", 1e-3)),
            int(cfg.get("samples", 4)),
            seed,
            opts,
            horizon=problem.horizon,
            margin_factor=float(cfg.get("margin_factor", 10.0)),
            threads=threads,
        )
    if name == "identity":
        return probe_identity(F, base, opts)
    t1 = float(cfg.get("t1", problem.t0 + span / 2.0))
    t2 = float(cfg.get("t2", problem.horizon))
    return probe_extension_order(F, base, t1, t2, opts)


def cmd_probe(args: argparse.Namespace) -> Result:
    problem = load_problem(args.config)
    report = _run_probe(problem, args)
    _write_json(report.to_dict(), args.out)
    if args.out is not None:
        print(f"probe {report.probe}: {'passed' if report.passed else 'FAILED'}")
    return (EXIT_OK if report.passed else EXIT_ESCAPE), {"probe": report.probe, "passed": report.passed}


def _lipschitz_mode(problem: ProblemConfig, args: argparse.Namespace) -> LipschitzMode:
    default_R = problem.interval.r / 2.0 if problem.interval.kind == "compact" else 1.0
    R = args.R if args.R is not None else default_R
    M = args.M if args.M is not None else 1.0
    if args.mode == "prolongations":
        return LipschitzMode.about_prolongations()
    if args.mode == "c1":
        return LipschitzMode.about_c1_prolongations()
    if args.mode == "memories":
        return LipschitzMode.about_memories(R)
    if args.mode == "lip_memories":
        return LipschitzMode.about_lip_memories(R, M)
    return LipschitzMode.almost_local(M)


def cmd_lipschitz(args: argparse.Namespace) -> Result:
    problem = load_problem(args.config)
    mode = _lipschitz_mode(problem, args)
    T = args.T if args.T is not None else problem.options.T_cap
    delta = args.delta if args.delta is not None else problem.options.delta
    if args.uniform:
        estimate = estimate_uniform_lipschitz(
            problem.functional,
            problem.base,
            mode,
            T,
            delta,
            args.base_radius,
            args.n_bases,
            args.samples,
            args.seed,
            threads=args.threads,
        )
    else:
        estimate = estimate_lipschitz(
            problem.functional, problem.base, mode, T, delta, args.samples, args.seed, threads=args.threads
        )
    print(f"{estimate.mode}: {estimate.value:.17g}")
    payload = estimate.to_dict()
    _write_json(payload, None)
    if args.out is not None:
        _write_json(payload, args.out)
    return EXIT_OK, {"mode": estimate.mode, "value": estimate.value}


def sup_difference(a: str | Path, b: str | Path) -> float:
    """Sup-norm of x(a) − x(b) on the common time range; the coarser series is interpolated linearly."""
    fa, fb = read_trajectory_csv(a), read_trajectory_csv(b)
    cols = state_columns(fa)
    if cols != state_columns(fb):
        raise ValueError(f"state columns differ: {cols} vs {state_columns(fb)}")
    fine, coarse = (fa, fb) if len(fa) >= len(fb) else (fb, fa)
    t_fine = fine["t"].to_numpy()
    t_coarse = coarse["t"].to_numpy()
    keep = (t_fine >= t_coarse[0] - 1e-12) & (t_fine <= t_coarse[-1] + 1e-12)
    if not np.any(keep):
        raise ValueError("trajectories share no time range")
    worst = 0.0
    for col in cols:
        interp = np.interp(t_fine[keep], t_coarse, coarse[col].to_numpy())
        worst = max(worst, float(np.max(np.abs(fine[col].to_numpy()[keep] - interp))))
    return worst


def cmd_compare(args: argparse.Namespace) -> Result:
    diff = sup_difference(args.a, args.b)
    print(f"{diff:.17g}")
    return (EXIT_OK if diff <= args.tol else EXIT_ERROR), {"sup_difference": diff, "tol": args.tol}


COMMANDS: dict[str, Callable[[argparse.Namespace], Result]] = {
    "solve": cmd_solve,
    "oracle": cmd_oracle,
    "probe": cmd_probe,
    "lipschitz": cmd_lipschitz,
    "compare": cmd_compare,
}
