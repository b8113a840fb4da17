from __future__ import annotations

import argparse

from modules.rfde.functional.sampling import MODE_KINDS
from modules.rfde.utils.worker_pool import default_threads
from modules.rfde.wellposedness.dto import PROBE_NAMES

ORACLE_METHODS = ("step", "series", "ode_closed_form")
DEFAULT_DENSE = 64
DEFAULT_COMPARE_TOL = 1e-6


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rfde",
        description="Solve and probe retarded functional differential equations defined in JSON/TOML configs.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging and tracebacks on error")
    parser.add_argument("--run-log", default=None, help="append a JSON-lines run record to this file")
    parser.add_argument(
        "--threads", type=_positive_int, default=default_threads(), help="worker threads for probes/estimators"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="maximal continuation; writes trajectory CSV and <out>.escape.json")
    solve.add_argument("config")
    solve.add_argument("-o", "--out", required=True, help="trajectory CSV path")
    solve.add_argument("--dense", type=_positive_int, default=DEFAULT_DENSE, help="CSV points per unit time")
    solve.add_argument("--segments", action="store_true", help="include per-segment diagnostics in the JSON")

    oracle = sub.add_parser("oracle", help="independent reference trajectory")
    oracle.add_argument("config")
    oracle.add_argument("method", choices=ORACLE_METHODS)
    oracle.add_argument("-o", "--out", required=True)
    oracle.add_argument("--dense", type=_positive_int, default=DEFAULT_DENSE)
    oracle.add_argument("--h", type=float, default=None, help="RK4 step for the step method (default: grid h)")
    oracle.add_argument("--terms", type=_positive_int, default=50, help="series terms")

    probe = sub.add_parser("probe", help="well-posedness probe; JSON report")
    probe.add_argument("config")
    probe.add_argument("name", choices=PROBE_NAMES)
    probe.add_argument("-o", "--out", default=None, help="report path (default: stdout)")
    probe.add_argument("--samples", type=_positive_int, default=None)
    probe.add_argument("--seed", type=int, default=None)
    probe.add_argument("--eps", type=float, default=None)

    lip = sub.add_parser("lipschitz", help="sampled Lipschitz estimate at the initial point")
    lip.add_argument("config")
    lip.add_argument("mode", choices=MODE_KINDS)
    lip.add_argument("--samples", type=_positive_int, default=200)
    lip.add_argument("--seed", type=int, default=0)
    lip.add_argument("--R", type=float, default=None, help="memory window (memories modes)")
    lip.add_argument("--M", type=float, default=None, help="Lipschitz budget (lip_memories, almost_local)")
    lip.add_argument("--T", type=float, default=None, help="prolongation span (default: T_cap)")
    lip.add_argument("--delta", type=float, default=None, help="prolongation radius (default: solve delta)")
    lip.add_argument("--uniform", action="store_true", help="maximize over a ball of base points")
    lip.add_argument("--base-radius", type=float, default=0.1)
    lip.add_argument("--n-bases", type=_positive_int, default=4)
    lip.add_argument("-o", "--out", default=None, help="also write the JSON here")

    compare = sub.add_parser("compare", help="sup-norm difference of two trajectory CSVs")
    compare.add_argument("a")
    compare.add_argument("b")
    compare.add_argument("--tol", type=float, default=DEFAULT_COMPARE_TOL)
    return parser
