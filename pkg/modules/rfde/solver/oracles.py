"""Independent reference solutions used to check the Picard solver.

* ``step_method_solve``: constant-lag equations, one lag interval at a time
  with classical RK4 (the delayed argument is already known on each interval).
* ``pantograph_series``: truncated power series of ẋ = a·x(λt) + b·x(t).
* ``CLOSED_FORMS``: exact solutions of the built-in ODEs.
"""

from __future__ import annotations

import logging
import math
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as P

from modules.rfde.core.history import History, InitialHistory
from modules.rfde.core.intervals import PastInterval
from modules.rfde.core.segment import Segment
from modules.rfde.core.trajectory import Trajectory
from modules.rfde.errors import MethodInapplicableError
from modules.rfde.functional.builders import LagRhs

logger = logging.getLogger(__name__)

DEFAULT_SERIES_TERMS = 30
_GRID_TOL = 1e-9


def _rk4_interval(
    f: LagRhs,
    r: float,
    known: Trajectory,
    a: float,
    b: float,
    h: float,
) -> Segment | None:
    cells = max(1, int(math.ceil((b - a) / h - _GRID_TOL)))
    step = (b - a) / cells
    nodes = np.linspace(a, b, cells + 1)
    nodes[-1] = b
    values = np.empty((cells + 1, known.n))
    values[0] = known.value_at(a)

    def rhs(t: float, x: np.ndarray) -> np.ndarray:
        return np.asarray(f(t, x, known.value_at(t - r)), dtype=np.float64).reshape(-1)

    for k in range(cells):
        t, x = nodes[k], values[k]
        k1 = rhs(t, x)
        k2 = rhs(t + 0.5 * step, x + 0.5 * step * k1)
        k3 = rhs(t + 0.5 * step, x + 0.5 * step * k2)
        k4 = rhs(t + step, x + step * k3)
        values[k + 1] = x + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(values[k + 1])):
            logger.warning("[oracle] step method overflow at t=%.6g", nodes[k + 1])
            if k == 0:
                return None
            return _with_rhs(f, r, known, nodes[: k + 1], values[: k + 1])
    return _with_rhs(f, r, known, nodes, values)


def _with_rhs(f: LagRhs, r: float, known: Trajectory, nodes: np.ndarray, values: np.ndarray) -> Segment:
    derivs = np.array(
        [np.asarray(f(float(t), x, known.value_at(t - r)), dtype=np.float64).reshape(-1) for t, x in zip(nodes, values)]
    )
    return Segment(float(nodes[0]), float(nodes[-1]), values, derivs)


def step_method_solve(
    f: LagRhs,
    r: float,
    initial: History,
    t0: float,
    horizon: float,
    h: float,
) -> Trajectory:
    """ẋ(t) = f(t, x(t), x(t − r)) on [t0, horizon] by the step method with RK4 at step ``h``."""
    if r <= 0:
        raise ValueError(f"lag must be positive, got {r!r}")
    if h <= 0:
        raise ValueError(f"rk step must be positive, got {h!r}")
    traj = Trajectory(initial, t0)
    k = 0
    while traj.t_end < horizon - _GRID_TOL * h:
        a = traj.t_end
        b = min(t0 + (k + 1) * r, horizon)
        segment = _rk4_interval(f, r, traj, a, b, h)
        if segment is None:
            break
        traj = traj.appended(segment)
        if segment.t_end < b:
            break
        k += 1
    return traj


def _series_coefficients(a: float, b: float, lam: float, x0: float, n_terms: int) -> np.ndarray:
    coeffs = np.empty(n_terms)
    coeffs[0] = x0
    for n in range(n_terms - 1):
        coeffs[n + 1] = (a * lam**n + b) * coeffs[n] / (n + 1)
    return coeffs


def pantograph_series(
    a: float,
    b: float,
    lam: float,
    x0: float,
    t: float | np.ndarray,
    n_terms: int = DEFAULT_SERIES_TERMS,
) -> float | np.ndarray:
    """Σ c_n tⁿ with c₀ = x0, c_{n+1} = (aλⁿ + b)c_n/(n + 1)."""
    if n_terms < 1:
        raise ValueError(f"n_terms must be >= 1, got {n_terms}")
    if np.any(np.asarray(t) < 0):
        raise ValueError("pantograph series needs t >= 0")
    value = P.polyval(t, _series_coefficients(a, b, lam, x0, n_terms))
    return float(value) if np.ndim(value) == 0 else value


def pantograph_trajectory(
    a: float,
    b: float,
    lam: float,
    x0: float,
    t0: float,
    horizon: float,
    n_cells: int,
    *,
    n_terms: int = DEFAULT_SERIES_TERMS,
    interval: PastInterval | None = None,
) -> Trajectory:
    """Series solution sampled on a uniform grid (values and exact series derivative)."""
    if t0 != 0.0:
        raise MethodInapplicableError(method="series", kind=f"pantograph with t0={t0:g}")
    coeffs = _series_coefficients(a, b, lam, x0, n_terms + 1)
    dcoeffs = P.polyder(coeffs)
    seg = Segment.from_function(
        0.0,
        horizon,
        n_cells,
        lambda s: P.polyval(s, coeffs)[:, None],
        lambda s: P.polyval(s, dcoeffs)[:, None],
    )
    initial = InitialHistory.constant(x0, interval or PastInterval.whole())
    return Trajectory(initial, 0.0, (seg,))


ClosedFormFn = Callable[[dict, np.ndarray, float, np.ndarray], tuple[np.ndarray, np.ndarray]]


def _linear(params: dict, x0: np.ndarray, t0: float, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = float(params.get("a", 1.0))
    x = x0[None, :] * np.exp(a * (t - t0))[:, None]
    return x, a * x


def _quadratic(params: dict, x0: np.ndarray, t0: float, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # x(t) = x0 / (1 − x0 (t − t0)), valid before the pole
    denom = 1.0 - x0[None, :] * (t - t0)[:, None]
    if np.any(denom <= 0.0):
        raise ValueError("quadratic closed form requested at or beyond its blow-up time")
    x = x0[None, :] / denom
    return x, x * x


CLOSED_FORMS: dict[str, ClosedFormFn] = {
    "linear": _linear,
    "quadratic": _quadratic,
}


def closed_form_trajectory(
    name: str,
    params: dict,
    initial: History,
    t0: float,
    horizon: float,
    n_cells: int,
) -> Trajectory:
    try:
        fn = CLOSED_FORMS[name]
    except KeyError:
        raise MethodInapplicableError(method="closed_form", kind=name) from None
    x0 = initial.at_zero()
    seg = Segment.from_function(
        t0,
        horizon,
        n_cells,
        lambda s: fn(params, x0, t0, s)[0],
        lambda s: fn(params, x0, t0, s)[1],
    )
    return Trajectory(initial, t0, (seg,))
