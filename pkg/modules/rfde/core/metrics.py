"""Norms and metrics on histories and prolongations, evaluated on probe grids.

Sup-norms are maxima over a finite grid (uniform density plus stored nodes
and their midpoints), so they approximate the true suprema from below.
"""

from __future__ import annotations

import math

import numpy as np

from modules.rfde.core.history import History
from modules.rfde.core.segment import Segment
from modules.rfde.errors import SpanMismatchError

DEFAULT_PROBE_DENSITY = 32
SUPPORT_TOL = 1e-10


def probe_grid(
    views: tuple[History, ...] | list[History],
    lower: float,
    upper: float = 0.0,
    density: int = DEFAULT_PROBE_DENSITY,
) -> np.ndarray:
    """θ-grid on [lower, upper]: uniform points, every stored node of every view, and node midpoints."""
    if not math.isfinite(lower):
        raise ValueError("probe grids need a finite window")
    if upper <= lower:
        return np.array([upper], dtype=np.float64)
    count = max(2, int(math.ceil((upper - lower) * density)) + 1)
    parts = [np.linspace(lower, upper, count)]
    for view in views:
        nodes = np.asarray(view.breakpoints(lower, upper), dtype=np.float64)
        if nodes.size:
            parts.append(nodes)
            if nodes.size > 1:
                parts.append(0.5 * (nodes[:-1] + nodes[1:]))
    grid = np.unique(np.concatenate(parts))
    return np.clip(grid, lower, upper)


def window_of(view: History, window: float | tuple[float, float] | None) -> tuple[float, float]:
    if isinstance(window, tuple):
        lower, upper = window
        return max(float(lower), view.interval.lower), min(float(upper), 0.0)
    return view.interval.window(window)


def sup_norm(view: History, window: float | tuple[float, float] | None = None, density: int = DEFAULT_PROBE_DENSITY) -> float:
    lower, upper = window_of(view, window)
    grid = probe_grid((view,), lower, upper, density)
    return float(np.max(np.abs(view(grid))))


def sup_norm_diff(
    a: History,
    b: History,
    window: float | tuple[float, float] | None = None,
    density: int = DEFAULT_PROBE_DENSITY,
) -> float:
    """max over the probe grid of ‖a(θ) − b(θ)‖∞ on [−R, 0]."""
    lower, upper = window_of(a, window)
    lower = max(lower, b.interval.lower)
    grid = probe_grid((a, b), lower, upper, density)
    return float(np.max(np.abs(a(grid) - b(grid))))


def lip_const(view: History, window: float | tuple[float, float] | None = None, density: int = DEFAULT_PROBE_DENSITY) -> float:
    """Discrete Lipschitz estimate: difference quotients on the grid and stored node derivatives."""
    lower, upper = window_of(view, window)
    grid = probe_grid((view,), lower, upper, density)
    if grid.size < 2:
        return 0.0
    values = view(grid)
    dtheta = np.diff(grid)
    keep = dtheta > 0
    quotients = np.max(np.abs(np.diff(values, axis=0)), axis=1)[keep] / dtheta[keep]
    best = float(np.max(quotients)) if quotients.size else 0.0
    nodes = view.breakpoints(lower, upper)
    if nodes.size:
        best = max(best, float(np.max(np.abs(view.derivative(nodes)))))
    return best


def _check_same_grid(a: Segment, b: Segment) -> None:
    if not a.same_grid(b):
        raise SpanMismatchError(span_a=a.span, span_b=b.span)


def rho0(a: Segment, b: Segment) -> float:
    _check_same_grid(a, b)
    diff_nodes = np.max(np.abs(a.values - b.values))
    diff_mids = np.max(np.abs(a.value_at(a.midpoints) - b.value_at(a.midpoints)))
    return float(max(diff_nodes, diff_mids))


def rho1(a: Segment, b: Segment) -> float:
    """C¹ distance: value sup plus derivative sup, both on nodes and midpoints."""
    _check_same_grid(a, b)
    dv = np.max(np.abs(a.derivatives - b.derivatives))
    dv_mid = np.max(np.abs(a.derivative_at(a.midpoints) - b.derivative_at(a.midpoints)))
    return rho0(a, b) + float(max(dv, dv_mid))


def support_of_difference(
    a: History,
    b: History,
    scan_window: float | tuple[float, float] | None = None,
    tol: float = SUPPORT_TOL,
    density: int = DEFAULT_PROBE_DENSITY,
) -> tuple[float, float] | None:
    """Smallest [−s, 0] holding every probe point where ‖a − b‖∞ > tol; None when empty."""
    lower, upper = window_of(a, scan_window)
    lower = max(lower, b.interval.lower)
    grid = probe_grid((a, b), lower, upper, density)
    gaps = np.max(np.abs(a(grid) - b(grid)), axis=1)
    hits = grid[gaps > tol]
    if hits.size == 0:
        return None
    return float(hits.min()), 0.0
