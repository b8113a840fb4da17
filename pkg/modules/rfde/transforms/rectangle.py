"""Rectangles by (C¹-)prolongations and their finite-grid membership test."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from modules.rfde.core.history import History, history_difference
from modules.rfde.core.metrics import DEFAULT_PROBE_DENSITY, SUPPORT_TOL, probe_grid, support_of_difference
from modules.rfde.transforms.wedge import trivial_flow

C0 = "C0"
C1 = "C1"

HORIZON_EXCEEDED = "HorizonExceeded"
SUPPORT_TOO_WIDE = "SupportTooWide"
NORM_TOO_LARGE = "NormTooLarge"
SLOPE_MISMATCH = "SlopeMismatch"

_NORM_TOL = 1e-12
_SLOPE_TOL = 1e-9
# 전체 과거 구간에서 차이의 지지 집합을 찾는 유한 창 [−W, 0]
WHOLE_SCAN_WINDOW = 16.0


@dataclass(frozen=True, eq=False)
class RectangleSpec:
    base_time: float
    base_history: History
    horizon: float
    radius: float
    order: str = C0
    slope: np.ndarray | None = None

    def __post_init__(self) -> None:
        if not (self.horizon > 0 and self.radius > 0):
            raise ValueError(f"rectangle needs T > 0 and δ > 0, got T={self.horizon}, δ={self.radius}")
        if self.order not in (C0, C1):
            raise ValueError(f"unknown rectangle order {self.order!r}")
        if self.order == C1 and self.slope is None:
            raise ValueError("a C1 rectangle needs the slope v")
        if self.slope is not None:
            object.__setattr__(self, "slope", np.asarray(self.slope, dtype=np.float64).reshape(-1))

    @property
    def slope_or_zero(self) -> np.ndarray:
        if self.order == C1:
            return self.slope  # type: ignore[return-value]
        return np.zeros(self.base_history.n)

    def widened(self, horizon: float | None = None, radius: float | None = None) -> "RectangleSpec":
        return RectangleSpec(
            self.base_time,
            self.base_history,
            self.horizon if horizon is None else horizon,
            self.radius if radius is None else radius,
            self.order,
            self.slope,
        )


@dataclass
class RectangleVerdict:
    member: bool
    reason: str | None = None
    measured: dict[str, float] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.member


def in_rectangle(
    rect: RectangleSpec,
    t: float,
    phi: History,
    *,
    support_tol: float = SUPPORT_TOL,
    density: int = DEFAULT_PROBE_DENSITY,
    scan_window: float | None = None,
) -> RectangleVerdict:
    """(t, φ) ∈ Λ_{σ,ψ}(T, δ) (order C0) or Λ¹_{σ,ψ}(T, δ, v) (order C1), checked on the probe grid.

    The support of φ − S(t − σ)ψ is scanned over the whole compact past. On the
    whole past the scan stops at [−scan_window, 0] (default
    ``max(WHOLE_SCAN_WINDOW, 2τ)``); the window used is echoed in ``measured``.
    """
    tau = float(t) - rect.base_time
    measured: dict[str, float] = {"tau": tau, "horizon": rect.horizon, "radius": rect.radius}
    if tau > rect.horizon * (1.0 + 1e-12):
        return RectangleVerdict(False, HORIZON_EXCEEDED, measured)
    tau = max(tau, 0.0)

    base = trivial_flow(tau, rect.slope_or_zero, rect.base_history)
    d = history_difference(phi, base)
    interval = phi.interval

    if not interval.is_point:
        if scan_window is not None:
            scan = min(interval.length, float(scan_window))
        elif interval.kind == "whole":
            scan = max(WHOLE_SCAN_WINDOW, 2.0 * tau)
        else:
            scan = interval.length
        measured["scan_window"] = scan
        support = support_of_difference(phi, base, scan, support_tol, density)
        cell = 1.0 / density
        if support is not None:
            measured["support_lower"] = support[0]
            if support[0] < -tau - cell:
                return RectangleVerdict(False, SUPPORT_TOO_WIDE, measured)

    lower = max(-tau, interval.lower)
    grid = probe_grid((phi, base), lower, 0.0, density) if not interval.is_point else np.zeros(1)
    norm = float(np.max(np.abs(d(grid))))
    measured["sup_norm"] = norm
    if rect.order == C1 and tau > 0 and not interval.is_point:
        slope_norm = float(np.max(np.abs(d.derivative(grid))))
        left_slope = float(np.max(np.abs(d.derivative(lower)))) if -tau >= interval.lower else 0.0
        measured["slope_norm"] = slope_norm
        measured["left_slope"] = left_slope
        norm += slope_norm
        measured["c1_norm"] = norm
        if norm > rect.radius + _NORM_TOL:
            return RectangleVerdict(False, NORM_TOO_LARGE, measured)
        if left_slope > _SLOPE_TOL:
            return RectangleVerdict(False, SLOPE_MISMATCH, measured)
        return RectangleVerdict(True, None, measured)
    if norm > rect.radius + _NORM_TOL:
        return RectangleVerdict(False, NORM_TOO_LARGE, measured)
    return RectangleVerdict(True, None, measured)
