"""Trajectories x: J + I → ℝⁿ and the history views I_t x taken from them."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np

from modules.rfde.core.history import History, as_theta
from modules.rfde.core.intervals import PastInterval
from modules.rfde.core.segment import Segment
from modules.rfde.errors import AnchorMismatchError, OutOfDomainError

logger = logging.getLogger(__name__)

JUNCTION_TOL = 1e-9
_TILE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Initial history plus an ordered chain of solved segments tiling [t0, t_end]."""

    initial: History
    t0: float
    segments: tuple[Segment, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "segments", tuple(self.segments))
        edge = self.t0
        for k, seg in enumerate(self.segments):
            if abs(seg.t_start - edge) > _TILE_TOL * max(1.0, abs(edge)):
                raise ValueError(f"segment {k} starts at {seg.t_start!r}, expected {edge!r}")
            if seg.n != self.n:
                raise ValueError(f"segment {k} has dimension {seg.n}, expected {self.n}")
            edge = seg.t_end

    @property
    def n(self) -> int:
        return self.initial.n

    @property
    def interval(self) -> PastInterval:
        return self.initial.interval

    @property
    def t_end(self) -> float:
        return self.segments[-1].t_end if self.segments else self.t0

    @cached_property
    def _starts(self) -> np.ndarray:
        return np.array([s.t_start for s in self.segments], dtype=np.float64)

    def appended(self, segment: Segment) -> "Trajectory":
        return Trajectory(self.initial, self.t0, self.segments + (segment,))

    def value_at(self, t: np.ndarray | float) -> np.ndarray:
        return self._dispatch(t, derivative=False)

    def derivative_at(self, t: np.ndarray | float) -> np.ndarray:
        """Right derivative on solved segments, the initial history's derivative before t0."""
        return self._dispatch(t, derivative=True)

    def _dispatch(self, t: np.ndarray | float, *, derivative: bool) -> np.ndarray:
        tt, scalar = as_theta(t)
        tol = _TILE_TOL * max(1.0, abs(self.t_end))
        if np.any(tt > self.t_end + tol):
            raise OutOfDomainError(t=float(tt.max()), lower=self.t0 + self.interval.lower, upper=self.t_end)
        out = np.empty((len(tt), self.n))
        # t0 바로 아래의 반올림 오차는 첫 구간으로 보낸다
        seam = _TILE_TOL * max(1.0, abs(self.t0))
        past = tt < self.t0 - seam if self.segments else np.ones(len(tt), dtype=bool)
        if np.any(past):
            theta = tt[past] - self.t0
            out[past] = self.initial.derivative(theta) if derivative else self.initial(theta)
        if not np.all(past):
            now = ~past
            idx = np.searchsorted(self._starts, tt[now], side="right") - 1
            idx = np.clip(idx, 0, len(self.segments) - 1)
            sub = np.empty((int(now.sum()), self.n))
            for k in np.unique(idx):
                mask = idx == k
                seg = self.segments[k]
                sub[mask] = seg.derivative_at(tt[now][mask]) if derivative else seg.value_at(tt[now][mask])
            out[now] = sub
        return out[0] if scalar else out

    def breakpoints(self, lower: float, upper: float) -> np.ndarray:
        """Absolute node times of stored data inside [lower, upper]."""
        parts = [self.initial.breakpoints(lower - self.t0, upper - self.t0) + self.t0]
        for seg in self.segments:
            if seg.t_end < lower or seg.t_start > upper:
                continue
            nodes = seg.nodes
            parts.append(nodes[(nodes >= lower) & (nodes <= upper)])
        return np.unique(np.concatenate(parts))

    def junction_mismatch(self) -> float:
        """Largest derivative jump across segment seams (values share the node)."""
        worst = 0.0
        for left, right in zip(self.segments, self.segments[1:]):
            worst = max(worst, float(np.max(np.abs(left.derivatives[-1] - right.derivatives[0]))))
        return worst

    def max_norm(self) -> float:
        if not self.segments:
            return float(np.max(np.abs(self.initial.at_zero())))
        return float(max(np.max(np.abs(seg.values)) for seg in self.segments))


Source = Union[Trajectory, History]


@dataclass(frozen=True, eq=False)
class HistoryView(History):
    """I_t x: θ ↦ source(anchor + θ), evaluated lazily."""

    source: Source
    anchor: float

    @property
    def interval(self) -> PastInterval:  # type: ignore[override]
        return self.source.interval

    @property
    def n(self) -> int:  # type: ignore[override]
        return self.source.n

    def _values(self, theta: np.ndarray) -> np.ndarray:
        return np.atleast_2d(self.source.value_at(self.anchor + theta))

    def _derivatives(self, theta: np.ndarray) -> np.ndarray:
        return np.atleast_2d(self.source.derivative_at(self.anchor + theta))

    def breakpoints(self, lower: float, upper: float) -> np.ndarray:
        return self.source.breakpoints(self.anchor + lower, self.anchor + upper) - self.anchor


def eval_history(view: History, theta: np.ndarray | float) -> np.ndarray:
    return view(theta)


def history_at(traj: Trajectory, t: float) -> HistoryView:
    tol = _TILE_TOL * max(1.0, abs(traj.t_end))
    if t < traj.t0 - tol or t > traj.t_end + tol:
        raise OutOfDomainError(t=t, lower=traj.t0, upper=traj.t_end)
    return HistoryView(traj, float(t))


def eval_trajectory(traj: Trajectory, t: np.ndarray | float) -> np.ndarray:
    return traj.value_at(t)


def derivative_at(traj: Trajectory, t: np.ndarray | float) -> np.ndarray:
    return traj.derivative_at(t)


def restrict(traj: Trajectory, t_end: float) -> Trajectory:
    """Prefix of ``traj`` up to ``t_end``; a cut segment is resampled on its own grid spacing."""
    if t_end < traj.t0 or t_end > traj.t_end + _TILE_TOL:
        raise OutOfDomainError(t=t_end, lower=traj.t0, upper=traj.t_end)
    kept: list[Segment] = []
    for seg in traj.segments:
        if seg.t_end <= t_end + _TILE_TOL:
            kept.append(seg)
            continue
        if seg.t_start < t_end - _TILE_TOL:
            cells = max(1, int(np.ceil((t_end - seg.t_start) / seg.h - 1e-9)))
            kept.append(Segment.from_function(seg.t_start, t_end, cells, seg.value_at, seg.derivative_at))
        break
    return Trajectory(traj.initial, traj.t0, tuple(kept))


def _probe_times(lower: float, upper: float, per_unit: int = 32) -> np.ndarray:
    if upper <= lower:
        return np.array([lower])
    count = max(2, int(np.ceil((upper - lower) * per_unit)) + 1)
    return np.linspace(lower, upper, count)


def extends(x1: Trajectory, x2: Trajectory, tol: float = 1e-9) -> bool:
    """x1 ≤ x2: same start, x1's span inside x2's and equal values there."""
    if abs(x1.t0 - x2.t0) > _TILE_TOL or x1.t_end > x2.t_end + _TILE_TOL:
        return False
    lower, _ = x1.interval.window(None if x1.interval.kind != "whole" else 1.0)
    past = _probe_times(x1.t0 + lower, x1.t0)
    if np.max(np.abs(x1.initial(past - x1.t0) - x2.initial(past - x2.t0))) > tol:
        return False
    if not x1.segments:
        return True
    ts = np.unique(np.concatenate([_probe_times(x1.t0, x1.t_end), x1.breakpoints(x1.t0, x1.t_end)]))
    return bool(np.max(np.abs(x1.value_at(ts) - x2.value_at(ts))) <= tol)


def join(x0: Trajectory, x1: Trajectory, tol: float = JUNCTION_TOL) -> Trajectory:
    """Concatenate a solution and its restart from I_{t1} x0."""
    if abs(x1.t0 - x0.t_end) > _TILE_TOL * max(1.0, abs(x0.t_end)):
        raise AnchorMismatchError(expected=x0.t_end, actual=x1.t0)
    lower, _ = x0.interval.window(None if x0.interval.kind != "whole" else 1.0)
    theta = _probe_times(lower, 0.0)
    gap = float(np.max(np.abs(x1.initial(theta) - x0.value_at(x0.t_end + theta))))
    if gap > tol:
        raise AnchorMismatchError(
            expected=x0.t_end, actual=x1.t0, message=f"restart history differs from I_t1 x0 by {gap:.3g}"
        )
    if x0.segments and x1.segments:
        jump = float(np.max(np.abs(x0.segments[-1].derivatives[-1] - x1.segments[0].derivatives[0])))
        if jump > tol:
            raise AnchorMismatchError(
                expected=x0.t_end, actual=x1.t0, message=f"derivative jump {jump:.3g} at the junction"
            )
    return Trajectory(x0.initial, x0.t0, x0.segments + x1.segments)
