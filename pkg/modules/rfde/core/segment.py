"""C¹ segment on a uniform grid, evaluated by cubic Hermite interpolation."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from modules.rfde.errors import OutOfDomainError

# 노드와 같은 시각으로 볼 거리 (셀 폭 대비)
_NODE_SNAP = 1e-12


def _as_matrix(a: np.ndarray | list, name: str) -> np.ndarray:
    arr = np.array(a, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValueError(f"{name} must be (N+1, n), got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Segment:
    t_start: float
    t_end: float
    values: np.ndarray
    derivatives: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "t_start", float(self.t_start))
        object.__setattr__(self, "t_end", float(self.t_end))
        object.__setattr__(self, "values", _as_matrix(self.values, "values"))
        object.__setattr__(self, "derivatives", _as_matrix(self.derivatives, "derivatives"))
        if not self.t_start < self.t_end:
            raise ValueError(f"segment needs t_start < t_end, got [{self.t_start}, {self.t_end}]")
        if self.values.shape != self.derivatives.shape:
            raise ValueError(
                f"values {self.values.shape} and derivatives {self.derivatives.shape} differ"
            )
        if self.values.shape[0] < 2:
            raise ValueError("segment needs at least one cell (N >= 1)")

    @classmethod
    def from_function(
        cls,
        t_start: float,
        t_end: float,
        n_cells: int,
        func: Callable[[np.ndarray], np.ndarray],
        dfunc: Callable[[np.ndarray], np.ndarray],
    ) -> "Segment":
        """Sample ``func``/``dfunc`` (vectorized, (m,) -> (m, n)) on the grid."""
        nodes = _grid(t_start, t_end, n_cells)
        return cls(t_start, t_end, func(nodes), dfunc(nodes))

    @classmethod
    def line(cls, t_start: float, t_end: float, x0: np.ndarray, v: np.ndarray, n_cells: int = 1) -> "Segment":
        x0 = np.asarray(x0, dtype=np.float64).reshape(-1)
        v = np.asarray(v, dtype=np.float64).reshape(-1)
        nodes = _grid(t_start, t_end, n_cells)
        values = x0[None, :] + (nodes - t_start)[:, None] * v[None, :]
        return cls(t_start, t_end, values, np.tile(v, (n_cells + 1, 1)))

    @property
    def n(self) -> int:
        return self.values.shape[1]

    @property
    def n_cells(self) -> int:
        return self.values.shape[0] - 1

    @property
    def h(self) -> float:
        return (self.t_end - self.t_start) / self.n_cells

    @property
    def span(self) -> tuple[float, float]:
        return self.t_start, self.t_end

    @cached_property
    def nodes(self) -> np.ndarray:
        nodes = _grid(self.t_start, self.t_end, self.n_cells)
        nodes.setflags(write=False)
        return nodes

    @cached_property
    def midpoints(self) -> np.ndarray:
        mids = 0.5 * (self.nodes[:-1] + self.nodes[1:])
        mids.setflags(write=False)
        return mids

    def same_grid(self, other: "Segment", tol: float = 1e-12) -> bool:
        return (
            self.n_cells == other.n_cells
            and abs(self.t_start - other.t_start) <= tol
            and abs(self.t_end - other.t_end) <= tol
        )

    def covers(self, t: float, tol: float = 1e-12) -> bool:
        return self.t_start - tol <= t <= self.t_end + tol

    def value_at(self, t: np.ndarray | float) -> np.ndarray:
        return self._eval(t, derivative=False)

    def derivative_at(self, t: np.ndarray | float) -> np.ndarray:
        return self._eval(t, derivative=True)

    def with_data(self, values: np.ndarray, derivatives: np.ndarray) -> "Segment":
        return Segment(self.t_start, self.t_end, values, derivatives)

    def shifted(self, dt: float) -> "Segment":
        return Segment(self.t_start + dt, self.t_end + dt, self.values, self.derivatives)

    def _eval(self, t: np.ndarray | float, *, derivative: bool) -> np.ndarray:
        scalar = np.ndim(t) == 0
        tt = np.atleast_1d(np.asarray(t, dtype=np.float64))
        span_tol = 1e-12 * max(1.0, abs(self.t_end))
        if np.any(tt < self.t_start - span_tol) or np.any(tt > self.t_end + span_tol):
            bad = tt[(tt < self.t_start - span_tol) | (tt > self.t_end + span_tol)][0]
            raise OutOfDomainError(t=float(bad), lower=self.t_start, upper=self.t_end)

        h = self.h
        pos = (tt - self.t_start) / h
        j = np.clip(np.floor(pos).astype(np.int64), 0, self.n_cells - 1)
        s = np.clip(pos - j, 0.0, 1.0)[:, None]

        y0, y1 = self.values[j], self.values[j + 1]
        m0, m1 = self.derivatives[j], self.derivatives[j + 1]
        s2 = s * s
        s3 = s2 * s
        if derivative:
            out = (
                (6.0 * s2 - 6.0 * s) / h * y0
                + (3.0 * s2 - 4.0 * s + 1.0) * m0
                + (-6.0 * s2 + 6.0 * s) / h * y1
                + (3.0 * s2 - 2.0 * s) * m1
            )
            stored = self.derivatives
        else:
            out = (
                (2.0 * s3 - 3.0 * s2 + 1.0) * y0
                + (s3 - 2.0 * s2 + s) * h * m0
                + (-2.0 * s3 + 3.0 * s2) * y1
                + (s3 - s2) * h * m1
            )
            stored = self.values

        # 노드 위의 평가는 저장값을 그대로 돌려준다
        k = np.clip(np.rint(pos).astype(np.int64), 0, self.n_cells)
        on_node = np.abs(pos - k) <= _NODE_SNAP
        if np.any(on_node):
            out[on_node] = stored[k[on_node]]
        return out[0] if scalar else out


def _grid(t_start: float, t_end: float, n_cells: int) -> np.ndarray:
    if n_cells < 1:
        raise ValueError(f"n_cells must be >= 1, got {n_cells}")
    j = np.arange(n_cells + 1, dtype=np.float64)
    nodes = t_start + j * ((t_end - t_start) / n_cells)
    nodes[-1] = t_end
    return nodes
