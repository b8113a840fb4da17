"""Histories φ: I → ℝⁿ.

A history is positioned at time 0: ``value_at(t)`` is φ(t) for t ∈ I, so a
history can serve directly as the source of a view or as the past of a
trajectory.
"""

from __future__ import annotations

import abc
import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from modules.rfde.core.intervals import THETA_TOL, PastInterval
from modules.rfde.core.segment import Segment
from modules.rfde.errors import OutOfDomainError

logger = logging.getLogger(__name__)

VectorFn = Callable[[np.ndarray], np.ndarray]

# 닫힌 형식 미분을 수치로 구할 때의 간격
_FD_STEP = 1e-6
_ZERO_MATCH_TOL = 1e-12


def as_theta(theta: np.ndarray | float) -> tuple[np.ndarray, bool]:
    scalar = np.ndim(theta) == 0
    return np.atleast_1d(np.asarray(theta, dtype=np.float64)), scalar


class History(abc.ABC):
    """θ-indexed map on a past interval."""

    interval: PastInterval
    n: int

    @abc.abstractmethod
    def _values(self, theta: np.ndarray) -> np.ndarray:
        """(m,) -> (m, n); θ already checked against I."""

    @abc.abstractmethod
    def _derivatives(self, theta: np.ndarray) -> np.ndarray:
        ...

    def breakpoints(self, lower: float, upper: float) -> np.ndarray:
        """Stored node positions (θ) inside [lower, upper]; empty for closed forms."""
        return np.empty(0)

    @property
    def t_end(self) -> float:
        return 0.0

    def _check(self, theta: np.ndarray) -> None:
        lower = self.interval.lower
        bad = (theta > THETA_TOL) | (theta < lower - THETA_TOL)
        if np.any(bad):
            raise OutOfDomainError(t=float(theta[bad][0]), lower=lower, upper=0.0)

    def __call__(self, theta: np.ndarray | float) -> np.ndarray:
        th, scalar = as_theta(theta)
        self._check(th)
        out = self._values(np.minimum(th, 0.0))
        return out[0] if scalar else out

    def derivative(self, theta: np.ndarray | float) -> np.ndarray:
        th, scalar = as_theta(theta)
        self._check(th)
        out = self._derivatives(np.minimum(th, 0.0))
        return out[0] if scalar else out

    # histories double as time sources positioned at 0
    def value_at(self, t: np.ndarray | float) -> np.ndarray:
        return self(t)

    def derivative_at(self, t: np.ndarray | float) -> np.ndarray:
        return self.derivative(t)

    def at_zero(self) -> np.ndarray:
        return self(0.0)


@dataclass(frozen=True, eq=False)
class ClosedForm:
    """Body given by vectorized callables; ``source`` keeps DSL text for reports."""

    func: VectorFn
    dfunc: VectorFn | None = None
    source: tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class Sampled:
    segment: Segment


@dataclass(frozen=True, eq=False)
class InitialHistory(History):
    interval: PastInterval
    body: ClosedForm | Sampled
    n: int
    value_at_zero: np.ndarray = field(default=None)  # type: ignore[assignment]
    derivative_at_zero_minus: np.ndarray | None = None

    def __post_init__(self) -> None:
        if isinstance(self.body, Sampled):
            seg = self.body.segment
            if self.interval.kind != "compact":
                raise ValueError("sampled initial history requires a compact past interval")
            if abs(seg.t_start + self.interval.r) > THETA_TOL or abs(seg.t_end) > THETA_TOL:
                raise ValueError(
                    f"sampled history must span [-{self.interval.r:g}, 0], got {seg.span}"
                )
            if seg.n != self.n:
                raise ValueError(f"sampled history has dimension {seg.n}, expected {self.n}")
        elif self.interval.kind == "whole" and not isinstance(self.body, ClosedForm):
            raise ValueError("whole past interval requires a closed-form history")

        at_zero = self._values(np.zeros(1))[0]
        if self.value_at_zero is None:
            object.__setattr__(self, "value_at_zero", at_zero)
        else:
            given = np.asarray(self.value_at_zero, dtype=np.float64).reshape(-1)
            if given.shape != (self.n,) or np.max(np.abs(given - at_zero)) > _ZERO_MATCH_TOL:
                raise ValueError(f"value_at_zero {given} does not match body(0) = {at_zero}")
            object.__setattr__(self, "value_at_zero", given)
        if self.derivative_at_zero_minus is not None:
            object.__setattr__(
                self,
                "derivative_at_zero_minus",
                np.asarray(self.derivative_at_zero_minus, dtype=np.float64).reshape(-1),
            )

    @classmethod
    def constant(cls, c: Sequence[float] | np.ndarray | float, interval: PastInterval) -> "InitialHistory":
        c = np.atleast_1d(np.asarray(c, dtype=np.float64))
        zero = np.zeros_like(c)
        return cls(
            interval=interval,
            body=ClosedForm(
                func=lambda th: np.tile(c, (len(th), 1)),
                dfunc=lambda th: np.tile(zero, (len(th), 1)),
                source=tuple(repr(float(x)) for x in c),
            ),
            n=len(c),
            derivative_at_zero_minus=zero,
        )

    @classmethod
    def closed_form(
        cls,
        func: VectorFn,
        interval: PastInterval,
        n: int,
        *,
        dfunc: VectorFn | None = None,
        source: Sequence[str] = (),
    ) -> "InitialHistory":
        body = ClosedForm(func=func, dfunc=dfunc, source=tuple(source))
        hist = cls(interval=interval, body=body, n=n)
        if not interval.is_point:
            object.__setattr__(hist, "derivative_at_zero_minus", hist._derivatives(np.zeros(1))[0])
        return hist

    @classmethod
    def sampled(cls, segment: Segment) -> "InitialHistory":
        return cls(
            interval=PastInterval.compact(-segment.t_start),
            body=Sampled(segment),
            n=segment.n,
            derivative_at_zero_minus=segment.derivatives[-1],
        )

    def _values(self, theta: np.ndarray) -> np.ndarray:
        if isinstance(self.body, Sampled):
            return self.body.segment.value_at(theta)
        if self.interval.is_point:
            theta = np.zeros_like(theta)
        out = np.asarray(self.body.func(theta), dtype=np.float64)
        return out.reshape(len(theta), self.n)

    def _derivatives(self, theta: np.ndarray) -> np.ndarray:
        if isinstance(self.body, Sampled):
            return self.body.segment.derivative_at(theta)
        if self.interval.is_point:
            return np.zeros((len(theta), self.n))
        if self.body.dfunc is not None:
            out = np.asarray(self.body.dfunc(theta), dtype=np.float64)
            return out.reshape(len(theta), self.n)
        return self._finite_difference(theta)

    def _finite_difference(self, theta: np.ndarray) -> np.ndarray:
        h = _FD_STEP
        lower = self.interval.lower
        central = (theta + h <= 0.0) & (theta - h >= lower)
        out = np.empty((len(theta), self.n))
        if np.any(central):
            th = theta[central]
            out[central] = (self._values(th + h) - self._values(th - h)) / (2.0 * h)
        back = ~central & (theta - 2.0 * h >= lower)
        if np.any(back):
            th = theta[back]
            out[back] = (3.0 * self._values(th) - 4.0 * self._values(th - h) + self._values(th - 2.0 * h)) / (2.0 * h)
        fwd = ~central & ~back
        if np.any(fwd):
            th = theta[fwd]
            out[fwd] = (-3.0 * self._values(th) + 4.0 * self._values(th + h) - self._values(th + 2.0 * h)) / (2.0 * h)
        return out

    def breakpoints(self, lower: float, upper: float) -> np.ndarray:
        if isinstance(self.body, Sampled):
            nodes = self.body.segment.nodes
            return nodes[(nodes >= lower) & (nodes <= upper)]
        return np.empty(0)

    def describe(self) -> dict:
        if isinstance(self.body, Sampled):
            return {"kind": "sampled", "interval": self.interval.label(), "nodes": self.body.segment.n_cells + 1}
        return {"kind": "closed_form", "interval": self.interval.label(), "expr": list(self.body.source)}


@dataclass(frozen=True, eq=False)
class LinearHistory(History):
    """Σ cᵢ·φᵢ over histories sharing the same interval and dimension."""

    terms: tuple[tuple[float, History], ...]

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError("LinearHistory needs at least one term")
        first = self.terms[0][1]
        for _, h in self.terms[1:]:
            if h.n != first.n:
                raise ValueError("histories in a linear combination must share dimension")

    @property
    def interval(self) -> PastInterval:  # type: ignore[override]
        # 가장 좁은 구간을 따른다
        intervals = [h.interval for _, h in self.terms]
        return max(intervals, key=lambda i: i.lower)

    @property
    def n(self) -> int:  # type: ignore[override]
        return self.terms[0][1].n

    def _values(self, theta: np.ndarray) -> np.ndarray:
        out = np.zeros((len(theta), self.n))
        for c, h in self.terms:
            out += c * h(theta)
        return out

    def _derivatives(self, theta: np.ndarray) -> np.ndarray:
        out = np.zeros((len(theta), self.n))
        for c, h in self.terms:
            out += c * h.derivative(theta)
        return out

    def breakpoints(self, lower: float, upper: float) -> np.ndarray:
        parts = [h.breakpoints(lower, upper) for _, h in self.terms]
        return np.unique(np.concatenate(parts)) if parts else np.empty(0)


def history_sum(a: History, b: History) -> LinearHistory:
    return LinearHistory(((1.0, a), (1.0, b)))


def history_difference(a: History, b: History) -> LinearHistory:
    return LinearHistory(((1.0, a), (-1.0, b)))


def history_scale(c: float, a: History) -> LinearHistory:
    return LinearHistory(((float(c), a),))


def zero_history(interval: PastInterval, n: int) -> InitialHistory:
    return InitialHistory.constant(np.zeros(n), interval)
