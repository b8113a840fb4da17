from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from modules.rfde.core.history import History
from modules.rfde.errors import DelayExceedsIntervalError

EvalFn = Callable[[float, History], np.ndarray]
DomainFn = Callable[[float, History], bool]
DelayFn = Callable[[float, History], float]

# 지연이 구간 길이를 반올림 수준으로 넘는 경우는 허용
_DELAY_TOL = 1e-12


def always_in_domain(t: float, phi: History) -> bool:
    return True


@dataclass(frozen=True, eq=False)
class HistoryFunctional:
    """F: (t, φ) ↦ ℝⁿ with its domain predicate and lookback depth."""

    n: int
    eval: EvalFn
    in_domain: DomainFn = always_in_domain
    delay_depth: float | None = None
    label: str = ""

    def __call__(self, t: float, phi: History) -> np.ndarray:
        out = np.asarray(self.eval(float(t), phi), dtype=np.float64).reshape(-1)
        if out.shape != (self.n,):
            raise ValueError(f"{self.label or 'F'} returned shape {out.shape}, expected ({self.n},)")
        return out


@dataclass(frozen=True, eq=False)
class DelayFunctional:
    """τ: (t, φ) ↦ [0, limit]; ``limit`` is r on Compact(r), None on the whole past."""

    eval: DelayFn
    in_domain: DomainFn = always_in_domain
    limit: float | None = None
    label: str = ""

    def __call__(self, t: float, phi: History) -> float:
        value = float(self.eval(float(t), phi))
        limit = self.limit if self.limit is not None else math.inf
        if not (-_DELAY_TOL <= value <= limit + _DELAY_TOL):
            raise DelayExceedsIntervalError(delay=value, limit=limit)
        return min(max(value, 0.0), limit)

    def bounded_by(self, limit: float | None) -> "DelayFunctional":
        return DelayFunctional(self.eval, self.in_domain, limit, self.label)


@dataclass
class LipschitzEstimate:
    mode: str
    value: float
    samples: int
    max_pair: dict[str, Any] = field(default_factory=dict)
    params: dict[str, Any] = field(default_factory=dict)
    drawn: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": 1,
            "mode": self.mode,
            "value": self.value,
            "samples": self.samples,
            "drawn": self.drawn,
            "params": dict(self.params),
            "max_pair": dict(self.max_pair),
        }
