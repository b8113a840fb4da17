"""Factories for history functionals F."""

from __future__ import annotations

import logging
from typing import Callable, Sequence

import numpy as np

from modules.rfde.core.history import History
from modules.rfde.core.intervals import PastInterval
from modules.rfde.errors import DelayExceedsIntervalError, IntervalMismatchError
from modules.rfde.functional.dto import DelayFunctional, HistoryFunctional

logger = logging.getLogger(__name__)

# f(t, x, y) -> ℝⁿ, x = φ(0), y = φ(−r)
LagRhs = Callable[[float, np.ndarray, np.ndarray], np.ndarray]
OdeRhs = Callable[[float, np.ndarray], np.ndarray]
MultiLagRhs = Callable[[float, np.ndarray, Sequence[np.ndarray]], np.ndarray]
RhsDomain = Callable[[float, np.ndarray, np.ndarray], bool]


def _check_lag(r: float, interval: PastInterval | None) -> None:
    if r <= 0:
        raise ValueError(f"lag must be positive, got {r!r}")
    if interval is None:
        return
    if interval.is_point:
        raise DelayExceedsIntervalError(delay=r, limit=0.0)
    if r > interval.length + 1e-12:
        raise DelayExceedsIntervalError(delay=r, limit=interval.length)


def build_trivial(v: Sequence[float] | np.ndarray | float) -> HistoryFunctional:
    v = np.atleast_1d(np.asarray(v, dtype=np.float64)).copy()
    v.setflags(write=False)
    return HistoryFunctional(n=len(v), eval=lambda t, phi: v, delay_depth=0.0, label="trivial")


def build_constant_lag(
    f: LagRhs,
    r: float,
    n: int,
    interval: PastInterval | None = None,
    *,
    label: str = "constant_lag",
) -> HistoryFunctional:
    """F(t, φ) = f(t, φ(0), φ(−r))."""
    r = float(r)
    _check_lag(r, interval)
    probe = np.array([0.0, -r])

    def evaluate(t: float, phi: History) -> np.ndarray:
        x, y = phi(probe)
        return np.asarray(f(t, x, y), dtype=np.float64)

    return HistoryFunctional(n=n, eval=evaluate, delay_depth=r, label=label)


def build_multi_lag(
    f: MultiLagRhs,
    lags: Sequence[float],
    n: int,
    interval: PastInterval | None = None,
    *,
    label: str = "multi_lag",
) -> HistoryFunctional:
    """F(t, φ) = f(t, φ(0), (φ(−r₁), …, φ(−r_m)))."""
    lags = tuple(float(r) for r in lags)
    if not lags:
        raise ValueError("build_multi_lag needs at least one lag")
    for r in lags:
        _check_lag(r, interval)
    probe = np.array((0.0,) + tuple(-r for r in lags))

    def evaluate(t: float, phi: History) -> np.ndarray:
        sampled = phi(probe)
        return np.asarray(f(t, sampled[0], tuple(sampled[1:])), dtype=np.float64)

    return HistoryFunctional(n=n, eval=evaluate, delay_depth=max(lags), label=label)


def build_state_dependent(
    f: LagRhs,
    tau: DelayFunctional,
    n: int,
    *,
    f_in_domain: RhsDomain | None = None,
    label: str = "state_dependent",
) -> HistoryFunctional:
    """F_{f,τ} = f ∘ ρ_τ with ρ_τ(t, φ) = (t, φ(0), φ(−τ(t, φ)))."""

    def rho(t: float, phi: History) -> tuple[np.ndarray, np.ndarray]:
        d = tau(t, phi)
        x, y = phi(np.array([0.0, -d]))
        return x, y

    def evaluate(t: float, phi: History) -> np.ndarray:
        x, y = rho(t, phi)
        return np.asarray(f(t, x, y), dtype=np.float64)

    def in_domain(t: float, phi: History) -> bool:
        if not tau.in_domain(t, phi):
            return False
        if f_in_domain is None:
            return True
        try:
            x, y = rho(t, phi)
        except DelayExceedsIntervalError:
            return False
        return bool(f_in_domain(t, x, y))

    return HistoryFunctional(
        n=n,
        eval=evaluate,
        in_domain=in_domain,
        delay_depth=tau.limit,
        label=label,
    )


def build_ode(f: OdeRhs, n: int, interval: PastInterval, *, label: str = "ode") -> HistoryFunctional:
    """F_f(t, φ) = f(t, φ(0)) on the point past interval."""
    if not interval.is_point:
        raise IntervalMismatchError(expected="point", actual=interval.label())

    def evaluate(t: float, phi: History) -> np.ndarray:
        return np.asarray(f(t, phi.at_zero()), dtype=np.float64)

    return HistoryFunctional(n=n, eval=evaluate, delay_depth=0.0, label=label)
