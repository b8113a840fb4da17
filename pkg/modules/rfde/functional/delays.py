"""Delay functionals τ(t, φ) ∈ −I."""

from __future__ import annotations

from typing import Callable

import numpy as np

from modules.rfde.core.history import History
from modules.rfde.core.intervals import PastInterval
from modules.rfde.errors import DelayExceedsIntervalError
from modules.rfde.functional.dto import DelayFunctional


def _limit(interval: PastInterval) -> float | None:
    if interval.is_point:
        return 0.0
    return None if interval.kind == "whole" else interval.length


def build_constant_delay(r: float, interval: PastInterval) -> DelayFunctional:
    r = float(r)
    limit = _limit(interval)
    if r < 0 or (limit is not None and r > limit + 1e-12):
        raise DelayExceedsIntervalError(delay=r, limit=limit if limit is not None else float("inf"))
    return DelayFunctional(eval=lambda t, phi: r, limit=limit, label=f"const({r:g})")


def build_variable_delay(func: Callable[[float], float], interval: PastInterval, label: str = "variable") -> DelayFunctional:
    """τ(t, φ) = d(t), independent of the history."""
    return DelayFunctional(eval=lambda t, phi: float(func(t)), limit=_limit(interval), label=label)


def build_state_delay(
    func: Callable[[float, np.ndarray], float],
    interval: PastInterval,
    label: str = "state",
) -> DelayFunctional:
    """τ(t, φ) = d(t, φ(0))."""
    return DelayFunctional(eval=lambda t, phi: float(func(t, phi.at_zero())), limit=_limit(interval), label=label)


def build_rezounenko_delay(
    offset: Callable[[float], float],
    tau0: Callable[[float, np.ndarray], float],
    interval: PastInterval,
    label: str = "rezounenko",
) -> DelayFunctional:
    """τ(t, φ) = τ₀(t, φ(−δ(t))): reads the history only at the lag δ(t).

    Constant about memories on [−R, 0] whenever R < inf δ(t).
    """
    limit = _limit(interval)

    def evaluate(t: float, phi: History) -> float:
        lag = float(offset(t))
        if lag < 0 or (limit is not None and lag > limit + 1e-12):
            raise DelayExceedsIntervalError(delay=lag, limit=limit if limit is not None else float("inf"))
        return float(tau0(t, phi(-lag)))

    return DelayFunctional(eval=evaluate, limit=limit, label=label)


def build_proportional_delay(lam: float, interval: PastInterval) -> DelayFunctional:
    """Pantograph lag τ(t, ·) = (1 − λ)t, defined for t ≥ 0."""
    if not 0.0 < lam < 1.0:
        raise ValueError(f"pantograph λ must lie in (0, 1), got {lam!r}")
    return DelayFunctional(
        eval=lambda t, phi: (1.0 - lam) * t,
        in_domain=lambda t, phi: t >= 0.0,
        limit=_limit(interval),
        label=f"proportional({lam:g})",
    )
