"""Registered built-in models (``"kind": "builtin:<name>"`` in problem configs).

Each factory takes the config ``params`` table, the past interval and the
state dimension, and returns a :class:`BuiltinModel` carrying the functional
plus whatever an oracle needs to reproduce it independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from modules.rfde.core.intervals import PastInterval
from modules.rfde.functional.builders import LagRhs, build_constant_lag, build_ode, build_state_dependent
from modules.rfde.functional.delays import build_proportional_delay, build_rezounenko_delay
from modules.rfde.functional.dto import HistoryFunctional


@dataclass
class BuiltinModel:
    functional: HistoryFunctional
    lag: float | None = None
    lag_rhs: LagRhs | None = None
    closed_form: str | None = None
    series: dict[str, float] | None = None
    params: dict[str, Any] = field(default_factory=dict)


BuiltinFactory = Callable[[dict, PastInterval, int], BuiltinModel]


def _take(params: dict, defaults: dict[str, float]) -> dict[str, float]:
    unknown = sorted(set(params) - set(defaults))
    if unknown:
        raise ValueError(f"unknown parameter(s) {unknown}; expected {sorted(defaults)}")
    return {k: float(params.get(k, v)) for k, v in defaults.items()}


def _pantograph(params: dict, interval: PastInterval, n: int) -> BuiltinModel:
    p = _take(params, {"a": 1.0, "b": 0.0, "lambda": 0.5})
    a, b = p["a"], p["b"]

    def rhs(t: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return a * y + b * x

    F = build_state_dependent(rhs, build_proportional_delay(p["lambda"], interval), n, label="pantograph")
    return BuiltinModel(F, series={"a": a, "b": b, "lambda": p["lambda"]}, params=p)


def _sgn_delay(params: dict, interval: PastInterval, n: int) -> BuiltinModel:
    p = _take(params, {"r": 1.0})

    def rhs(t: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.sign(y)

    F = build_constant_lag(rhs, p["r"], n, interval, label="sgn_delay")
    return BuiltinModel(F, lag=p["r"], lag_rhs=rhs, params=p)


def _quadratic_ode(params: dict, interval: PastInterval, n: int) -> BuiltinModel:
    _take(params, {})
    F = build_ode(lambda t, x: x * x, n, interval, label="quadratic_ode")
    return BuiltinModel(F, closed_form="quadratic")


def _linear_ode(params: dict, interval: PastInterval, n: int) -> BuiltinModel:
    p = _take(params, {"a": 1.0})
    a = p["a"]
    F = build_ode(lambda t, x: a * x, n, interval, label="linear_ode")
    return BuiltinModel(F, closed_form="linear", params=p)


def _rezounenko(params: dict, interval: PastInterval, n: int) -> BuiltinModel:
    """ẋ(t) = −x(t − τ), τ = base + gain·tanh(x(t − offset)); constant about memories on [−R, 0], R < offset."""
    p = _take(params, {"offset": 1.0, "base": 1.0, "gain": 0.25})
    offset, base, gain = p["offset"], p["base"], p["gain"]
    tau = build_rezounenko_delay(
        lambda t: offset,
        lambda t, y: base + gain * float(np.tanh(y[0])),
        interval,
    )
    F = build_state_dependent(lambda t, x, y: -y, tau, n, label="rezounenko")
    return BuiltinModel(F, params=p)


BUILTIN_MODELS: dict[str, BuiltinFactory] = {
    "pantograph": _pantograph,
    "sgn_delay": _sgn_delay,
    "quadratic_ode": _quadratic_ode,
    "linear_ode": _linear_ode,
    "rezounenko": _rezounenko,
}


def build_builtin(name: str, params: dict, interval: PastInterval, n: int) -> BuiltinModel:
    try:
        factory = BUILTIN_MODELS[name]
    except KeyError:
        raise ValueError(f"unknown built-in model {name!r}; available: {sorted(BUILTIN_MODELS)}") from None
    return factory(dict(params or {}), interval, n)
