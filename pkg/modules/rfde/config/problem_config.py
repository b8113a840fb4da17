"""Load problem configs (JSON or TOML) into ready-to-solve objects.

    problem = load_problem("configs/constant_lag.json")
    traj, report = continue_maximal(problem.functional, problem.initial, problem.t0, problem.horizon, problem.options)

DSL strings are parsed eagerly, so syntax errors surface here with the key
path and the character position inside the expression.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np
import toml

from modules.rfde.config import keys
from modules.rfde.config.validation import validate_problem
from modules.rfde.core.history import History, InitialHistory
from modules.rfde.core.intervals import PastInterval
from modules.rfde.core.segment import Segment
from modules.rfde.dsl.ast import DELAY_VARIABLES, HISTORY_VARIABLES, RHS_VARIABLES
from modules.rfde.dsl.evaluator import compile_expr, compile_vector
from modules.rfde.dsl.parser import parse
from modules.rfde.errors import ConfigError, DelayExceedsIntervalError, IntervalMismatchError, ParseError
from modules.rfde.functional.builders import (
    LagRhs,
    build_constant_lag,
    build_ode,
    build_state_dependent,
    build_trivial,
)
from modules.rfde.functional.builtins import build_builtin
from modules.rfde.functional.delays import build_constant_delay, build_state_delay
from modules.rfde.functional.dto import HistoryFunctional
from modules.rfde.solver.dto import LipschitzSource, SolveOptions

logger = logging.getLogger(__name__)

_EMPTY = np.zeros(0)


@dataclass
class ProblemConfig:
    n: int
    interval: PastInterval
    model_kind: str
    functional: HistoryFunctional
    initial: History
    t0: float
    horizon: float
    options: SolveOptions
    probe: dict[str, Any] = field(default_factory=dict)
    name: str = ""
    path: str | None = None
    lag: float | None = None
    lag_rhs: LagRhs | None = None
    series: dict[str, float] | None = None
    closed_form: str | None = None
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def base(self) -> tuple[float, History]:
        return self.t0, self.initial

    def describe(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "path": self.path,
            "model": self.model_kind,
            "n": self.n,
            "past_interval": self.interval.label(),
            "t0": self.t0,
            "horizon": self.horizon,
        }


def load_raw(path: str | Path) -> dict[str, Any]:
    """Decode a .json or .toml file; decode errors carry line and column."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(message=f"cannot read config: {exc.strerror or exc}", path=str(p)) from exc
    if p.suffix.lower() == ".toml":
        try:
            return toml.loads(text)
        except toml.TomlDecodeError as exc:
            raise ConfigError(
                message=str(exc.msg), path=str(p), line=getattr(exc, "lineno", None), column=getattr(exc, "colno", None)
            ) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(message=exc.msg, path=str(p), line=exc.lineno, column=exc.colno) from exc


def _interval(value: Any) -> PastInterval:
    if value == keys.WHOLE:
        return PastInterval.whole()
    if value == keys.POINT:
        return PastInterval.point()
    return PastInterval.compact(float(value[keys.COMPACT]))


class _Builder:
    """Turns a validated raw dict into a ProblemConfig; errors name the offending key."""

    def __init__(self, raw: dict[str, Any], path: str | None):
        self.raw = raw
        self.path = path
        self.n: int = raw[keys.N]
        self.interval = _interval(raw[keys.PAST_INTERVAL])

    def fail(self, message: str) -> ConfigError:
        return ConfigError(message=message, path=self.path)

    def expr(self, src: str, where: str, variables):
        try:
            return parse(src, self.n, variables)
        except ParseError as exc:
            raise self.fail(f"{where}: {exc.detail} at position {exc.position} in {src!r}") from exc

    def vector(self, sources: list[str], where: str, variables):
        return compile_vector([self.expr(s, f"{where}[{i}]", variables) for i, s in enumerate(sources)])

    def model(self) -> dict[str, Any]:
        model = self.raw[keys.MODEL]
        kind: str = model[keys.KIND]
        try:
            if kind.startswith(keys.BUILTIN_PREFIX):
                return self._builtin(kind[len(keys.BUILTIN_PREFIX):], model.get(keys.PARAMS, {}))
            if kind == keys.MODEL_TRIVIAL:
                return {"functional": build_trivial(model[keys.V])}
            if kind == keys.MODEL_CONSTANT_LAG:
                f = self.vector(model[keys.F], "model.f", RHS_VARIABLES)
                r = float(model[keys.R])
                return {"functional": build_constant_lag(f, r, self.n, self.interval), "lag": r, "lag_rhs": f}
            if kind == keys.MODEL_STATE_DEPENDENT:
                f = self.vector(model[keys.F], "model.f", RHS_VARIABLES)
                return {"functional": build_state_dependent(f, self._delay(model[keys.TAU]), self.n)}
            f = self.vector(model[keys.F], "model.f", RHS_VARIABLES - {"y"})
            return {"functional": build_ode(lambda t, x: f(t, x, _EMPTY), self.n, self.interval)}
        except (DelayExceedsIntervalError, IntervalMismatchError) as exc:
            raise self.fail(f"model: {exc}") from exc

    def _builtin(self, name: str, params: dict) -> dict[str, Any]:
        try:
            built = build_builtin(name, params, self.interval, self.n)
        except ValueError as exc:
            raise self.fail(f"model: {exc}") from exc
        return {
            "functional": built.functional,
            "lag": built.lag,
            "lag_rhs": built.lag_rhs,
            "series": built.series,
            "closed_form": built.closed_form,
            "params": built.params,
        }

    def _delay(self, tau: Any):
        if not isinstance(tau, str):
            return build_constant_delay(float(tau), self.interval)
        d = compile_expr(self.expr(tau, "model.tau", DELAY_VARIABLES))
        return build_state_delay(lambda t, x0: d(t, x0, _EMPTY), self.interval, label=f"tau({tau})")

    def initial(self) -> History:
        hist = self.raw[keys.INITIAL_HISTORY]
        if hist[keys.KIND] == keys.HISTORY_SAMPLED:
            grid = hist[keys.GRID]
            values = np.asarray(hist[keys.VALUES], dtype=np.float64).reshape(len(grid), self.n)
            derivs = np.asarray(hist[keys.DERIVATIVES], dtype=np.float64).reshape(len(grid), self.n)
            return InitialHistory.sampled(Segment(float(grid[0]), float(grid[-1]), values, derivs))
        exprs = hist[keys.EXPR]
        func = _history_fn(self.vector(exprs, "initial_history.expr", HISTORY_VARIABLES))
        dfunc = None
        if keys.DERIVATIVE in hist:
            dfunc = _history_fn(self.vector(hist[keys.DERIVATIVE], "initial_history.derivative", HISTORY_VARIABLES))
        return InitialHistory.closed_form(func, self.interval, self.n, dfunc=dfunc, source=tuple(exprs))

    def options(self) -> SolveOptions:
        table = dict(self.raw.get(keys.SOLVE, {}))
        lip = table.pop(keys.LIPSCHITZ, None)
        try:
            if lip is not None:
                if keys.LIPSCHITZ_L in lip:
                    table["lipschitz_source"] = LipschitzSource.user_provided(float(lip[keys.LIPSCHITZ_L]))
                else:
                    table["lipschitz_source"] = LipschitzSource.estimated(
                        int(lip.get(keys.LIPSCHITZ_SAMPLES, 32)), int(lip.get(keys.LIPSCHITZ_SEED, 0))
                    )
            return SolveOptions(**table)
        except (TypeError, ValueError) as exc:
            raise self.fail(f"solve: {exc}") from exc


def _history_fn(f: Callable[[float, np.ndarray, np.ndarray], np.ndarray]):
    def func(theta: np.ndarray) -> np.ndarray:
        return np.array([f(float(th), _EMPTY, _EMPTY) for th in np.atleast_1d(theta)])

    return func


def build_problem(raw: dict[str, Any], path: str | None = None) -> ProblemConfig:
    ok, msg = validate_problem(raw)
    if not ok:
        raise ConfigError(message=msg, path=path)
    builder = _Builder(raw, path)
    model = builder.model()
    problem = ProblemConfig(
        n=builder.n,
        interval=builder.interval,
        model_kind=raw[keys.MODEL][keys.KIND],
        initial=builder.initial(),
        t0=float(raw.get(keys.T0, 0.0)),
        horizon=float(raw[keys.HORIZON]),
        options=builder.options(),
        probe=dict(raw.get(keys.PROBE, {})),
        name=str(raw.get(keys.NAME, "")),
        path=path,
        **model,
    )
    logger.debug("[config] loaded %s", problem.describe())
    return problem


def load_problem(path: str | Path) -> ProblemConfig:
    return build_problem(load_raw(path), str(path))
