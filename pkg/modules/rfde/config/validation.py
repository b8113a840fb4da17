from __future__ import annotations

import dataclasses
import math
from typing import Any, Callable

from modules.rfde.config import keys
from modules.rfde.solver.dto import SolveOptions

Check = tuple[bool, str]

_SOLVE_FIELDS = frozenset(f.name for f in dataclasses.fields(SolveOptions)) - {"lipschitz_source"}


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _string_list(value: Any, n: int, where: str) -> Check:
    if not isinstance(value, list) or not all(isinstance(s, str) for s in value):
        return False, f"{where} must be a list of {n} expression strings."
    if len(value) != n:
        return False, f"{where} has {len(value)} entries, expected n = {n}."
    return True, ""


def validate_top_level(raw: Any) -> Check:
    if not isinstance(raw, dict):
        return False, "Config must be a JSON object / TOML table."
    unknown = sorted(set(raw) - keys.TOP_LEVEL_KEYS)
    if unknown:
        return False, f"Unknown top-level key(s): {', '.join(unknown)}."
    missing = [k for k in keys.REQUIRED_KEYS if k not in raw]
    if missing:
        return False, f"Missing required key(s): {', '.join(missing)}."
    schema = raw.get(keys.SCHEMA, keys.SCHEMA_VERSION)
    if schema != keys.SCHEMA_VERSION:
        return False, f"Unsupported schema {schema!r} (expected {keys.SCHEMA_VERSION})."
    n = raw[keys.N]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        return False, f"n must be a positive integer, got {n!r}."
    for key in (keys.T0, keys.HORIZON):
        if key in raw and not _is_number(raw[key]):
            return False, f"{key} must be a finite number."
    if raw[keys.HORIZON] < raw.get(keys.T0, 0.0):
        return False, "horizon must not lie before t0."
    return True, "ok"


def validate_past_interval(value: Any) -> Check:
    if value in (keys.WHOLE, keys.POINT):
        return True, "ok"
    if isinstance(value, dict) and set(value) == {keys.COMPACT}:
        r = value[keys.COMPACT]
        if _is_number(r) and r > 0:
            return True, "ok"
        return False, f"compact past interval needs r > 0, got {r!r}."
    return False, f'past_interval must be {{"compact": r}}, "whole" or "point", got {value!r}.'


def _check_trivial(model: dict, n: int) -> Check:
    v = model.get(keys.V)
    if not isinstance(v, list) or len(v) != n or not all(_is_number(x) for x in v):
        return False, f"model.v must be a list of {n} numbers."
    return True, "ok"


def _check_constant_lag(model: dict, n: int) -> Check:
    ok, msg = _string_list(model.get(keys.F), n, "model.f")
    if not ok:
        return ok, msg
    r = model.get(keys.R)
    if not (_is_number(r) and r > 0):
        return False, f"model.r must be a positive number, got {r!r}."
    return True, "ok"


def _check_state_dependent(model: dict, n: int) -> Check:
    ok, msg = _string_list(model.get(keys.F), n, "model.f")
    if not ok:
        return ok, msg
    tau = model.get(keys.TAU)
    if not (isinstance(tau, str) or (_is_number(tau) and tau >= 0)):
        return False, "model.tau must be an expression string or a non-negative number."
    return True, "ok"


def _check_ode(model: dict, n: int) -> Check:
    return _string_list(model.get(keys.F), n, "model.f")


_MODEL_CHECKS: dict[str, Callable[[dict, int], Check]] = {
    keys.MODEL_TRIVIAL: _check_trivial,
    keys.MODEL_CONSTANT_LAG: _check_constant_lag,
    keys.MODEL_STATE_DEPENDENT: _check_state_dependent,
    keys.MODEL_ODE: _check_ode,
}


def validate_model(model: Any, n: int) -> Check:
    if not isinstance(model, dict) or not isinstance(model.get(keys.KIND), str):
        return False, "model must be a table with a string 'kind'."
    kind = model[keys.KIND]
    if kind.startswith(keys.BUILTIN_PREFIX):
        params = model.get(keys.PARAMS, {})
        if not isinstance(params, dict) or not all(_is_number(v) for v in params.values()):
            return False, "model.params must be a table of numbers."
        return True, "ok"
    check = _MODEL_CHECKS.get(kind)
    if check is None:
        kinds = ", ".join([*keys.MODEL_KINDS, keys.BUILTIN_PREFIX + "<name>"])
        return False, f"Unknown model kind {kind!r} (expected one of {kinds})."
    return check(model, n)


def validate_initial_history(hist: Any, n: int, past_interval: Any) -> Check:
    if not isinstance(hist, dict):
        return False, "initial_history must be a table."
    kind = hist.get(keys.KIND)
    if kind == keys.HISTORY_CLOSED_FORM:
        ok, msg = _string_list(hist.get(keys.EXPR), n, "initial_history.expr")
        if ok and keys.DERIVATIVE in hist:
            ok, msg = _string_list(hist[keys.DERIVATIVE], n, "initial_history.derivative")
        return (True, "ok") if ok else (ok, msg)
    if kind != keys.HISTORY_SAMPLED:
        return False, f"initial_history.kind must be 'closed_form' or 'sampled', got {kind!r}."
    if not (isinstance(past_interval, dict) and keys.COMPACT in past_interval):
        return False, "A sampled initial history needs a compact past interval."
    grid = hist.get(keys.GRID)
    if not isinstance(grid, list) or len(grid) < 2 or not all(_is_number(g) for g in grid):
        return False, "initial_history.grid must list at least two node times."
    steps = [b - a for a, b in zip(grid, grid[1:])]
    if min(steps) <= 0 or max(steps) - min(steps) > keys.GRID_TOL * max(1.0, abs(grid[0])):
        return False, "initial_history.grid must be increasing and uniform."
    r = past_interval[keys.COMPACT]
    if abs(grid[0] + r) > keys.GRID_TOL or abs(grid[-1]) > keys.GRID_TOL:
        return False, f"initial_history.grid must span [-{r}, 0]."
    for key in (keys.VALUES, keys.DERIVATIVES):
        rows = hist.get(key)
        if not isinstance(rows, list) or len(rows) != len(grid):
            return False, f"initial_history.{key} needs one row per grid node."
        for row in rows:
            row = row if isinstance(row, list) else [row]
            if len(row) != n or not all(_is_number(x) for x in row):
                return False, f"initial_history.{key} rows must hold {n} numbers."
    return True, "ok"


def validate_solve(table: Any) -> Check:
    if not isinstance(table, dict):
        return False, "solve must be a table."
    unknown = sorted(set(table) - _SOLVE_FIELDS - {keys.LIPSCHITZ})
    if unknown:
        return False, f"Unknown solve option(s): {', '.join(unknown)}."
    lip = table.get(keys.LIPSCHITZ)
    if lip is not None:
        if not isinstance(lip, dict) or not set(lip) <= {keys.LIPSCHITZ_L, keys.LIPSCHITZ_SAMPLES, keys.LIPSCHITZ_SEED}:
            return False, "solve.lipschitz must be {L} or {samples, seed}."
        if keys.LIPSCHITZ_L in lip and len(lip) > 1:
            return False, "solve.lipschitz.L excludes samples/seed."
    return True, "ok"


def validate_probe(table: Any) -> Check:
    if not isinstance(table, dict):
        return False, "probe must be a table."
    unknown = sorted(set(table) - keys.PROBE_KEYS)
    if unknown:
        return False, f"Unknown probe key(s): {', '.join(unknown)}."
    return True, "ok"


def validate_problem(raw: Any) -> Check:
    """Schema check of a raw config dict; first failure wins."""
    ok, msg = validate_top_level(raw)
    if not ok:
        return ok, msg
    n = raw[keys.N]
    checks = [
        lambda: validate_past_interval(raw[keys.PAST_INTERVAL]),
        lambda: validate_model(raw[keys.MODEL], n),
        lambda: validate_initial_history(raw[keys.INITIAL_HISTORY], n, raw[keys.PAST_INTERVAL]),
        lambda: validate_solve(raw.get(keys.SOLVE, {})),
        lambda: validate_probe(raw.get(keys.PROBE, {})),
    ]
    for check in checks:
        ok, msg = check()
        if not ok:
            return ok, msg
    return True, "ok"
