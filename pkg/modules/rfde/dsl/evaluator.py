"""Compile expression trees to closures over (t, x, y) and evaluate them in float64.

Domain failures raise :class:`EvalError` instead of producing NaN:
division_by_zero, log_domain, sqrt_domain, pow_domain and overflow.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from modules.rfde.dsl.ast import THETA, BinOp, Call, Expr, Neg, Num, Var, X, Y
from modules.rfde.errors import EvalError

Scalar = Callable[[float, np.ndarray, np.ndarray], float]
Vector = Callable[[float, np.ndarray, np.ndarray], np.ndarray]

_EMPTY = np.zeros(0)


def _finite(value: float) -> float:
    if not math.isfinite(value):
        raise EvalError(kind="overflow", message=f"non-finite intermediate value {value!r}")
    return value


def _div(a: float, b: float) -> float:
    if b == 0.0:
        raise EvalError(kind="division_by_zero", message="division by zero")
    return a / b


def _pow(a: float, b: float) -> float:
    if a < 0.0 and not float(b).is_integer():
        raise EvalError(kind="pow_domain", message=f"negative base {a!r} with non-integer exponent {b!r}")
    if a == 0.0 and b < 0.0:
        raise EvalError(kind="division_by_zero", message="zero raised to a negative power")
    try:
        return math.pow(a, b)
    except OverflowError:
        raise EvalError(kind="overflow", message=f"{a!r} ^ {b!r} overflows") from None


def _log(a: float) -> float:
    if a <= 0.0:
        raise EvalError(kind="log_domain", message=f"log of non-positive value {a!r}")
    return math.log(a)


def _sqrt(a: float) -> float:
    if a < 0.0:
        raise EvalError(kind="sqrt_domain", message=f"sqrt of negative value {a!r}")
    return math.sqrt(a)


def _exp(a: float) -> float:
    try:
        return math.exp(a)
    except OverflowError:
        raise EvalError(kind="overflow", message=f"exp({a!r}) overflows") from None


def _sgn(a: float) -> float:
    return float((a > 0.0) - (a < 0.0))


FUNCTIONS: dict[str, Callable[..., float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": _exp,
    "log": _log,
    "tanh": math.tanh,
    "sqrt": _sqrt,
    "abs": abs,
    "sgn": _sgn,
    "min": min,
    "max": max,
}

_BINARY: dict[str, Callable[[float, float], float]] = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _div,
    "^": _pow,
}


def compile_expr(e: Expr) -> Scalar:
    """Closure (t, x, y) -> float; θ reads the t slot."""
    if isinstance(e, Num):
        value = float(e.value)
        return lambda t, x, y: value
    if isinstance(e, Var):
        if e.name == X:
            i = e.index
            return lambda t, x, y: float(x[i])
        if e.name == Y:
            i = e.index
            return lambda t, x, y: float(y[i])
        if e.name in ("t", THETA):
            return lambda t, x, y: float(t)
        raise ValueError(f"unknown variable {e.name!r}")
    if isinstance(e, Neg):
        inner = compile_expr(e.operand)
        return lambda t, x, y: -inner(t, x, y)
    if isinstance(e, BinOp):
        op = _BINARY[e.op]
        left, right = compile_expr(e.left), compile_expr(e.right)
        return lambda t, x, y: _finite(op(left(t, x, y), right(t, x, y)))
    if isinstance(e, Call):
        fn = FUNCTIONS[e.func]
        args = [compile_expr(a) for a in e.args]
        if len(args) == 1:
            (arg,) = args
            return lambda t, x, y: _finite(float(fn(arg(t, x, y))))
        return lambda t, x, y: _finite(float(fn(*(a(t, x, y) for a in args))))
    raise TypeError(f"not an expression node: {e!r}")


def evaluate(e: Expr, t: float, x: Sequence[float] | np.ndarray = _EMPTY, y: Sequence[float] | np.ndarray = _EMPTY) -> float:
    return compile_expr(e)(float(t), np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64))


def compile_vector(exprs: Sequence[Expr]) -> Vector:
    """f(t, x, y) -> ndarray of shape (len(exprs),)."""
    parts = [compile_expr(e) for e in exprs]

    def f(t: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.array([p(t, x, y) for p in parts], dtype=np.float64)

    return f
