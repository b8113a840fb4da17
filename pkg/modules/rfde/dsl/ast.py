"""Expression tree of the model language.

Nodes are immutable; structural equality is what the printer round trip checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

# 변수 이름: t, theta(θ), x[i], y[i]
T = "t"
THETA = "theta"
X = "x"
Y = "y"

RHS_VARIABLES = frozenset({T, X, Y})
DELAY_VARIABLES = frozenset({T, X})
HISTORY_VARIABLES = frozenset({THETA})

BINARY_OPS = ("+", "-", "*", "/", "^")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str
    index: int | None = None


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["Expr", ...]


Expr = Union[Num, Var, Neg, BinOp, Call]


def variables_of(e: Expr) -> set[tuple[str, int | None]]:
    if isinstance(e, Var):
        return {(e.name, e.index)}
    if isinstance(e, Neg):
        return variables_of(e.operand)
    if isinstance(e, BinOp):
        return variables_of(e.left) | variables_of(e.right)
    if isinstance(e, Call):
        out: set[tuple[str, int | None]] = set()
        for arg in e.args:
            out |= variables_of(arg)
        return out
    return set()


FUNCTION_ARITY: dict[str, int] = {
    "sin": 1,
    "cos": 1,
    "exp": 1,
    "log": 1,
    "tanh": 1,
    "sqrt": 1,
    "abs": 1,
    "sgn": 1,
    "min": 2,
    "max": 2,
}
