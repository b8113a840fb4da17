"""Model language: f(t, x, y), delay τ(t, x) and initial histories in θ, written as strings in configs."""

from .ast import (
    DELAY_VARIABLES,
    FUNCTION_ARITY,
    HISTORY_VARIABLES,
    RHS_VARIABLES,
    BinOp,
    Call,
    Expr,
    Neg,
    Num,
    Var,
    variables_of,
)
from .evaluator import FUNCTIONS, compile_expr, compile_vector, evaluate
from .parser import parse, tokenize
from .printer import to_source

__all__ = [
    "BinOp",
    "Call",
    "DELAY_VARIABLES",
    "Expr",
    "FUNCTIONS",
    "FUNCTION_ARITY",
    "HISTORY_VARIABLES",
    "Neg",
    "Num",
    "RHS_VARIABLES",
    "Var",
    "compile_expr",
    "compile_vector",
    "evaluate",
    "parse",
    "to_source",
    "tokenize",
    "variables_of",
]
