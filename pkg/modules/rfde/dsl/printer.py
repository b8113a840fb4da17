from __future__ import annotations

from modules.rfde.dsl.ast import BinOp, Call, Expr, Neg, Num, Var

_ADD, _MUL, _UNARY, _POW, _ATOM = 1, 2, 3, 4, 5
_LEVEL = {"+": _ADD, "-": _ADD, "*": _MUL, "/": _MUL, "^": _POW}
# (왼쪽, 오른쪽) 피연산자에 필요한 최소 우선순위
_OPERAND_LEVELS = {_ADD: (_ADD, _MUL), _MUL: (_MUL, _UNARY), _POW: (_ATOM, _UNARY)}


def _level(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _LEVEL[e.op]
    if isinstance(e, Neg):
        return _UNARY
    return _ATOM


def _wrap(e: Expr, minimum: int) -> str:
    text = to_source(e)
    return f"({text})" if _level(e) < minimum else text


def to_source(e: Expr) -> str:
    """Print with the fewest parentheses that parse back to the same tree."""
    if isinstance(e, Num):
        return repr(float(e.value))
    if isinstance(e, Var):
        return e.name if e.index is None else f"{e.name}[{e.index}]"
    if isinstance(e, Neg):
        return "-" + _wrap(e.operand, _UNARY)
    if isinstance(e, BinOp):
        left_min, right_min = _OPERAND_LEVELS[_LEVEL[e.op]]
        return f"{_wrap(e.left, left_min)} {e.op} {_wrap(e.right, right_min)}"
    if isinstance(e, Call):
        return f"{e.func}({', '.join(to_source(a) for a in e.args)})"
    raise TypeError(f"not an expression node: {e!r}")
