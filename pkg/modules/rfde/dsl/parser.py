"""Recursive-descent parser for the model language.

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' unary)?
    atom  := number | t | theta | θ | x[i] | y[i] | func '(' expr (',' expr)* ')' | '(' expr ')'

``^`` is right associative and binds tighter than unary minus, so ``-2^2`` is −4.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import AbstractSet

from modules.rfde.dsl.ast import (
    FUNCTION_ARITY,
    RHS_VARIABLES,
    THETA,
    BinOp,
    Call,
    Expr,
    Neg,
    Num,
    Var,
    X,
    Y,
)
from modules.rfde.errors import ParseError

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[^\W\d]\w*)
  | (?P<op>[-+*/^(),\[\]])
    """,
    re.VERBOSE,
)

_INDEXED = (X, Y)
_ALIASES = {"θ": THETA}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(position=pos, message=f"unexpected character {src[pos]!r}", source=src)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup or "", m.group(), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, n: int, variables: AbstractSet[str]):
        self.src = src
        self.n = n
        self.variables = variables
        self.tokens = tokenize(src)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, pos: int | None = None) -> ParseError:
        return ParseError(position=self.tok.pos if pos is None else pos, message=message, source=self.src)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    def parse(self) -> Expr:
        if self.tok.kind == "end":
            raise self.error("empty expression")
        e = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            e = BinOp(op, e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.accept("^"):
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "number":
            self.i += 1
            value = float(tok.text)
            if not math.isfinite(value):
                raise self.error(f"number {tok.text!r} is not finite", tok.pos)
            return Num(value)
        if tok.kind == "name":
            self.i += 1
            return self.named(tok)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        found = tok.text or "end of input"
        raise self.error(f"unexpected {found!r}")

    def named(self, tok: Token) -> Expr:
        name = _ALIASES.get(tok.text, tok.text)
        if name in FUNCTION_ARITY:
            return self.call(name, tok)
        if name not in self.variables:
            allowed = ", ".join(sorted(self.variables))
            raise self.error(f"unknown identifier {tok.text!r} (allowed variables: {allowed})", tok.pos)
        if name not in _INDEXED:
            return Var(name)
        self.expect("[")
        idx_tok = self.tok
        if idx_tok.kind != "number" or not idx_tok.text.isdigit():
            raise self.error(f"{name}[...] needs an integer index")
        index = int(idx_tok.text)
        if index >= self.n:
            raise self.error(f"index {name}[{index}] out of range for dimension {self.n}", idx_tok.pos)
        self.i += 1
        self.expect("]")
        return Var(name, index)

    def call(self, name: str, tok: Token) -> Expr:
        self.expect("(")
        args = [self.expr()]
        while self.accept(","):
            args.append(self.expr())
        self.expect(")")
        arity = FUNCTION_ARITY[name]
        if len(args) != arity:
            raise self.error(f"{name} takes {arity} argument(s), got {len(args)}", tok.pos)
        return Call(name, tuple(args))


def parse(src: str, n: int, variables: AbstractSet[str] = RHS_VARIABLES) -> Expr:
    """Parse ``src`` into an :class:`Expr`; x[i]/y[i] indices are checked against ``n``."""
    if not isinstance(src, str):
        raise ParseError(position=0, message=f"expression must be a string, got {type(src).__name__}")
    return _Parser(src, n, variables).parse()
