"""Model language: parsing, printing and evaluation."""
from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from modules.rfde.dsl import (
    DELAY_VARIABLES,
    HISTORY_VARIABLES,
    BinOp,
    Neg,
    Num,
    Var,
    compile_vector,
    evaluate,
    parse,
    to_source,
    tokenize,
    variables_of,
)
from modules.rfde.errors import EvalError, ParseError

CORPUS = [
    "1",
    "-2^2",
    "2^3^2",
    "(2^3)^2",
    "-x[0]",
    "--x[0]",
    "x[0] - -y[0]",
    "x[0] - (y[0] - t)",
    "x[0] - y[0] - t",
    "x[0] / y[0] / 2",
    "x[0] / (y[0] / 2)",
    "x[0] * -y[1]",
    "-(x[0] * y[1])",
    "(-x[1])^2",
    "-x[1]^2",
    "2^-1",
    "2^-t",
    "sin(t) + cos(x[0])",
    "exp(-t^2)",
    "log(1 + x[0]^2)",
    "sqrt(abs(x[1]))",
    "tanh(3*x[1])",
    "sgn(x[1]) * y[0]",
    "min(x[0], y[0]) + max(x[1], y[1])",
    "max(min(t, 1), -1)",
    "1.5e-3 * x[0]",
    ".5 * y[1]",
    "3. - t",
    "1e3 / (1 + y[1]^2)",
    "x[0]*x[1]*y[0]*y[1]",
    "(x[0] + x[1]) * (y[0] - y[1])",
    "x[0] + x[1] * y[0] - y[1] / t",
    "-y[0] + 0.25*tanh(x[0])",
    "1 + 0.25*tanh(x[0])",
    "-(x[0] - y[0])^3",
    "(x[0] - y[0])^-2",
    "abs(-x[1])^0.5",
    "exp(sin(x[0])) * cos(y[1])",
    "sin(cos(sin(t)))",
    "x[0] - x[0]^3 / 3 - y[1]",
    "0.1 * (1 - x[0]^2) * x[1] - x[0]",
    "y[0] * (1 - y[1] / 10)",
    "2 * y[0] / (1 + y[0]^10) - x[0]",
    "-(-(-t))",
    "((((t))))",
    "t ^ 2 ^ -1",
    "-2 ^ -2",
    "x[1] ^ 2",
    "max(x[0], -y[0]) / min(2, 3)",
    "sqrt(x[0]^2 + y[1]^2) - log(exp(t))",
]

T, X, Y = 0.3, np.array([0.7, -1.2]), np.array([0.4, 2.5])


@pytest.mark.parametrize("src", CORPUS)
def test_printer_round_trip(src):
    tree = parse(src, 2)
    printed = to_source(tree)
    again = parse(printed, 2)
    assert again == tree
    assert to_source(again) == printed
    assert evaluate(again, T, X, Y) == evaluate(tree, T, X, Y)


def test_corpus_size():
    assert len(CORPUS) == 50


@pytest.mark.parametrize(
    "src, expected",
    [
        ("-2^2", -4.0),
        ("2^3^2", 512.0),
        ("(2^3)^2", 64.0),
        ("-2 ^ -2", -0.25),
        ("1 - 2 - 3", -4.0),
        ("8 / 4 / 2", 1.0),
        ("2 + 3 * 4", 14.0),
        ("min(3, max(1, 2))", 2.0),
        ("sgn(-0.5) + sgn(0)", -1.0),
    ],
)
def test_precedence_and_associativity(src, expected):
    assert evaluate(parse(src, 1), 0.0) == expected


def test_printer_keeps_needed_parentheses():
    assert to_source(parse("-2^2", 1)) == "-2.0 ^ 2.0"
    assert to_source(parse("(2^3)^2", 1)) == "(2.0 ^ 3.0) ^ 2.0"
    assert to_source(parse("x[0] - (y[0] - t)", 1)) == "x[0] - (y[0] - t)"
    assert to_source(parse("((x[0]))", 1)) == "x[0]"


def test_tree_shape():
    tree = parse("-x[0] ^ 2", 1)
    assert tree == Neg(BinOp("^", Var("x", 0), Num(2.0)))
    assert variables_of(parse("x[0] + y[1] * t", 2)) == {("x", 0), ("y", 1), ("t", None)}


def test_theta_alias_in_histories():
    tree = parse("θ + 1", 1, HISTORY_VARIABLES)
    assert tree == parse("theta + 1", 1, HISTORY_VARIABLES)
    assert evaluate(tree, -0.5) == 0.5


@pytest.mark.parametrize(
    "src, variables, position",
    [
        ("1 +", None, 3),
        ("x[2]", None, 2),
        ("z + 1", None, 0),
        ("1 $ 2", None, 2),
        ("", None, 0),
        ("(1", None, 2),
        ("y[0]", DELAY_VARIABLES, 0),
        ("x[0.5]", None, 2),
    ],
)
def test_parse_errors_report_positions(src, variables, position):
    with pytest.raises(ParseError) as info:
        parse(src, 2, variables) if variables is not None else parse(src, 2)
    assert info.value.position == position
    assert info.value.source == src
    assert f"at position {position}" in str(info.value)


def test_arity_is_checked():
    with pytest.raises(ParseError, match="takes 1 argument"):
        parse("sin(1, 2)", 1)
    with pytest.raises(ParseError):
        parse(3.0, 1)  # type: ignore[arg-type]


@pytest.mark.parametrize(
    "src, kind",
    [
        ("1 / x[0]", "division_by_zero"),
        ("0 ^ -1", "division_by_zero"),
        ("(-1) ^ 0.5", "pow_domain"),
        ("log(x[0])", "log_domain"),
        ("sqrt(-1)", "sqrt_domain"),
        ("exp(1000)", "overflow"),
        ("10 ^ 400", "overflow"),
        ("1e308 * 10", "overflow"),
    ],
)
def test_evaluation_errors(src, kind):
    with pytest.raises(EvalError) as info:
        evaluate(parse(src, 1), 0.0, [0.0], [0.0])
    assert info.value.kind == kind


def test_tokenize_and_vectors():
    kinds = [tok.kind for tok in tokenize("x[0]+1.5e-3")]
    assert kinds == ["name", "op", "number", "op", "op", "number", "end"]
    f = compile_vector([parse("-y[0]", 2), parse("x[0] * x[1]", 2)])
    assert_array_equal(f(0.0, np.array([2.0, 3.0]), np.array([1.0, 0.0])), [-1.0, 6.0])
