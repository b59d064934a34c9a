"""Tests for the expression language.

Dependencies: pytest, sympy, superweyl.expr, superweyl.exceptions.
"""

import math

import pytest
import sympy

from superweyl.exceptions import (
    EvaluationDomainError,
    ExprSyntaxError,
    UnboundVariableError,
    UnknownFunctionError,
)
from superweyl.expr import Expr, differentiate, evaluate, evaluate_many, parse, simplify


def test_parse_respects_precedence() -> None:
    """Test that ^ binds tighter than unary minus and * tighter than +."""
    assert evaluate(parse("-x^2"), {"x": 3.0}) == -9.0
    assert evaluate(parse("1 + 2*3"), {}) == 7.0
    assert evaluate(parse("2^3^2"), {}) == 512.0


def test_parse_keeps_tree_unevaluated() -> None:
    """Test that parsing does not fold constants."""
    tree = parse("1 + 1").tree
    assert isinstance(tree, sympy.Add)
    assert simplify(parse("1 + 1")) == Expr.constant(2)


def test_differentiate_sphere_metric() -> None:
    """Test d/dth of sin(th)^2 equals 2 sin(th) cos(th)."""
    derivative = differentiate(parse("sin(th)^2"), "th")
    assert evaluate(derivative, {"th": 0.7}) == pytest.approx(math.sin(1.4))


def test_differentiate_absent_variable_is_zero() -> None:
    """Test derivative with respect to an absent variable."""
    assert evaluate(differentiate(parse("x^2"), "y"), {"x": 1.0}) == 0.0


def test_pi_and_functions() -> None:
    """Test pi and the function table."""
    value = evaluate(parse("cos(pi) + exp(0) + sqrt(4) + log(1)"), {})
    assert value == pytest.approx(2.0)


def test_syntax_error_offset() -> None:
    """Test that syntax errors carry a byte offset."""
    with pytest.raises(ExprSyntaxError) as info:
        parse("x + * y")
    assert info.value.offset == 4


def test_syntax_error_unexpected_character() -> None:
    """Test that characters outside the grammar and unclosed parentheses are reported."""
    with pytest.raises(ExprSyntaxError) as info:
        parse("x + θ")
    assert info.value.offset == 4
    with pytest.raises(ExprSyntaxError) as info:
        parse("(x + 1")
    assert "expected ')'" in str(info.value)


def test_unknown_function() -> None:
    """Test that calls outside the table are rejected."""
    with pytest.raises(UnknownFunctionError):
        parse("sec(x)")


def test_unbound_variable() -> None:
    """Test that evaluation names the missing variable."""
    with pytest.raises(UnboundVariableError) as info:
        evaluate(parse("x + y"), {"x": 1.0})
    assert info.value.name == "y"


@pytest.mark.parametrize(
    ("text", "bindings"),
    [("log(x)", {"x": 0.0}), ("sqrt(x)", {"x": -1.0}), ("1/x", {"x": 0.0})],
)
def test_domain_errors(text: str, bindings: dict[str, float]) -> None:
    """Test that domain violations raise instead of returning NaN."""
    with pytest.raises(EvaluationDomainError):
        evaluate(parse(text), bindings)


def test_evaluate_many_extra_bindings_ignored() -> None:
    """Test that unused bindings are accepted."""
    values = evaluate_many([parse("x"), parse("2*x")], {"x": 1.5, "unused": 9.0})
    assert values == [1.5, 3.0]


def test_substitute() -> None:
    """Test substitution of numbers and expressions."""
    e = parse("a*x^2").substitute({"a": 2, "x": parse("y + 1")})
    assert e.free_variables == frozenset({"y"})
    assert evaluate(e, {"y": 1.0}) == 8.0
