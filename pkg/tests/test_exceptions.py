"""Tests for exception hierarchy.

Dependencies: pytest, superweyl.exceptions.
"""

import pytest

from superweyl.exceptions import (
    AntisymmetryError,
    ChartMismatchError,
    ConfigurationError,
    EvaluationDomainError,
    ExprSyntaxError,
    FiberContextError,
    GeneratorError,
    InvolutionError,
    MetricError,
    OperatorOrderError,
    ScalarRingError,
    SingularMatrixError,
    SpecValidationError,
    SuperWeylError,
    UnboundVariableError,
    UnknownFunctionError,
    UnsupportedSymbolError,
)


@pytest.mark.parametrize(
    "exc",
    [
        AntisymmetryError,
        ChartMismatchError,
        ConfigurationError,
        EvaluationDomainError,
        ExprSyntaxError,
        FiberContextError,
        GeneratorError,
        InvolutionError,
        OperatorOrderError,
        ScalarRingError,
        SingularMatrixError,
        SpecValidationError,
        UnboundVariableError,
        UnsupportedSymbolError,
    ],
)
def test_exception_hierarchy(exc: type[Exception]) -> None:
    """Test that exceptions inherit from SuperWeylError."""
    assert issubclass(exc, SuperWeylError)


def test_specialized_errors() -> None:
    """Test the narrower subclasses."""
    assert issubclass(UnknownFunctionError, ExprSyntaxError)
    assert issubclass(MetricError, SpecValidationError)


def test_syntax_error_offset() -> None:
    """Test ExprSyntaxError keeps the message and byte offset."""
    err = ExprSyntaxError("unexpected ')'", 4)
    assert err.offset == 4
    assert err.message == "unexpected ')'"
    assert str(err) == "unexpected ')' (at byte 4)"


def test_unbound_variable_name() -> None:
    """Test UnboundVariableError has name attribute."""
    err = UnboundVariableError("th")
    assert err.name == "th"
    assert "th" in str(err)
