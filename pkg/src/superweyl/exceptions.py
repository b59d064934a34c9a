"""Exception hierarchy for superweyl.

No external dependencies beyond the standard library.
"""


class SuperWeylError(Exception):
    """Base exception for all superweyl operations."""


class ExprSyntaxError(SuperWeylError):
    """Expression text does not match the grammar."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at byte {offset})")
        self.message = message
        self.offset = offset


class UnknownFunctionError(ExprSyntaxError):
    """Function name outside the supported table."""


class UnboundVariableError(SuperWeylError):
    """Evaluation requested with a free variable left unbound."""

    def __init__(self, name: str) -> None:
        super().__init__(f"unbound variable '{name}'")
        self.name = name


class EvaluationDomainError(SuperWeylError):
    """Numeric evaluation left the domain of a function (log, sqrt, division by zero)."""


class ScalarRingError(SuperWeylError):
    """Scalars from incompatible rings were combined, or an inverse does not exist."""


class GeneratorError(SuperWeylError):
    """Unknown or mismatched odd generators, or an ill-formed substitution/exponential."""


class AntisymmetryError(SuperWeylError):
    """A matrix required to be antisymmetric is not."""


class SingularMatrixError(SuperWeylError):
    """A matrix required to be invertible is singular."""


class InvolutionError(SuperWeylError):
    """A grading operator does not square to the identity, or star normalization is wrong."""


class FiberContextError(SuperWeylError):
    """Invalid fiber parameters (metric, ordering parameter, star constants)."""


class SpecValidationError(SuperWeylError):
    """Manifold spec file violates the schema."""


class MetricError(SpecValidationError):
    """Metric is not symmetric, not positive-definite, or its dimension is unsupported."""


class ChartMismatchError(SuperWeylError):
    """Objects attached to different charts were combined."""


class OperatorOrderError(SuperWeylError):
    """A form operator would exceed second order in coordinate derivatives."""


class UnsupportedSymbolError(SuperWeylError):
    """Symbol lies outside the family an operation supports."""


class ConfigurationError(SuperWeylError):
    """Environment configuration could not be parsed."""
