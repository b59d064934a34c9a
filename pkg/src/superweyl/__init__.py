"""superweyl - Berezin-integral symbol calculus on forms, curvature and Euler-class checks."""

from .constants import CompositionMethod, GradingKind, HbarMode, Parity, WeitzenbockVariant
from .exceptions import (
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
from .expr import Expr, differentiate, evaluate, parse, simplify
from .fiber import (
    FiberContext,
    FiberOperator,
    compose_symbols,
    hodge_star,
    quantize,
    symbol_of,
)
from .geometry import CurvatureData, Manifold, MetricChart, load_spec
from .grassmann import GeneratorSet, Multivector, berezin_integral, pfaffian
from .models import CheckSettings, EulerReport, QuadratureSettings, RunReport
from .operators import FormField, FormOperator, hodge_laplacian, hodge_symbol
from .scalars import EXACT, NUMERIC, SYMBOLIC, ExactScalar, GaussianRational, NumericScalar
from .tstar import TStarSymbol, cartan_d, euler_characteristic, supertrace_gaussian

__all__ = [
    "EXACT",
    "NUMERIC",
    "SYMBOLIC",
    "AntisymmetryError",
    "ChartMismatchError",
    "CheckSettings",
    "CompositionMethod",
    "ConfigurationError",
    "CurvatureData",
    "EulerReport",
    "EvaluationDomainError",
    "ExactScalar",
    "Expr",
    "ExprSyntaxError",
    "FiberContext",
    "FiberContextError",
    "FiberOperator",
    "FormField",
    "FormOperator",
    "GaussianRational",
    "GeneratorError",
    "GeneratorSet",
    "GradingKind",
    "HbarMode",
    "InvolutionError",
    "Manifold",
    "MetricChart",
    "MetricError",
    "Multivector",
    "NumericScalar",
    "OperatorOrderError",
    "Parity",
    "QuadratureSettings",
    "RunReport",
    "ScalarRingError",
    "SingularMatrixError",
    "SpecValidationError",
    "SuperWeylError",
    "TStarSymbol",
    "UnboundVariableError",
    "UnknownFunctionError",
    "UnsupportedSymbolError",
    "WeitzenbockVariant",
    "berezin_integral",
    "cartan_d",
    "compose_symbols",
    "differentiate",
    "euler_characteristic",
    "evaluate",
    "hodge_laplacian",
    "hodge_star",
    "hodge_symbol",
    "load_spec",
    "parse",
    "pfaffian",
    "quantize",
    "simplify",
    "supertrace_gaussian",
    "symbol_of",
]

__version__ = "0.1.0"
