"""Exact super-symbol calculus on the fiber Λ(R^n)."""

from .composition import compose_symbols, poisson_bracket_fiber
from .context import FiberContext
from .kernels import delta_kernel, kernel_compose, kernel_of, op_from_kernel
from .operator import (
    FiberOperator,
    generator_operators,
    identity_operator,
    parity_operator,
    supercommutator,
)
from .quantization import (
    matrix_inverse,
    pullback_operator,
    quantize,
    spin_conjugate,
    symbol_by_exponential_test,
    symbol_of,
)
from .selftest import run_fiber_selftest
from .star import check_involution, hodge_star, star_inverse
from .traces import (
    graded_trace,
    grading_operator,
    star_trace_from_symbol,
    supertrace_from_symbol,
    trace_from_symbol,
    trace_report,
    weyl_trace,
)

__all__ = [
    "FiberContext",
    "FiberOperator",
    "check_involution",
    "compose_symbols",
    "delta_kernel",
    "generator_operators",
    "graded_trace",
    "grading_operator",
    "hodge_star",
    "identity_operator",
    "kernel_compose",
    "kernel_of",
    "matrix_inverse",
    "op_from_kernel",
    "parity_operator",
    "poisson_bracket_fiber",
    "pullback_operator",
    "quantize",
    "run_fiber_selftest",
    "spin_conjugate",
    "star_inverse",
    "star_trace_from_symbol",
    "supercommutator",
    "supertrace_from_symbol",
    "symbol_by_exponential_test",
    "symbol_of",
    "trace_from_symbol",
    "trace_report",
    "weyl_trace",
]
