"""Differential operators on forms, the Weitzenböck formula and the symbol of □."""

from .differential import (
    bochner_laplacian,
    codifferential,
    connection_matrix,
    covariant_derivative,
    covariant_derivative_operator,
    dirac_operator,
    divergence,
    exterior_d,
    gamma_operators,
    hodge_laplacian,
)
from .forms import FormField, FormOperator, form_gens, generator_matrices
from .symbol import (
    LaplacianSymbol,
    contract_ricci,
    fiber_part,
    hodge_symbol,
    random_curvature_tensors,
    ricci_operator,
    riemann_operator,
    verify_hodge_symbol,
    verify_hodge_symbol_identities,
)
from .weitzenbock import (
    check_form_complex,
    check_variants,
    check_weitzenbock,
    curvature_endomorphism,
    random_test_fields,
    standard_test_fields,
    weitzenbock_rhs,
)

__all__ = [
    "FormField",
    "FormOperator",
    "LaplacianSymbol",
    "bochner_laplacian",
    "check_form_complex",
    "check_variants",
    "check_weitzenbock",
    "codifferential",
    "connection_matrix",
    "contract_ricci",
    "covariant_derivative",
    "covariant_derivative_operator",
    "curvature_endomorphism",
    "dirac_operator",
    "divergence",
    "exterior_d",
    "fiber_part",
    "form_gens",
    "gamma_operators",
    "generator_matrices",
    "hodge_laplacian",
    "hodge_symbol",
    "random_curvature_tensors",
    "random_test_fields",
    "ricci_operator",
    "riemann_operator",
    "standard_test_fields",
    "verify_hodge_symbol",
    "verify_hodge_symbol_identities",
    "weitzenbock_rhs",
]
