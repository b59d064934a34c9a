"""Symbols on T*M: canonical brackets, the differential d, and the Euler characteristic."""

from .dcheck import defect_table, run_dcheck
from .euler import (
    curvature_gaussian,
    euler_characteristic,
    euler_density,
    euler_density_at,
    pfaffian_top,
    supertrace_density,
    supertrace_gaussian,
)
from .symbol import (
    TStarSymbol,
    canonical_bracket,
    cartan_d,
    curvature_defect,
    generator_symbols,
    leibniz_defect,
    momentum_names,
    random_momenta,
    random_tstar_symbol,
    tstar_gens,
)

__all__ = [
    "TStarSymbol",
    "canonical_bracket",
    "cartan_d",
    "curvature_defect",
    "curvature_gaussian",
    "defect_table",
    "euler_characteristic",
    "euler_density",
    "euler_density_at",
    "generator_symbols",
    "leibniz_defect",
    "momentum_names",
    "pfaffian_top",
    "random_momenta",
    "random_tstar_symbol",
    "run_dcheck",
    "supertrace_density",
    "supertrace_gaussian",
    "tstar_gens",
]
