"""Quantization and symbol maps between fiber symbols f(ξ,θ) and operators on Λ.

``quantize`` realizes the operator

    (f̂u)(ξ) = (-iħ)^n ∫D(η,θ) e^{(i/ħ)(ξ-η)θ} f((1-r)ξ + rη, θ) u(η)

and ``symbol_of`` inverts it through the operator kernel. Both maps are linear; the
images of basis monomials and of matrix units are cached per context.

Dependencies: functools, numpy, sympy, superweyl.grassmann, superweyl.fiber.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from functools import lru_cache
from typing import Any

import numpy as np
import sympy

from ..constants import EPS, ETA, THETA, XI
from ..exceptions import FiberContextError, GeneratorError, SingularMatrixError
from ..grassmann import (
    GeneratorSet,
    Multivector,
    berezin_integral,
    exp_even_nilpotent,
    substitute_linear,
)
from ..scalars import EXACT
from .context import FiberContext, exact_number
from .kernels import apply_on_block, kernel_of
from .operator import FiberOperator

logger = logging.getLogger(__name__)


def _phase(ctx: FiberContext, gens: GeneratorSet, left: str, right: str, odd: str) -> Multivector:
    """exp((i/ħ) Σ_a (left^a - right^a) odd_a); an empty ``right`` drops that term."""
    ring = ctx.ring
    exponent = Multivector.zero(gens, ring)
    for k in range(1, ctx.n + 1):
        linear = Multivector.generator(gens, f"{left}{k}", ring)
        if right:
            linear = linear - Multivector.generator(gens, f"{right}{k}", ring)
        exponent = exponent + linear * Multivector.generator(gens, f"{odd}{k}", ring)
    return exp_even_nilpotent(exponent.scale(ctx.i_over_hbar()))


def as_symbol(f: Multivector, ctx: FiberContext) -> Multivector:
    """``f`` written over (ξ, θ) of the context.

    :raises GeneratorError: If ``f`` uses generators outside (ξ, θ).
    """
    if f.ring is not ctx.ring:
        raise GeneratorError(f"symbol over {f.ring} used with a {ctx.ring} context")
    return f.reexpress(ctx.symbol_gens)


@lru_cache(maxsize=4096)
def _quantize_monomial(ctx: FiberContext, mask: int) -> FiberOperator:
    n = ctx.n
    ring = ctx.ring
    gens = ctx.gens(XI, ETA, THETA)
    r = ctx.r_scalar
    images = {
        f"{XI}{k}": Multivector.generator(gens, f"{XI}{k}", ring).scale(ring.one() - r)
        + Multivector.generator(gens, f"{ETA}{k}", ring).scale(r)
        for k in range(1, n + 1)
    }
    monomial = Multivector._raw(ctx.symbol_gens, ring, {mask: ring.one()})
    integrand = _phase(ctx, gens, XI, ETA, THETA) * substitute_linear(monomial, images, gens)
    measure = ctx.measure(ETA, THETA)
    prefactor = ctx.minus_i_hbar(n)
    logger.debug("quantizing basis monomial %#x (n=%d, r=%s)", mask, n, ctx.r)

    def column(u: Multivector) -> Multivector:
        lifted = Multivector._raw(gens, ring, {m << n: c for m, c in u.items()})
        integrated = berezin_integral(integrand * lifted, measure)
        return Multivector(u.gens, dict(integrated.items()), ring).scale(prefactor)

    return FiberOperator.from_function(ctx, column)


def quantize(f: Multivector, ctx: FiberContext) -> FiberOperator:
    """Operator f̂ of a fiber symbol; linear in ``f`` and ``quantize(1) = id``."""
    f = as_symbol(f, ctx)
    result = FiberOperator.zero(ctx)
    for mask, value in f.items():
        result = result + _quantize_monomial(ctx, mask).scale(value)
    return result


@lru_cache(maxsize=32768)
def _unit_symbol(ctx: FiberContext, row: int, column: int) -> Multivector:
    n = ctx.n
    ring = ctx.ring
    gens = ctx.gens(XI, EPS, THETA)
    r = ctx.r_scalar
    kernel = kernel_of(FiberOperator.unit(ctx, row, column), ctx)
    images = {}
    for k in range(1, n + 1):
        xi = Multivector.generator(gens, f"{XI}{k}", ring)
        eps = Multivector.generator(gens, f"{EPS}{k}", ring)
        images[f"{XI}{k}"] = xi - eps.scale(r)
        images[f"{ETA}{k}"] = xi + eps.scale(ring.one() - r)
    shifted = substitute_linear(kernel, images, gens)
    integrated = berezin_integral(_phase(ctx, gens, EPS, "", THETA) * shifted, ctx.measure(EPS))
    parity = (row.bit_count() + column.bit_count()) & 1
    factor = ring.one() / ctx.sqrt_g
    if (n * parity) & 1:
        factor = -factor
    return integrated.reexpress(ctx.symbol_gens).scale(factor)


def symbol_of(A: FiberOperator, ctx: FiberContext) -> Multivector:
    """Symbol σ(A) over (ξ, θ), the inverse of :func:`quantize`."""
    result = Multivector.zero(ctx.symbol_gens, ctx.ring)
    for row, column, value in A.entries():
        result = result + _unit_symbol(ctx, row, column).scale(value)
    return result


def symbol_by_exponential_test(A: FiberOperator, ctx: FiberContext) -> Multivector:
    """Symbol at r = 0 as (A_η e^{(i/ħ)(η-ξ)θ})|_{η=ξ}.

    :raises FiberContextError: If the context has r != 0.
    """
    if ctx.r != 0:
        raise FiberContextError(f"the exponential test computes the r = 0 symbol, got r = {ctx.r}")
    ring = ctx.ring
    gens = ctx.gens(ETA, XI, THETA)
    acted = apply_on_block(A, _phase(ctx, gens, ETA, XI, THETA))
    target = ctx.symbol_gens
    images = {
        f"{ETA}{k}": Multivector.generator(target, f"{XI}{k}", ring) for k in range(1, ctx.n + 1)
    }
    return substitute_linear(acted, images, target)


def _square_matrix(T: Sequence[Sequence[Any]], ctx: FiberContext) -> list[list[Any]]:
    if len(T) != ctx.n or any(len(row) != ctx.n for row in T):
        raise SingularMatrixError(f"transformation must be {ctx.n}x{ctx.n}")
    return [list(row) for row in T]


def matrix_inverse(T: Sequence[Sequence[Any]], ctx: FiberContext) -> list[list[Any]]:
    """Inverse of a square matrix as ring scalars.

    :raises SingularMatrixError: If ``T`` is singular.
    """
    rows = _square_matrix(T, ctx)
    ring = ctx.ring
    if ring is EXACT:
        matrix = sympy.Matrix(
            [[sympy.Rational(str(exact_number(v, "T entry"))) for v in row] for row in rows]
        )
        if matrix.det() == 0:
            raise SingularMatrixError("transformation matrix is singular")
        inverse = matrix.inv()
        return [
            [ring.coerce(exact_number(str(inverse[a, b]), "T")) for b in range(ctx.n)]
            for a in range(ctx.n)
        ]
    array = np.array(rows, dtype=complex)
    try:
        inverse_array = np.linalg.inv(array)
    except np.linalg.LinAlgError:
        raise SingularMatrixError("transformation matrix is singular") from None
    return [[ring.coerce(complex(v)) for v in row] for row in inverse_array]


def _ring_matrix(T: Sequence[Sequence[Any]], ctx: FiberContext) -> list[list[Any]]:
    rows = _square_matrix(T, ctx)
    if ctx.ring is EXACT:
        return [[ctx.ring.coerce(exact_number(v, "T entry")) for v in row] for row in rows]
    return [[ctx.ring.coerce(v) for v in row] for row in rows]


def _xi_images(T: list[list[Any]], gens: GeneratorSet, ctx: FiberContext) -> dict[str, Multivector]:
    ring = ctx.ring
    images = {}
    for a in range(ctx.n):
        image = Multivector.zero(gens, ring)
        for b in range(ctx.n):
            image = image + Multivector.generator(gens, f"{XI}{b + 1}", ring).scale(T[a][b])
        images[f"{XI}{a + 1}"] = image
    return images


def spin_conjugate(f: Multivector, T: Sequence[Sequence[Any]], ctx: FiberContext) -> Multivector:
    """(T*f)(ξ,θ) = f(Tξ, T⁻¹θ): ξ^a -> T^a_b ξ^b, θ_a -> θ_b (T⁻¹)^b_a.

    :raises SingularMatrixError: If ``T`` is singular.
    """
    f = as_symbol(f, ctx)
    gens = ctx.symbol_gens
    ring = ctx.ring
    matrix = _ring_matrix(T, ctx)
    inverse = matrix_inverse(T, ctx)
    images = _xi_images(matrix, gens, ctx)
    for a in range(ctx.n):
        image = Multivector.zero(gens, ring)
        for b in range(ctx.n):
            theta = Multivector.generator(gens, f"{THETA}{b + 1}", ring)
            image = image + theta.scale(inverse[b][a])
        images[f"{THETA}{a + 1}"] = image
    return substitute_linear(f, images, gens)


def pullback_operator(T: Sequence[Sequence[Any]], ctx: FiberContext) -> FiberOperator:
    """Pull-back (T*u)(ξ) = u(Tξ) on Λ.

    :raises SingularMatrixError: If ``T`` is singular.
    """
    matrix_inverse(T, ctx)
    images = _xi_images(_ring_matrix(T, ctx), ctx.form_gens, ctx)
    return FiberOperator.from_function(ctx, lambda u: substitute_linear(u, images))
