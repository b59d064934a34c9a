"""Graded traces of fiber operators, on the matrix side and from symbols.

Matrix side: ``tr_S A = tr(SA)`` for a grading involution ``S``. Symbol side:

- ``str A  = (-iħ)^n ∫D(ξ,θ) σA`` (independent of r),
- ``tr_1 A = (-iħ)^n ∫D(ξ,θ) e^{-(2i/ħ)ξθ} σA((2r-1)ξ, θ)``,
- ``tr_* A = C ∫Dξ/√g σA(ξ, tħ g_ab ξ^b)`` for even n,
- at r = 1/2, ``tr_1 A = 2^n (σA)(0, 0)``.

Dependencies: superweyl.grassmann, superweyl.fiber.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from ..constants import THETA, XI, GradingKind
from ..exceptions import FiberContextError, InvolutionError
from ..grassmann import Multivector, berezin_integral, exp_even_nilpotent, substitute_linear
from .context import FiberContext
from .operator import FiberOperator, identity_operator, parity_operator
from .quantization import as_symbol, symbol_of
from .star import check_involution, hodge_star


def grading_operator(kind: GradingKind, ctx: FiberContext) -> FiberOperator:
    """Parity operator, identity, or the involutive star."""
    kind = GradingKind(kind)
    if kind is GradingKind.PARITY:
        return parity_operator(ctx)
    if kind is GradingKind.IDENTITY:
        return identity_operator(ctx)
    return hodge_star(ctx, require_involution=True)


def graded_trace(A: FiberOperator, S: FiberOperator) -> Any:
    """tr(SA) for a grading involution S.

    :raises InvolutionError: If S² != 1.
    """
    check_involution(S)
    return (S @ A).trace()


def supertrace_from_symbol(sigma: Multivector, ctx: FiberContext) -> Any:
    """str A from σA."""
    sigma = as_symbol(sigma, ctx)
    integrated = berezin_integral(sigma, ctx.measure(XI, THETA))
    return integrated.scalar_part() * ctx.minus_i_hbar(ctx.n)


def trace_from_symbol(sigma: Multivector, ctx: FiberContext) -> Any:
    """tr_1 A from σA."""
    sigma = as_symbol(sigma, ctx)
    ring = ctx.ring
    gens = ctx.symbol_gens
    scale = ring.coerce(2 * ctx.r - 1)
    images = {
        f"{XI}{k}": Multivector.generator(gens, f"{XI}{k}", ring).scale(scale)
        for k in range(1, ctx.n + 1)
    }
    rescaled = substitute_linear(sigma, images, gens)
    exponent = Multivector.zero(gens, ring)
    for k in range(1, ctx.n + 1):
        exponent = exponent + Multivector.generator(gens, f"{XI}{k}", ring) * Multivector.generator(
            gens, f"{THETA}{k}", ring
        )
    two_i_over_hbar = ctx.i_over_hbar() * ring.coerce(2)
    weight = exp_even_nilpotent(exponent.scale(-two_i_over_hbar))
    integrated = berezin_integral(weight * rescaled, ctx.measure(XI, THETA))
    return integrated.scalar_part() * ctx.minus_i_hbar(ctx.n)


def star_trace_from_symbol(sigma: Multivector, ctx: FiberContext) -> Any:
    """tr_* A = tr(*A) from σA, with θ_a replaced by tħ g_ab ξ^b.

    :raises InvolutionError: For odd n.
    """
    if ctx.n % 2:
        raise InvolutionError(f"the star trace needs even n, got n = {ctx.n}")
    sigma = as_symbol(sigma, ctx)
    ring = ctx.ring
    target = ctx.form_gens
    t_hbar = ctx.t_scalar * ctx.hbar(1)
    images = {}
    for a in range(ctx.n):
        image = Multivector.zero(target, ring)
        for b in range(ctx.n):
            entry = ctx.metric_entry(a, b)
            if not ring.is_zero(entry):
                image = image + Multivector.generator(target, f"{XI}{b + 1}", ring).scale(
                    t_hbar * entry
                )
        images[f"{THETA}{a + 1}"] = image
    restricted = substitute_linear(sigma, images, target)
    integrated = berezin_integral(restricted, ctx.measure(XI))
    return integrated.scalar_part() * ctx.star_c / ctx.sqrt_g


def weyl_trace(A: FiberOperator, ctx: FiberContext) -> Any:
    """tr_1 A as 2^n (σA)(0,0), valid for the Weyl ordering r = 1/2.

    :raises FiberContextError: If r != 1/2.
    """
    if ctx.r != Fraction(1, 2):
        raise FiberContextError(f"the Weyl trace formula needs r = 1/2, got r = {ctx.r}")
    return symbol_of(A, ctx).scalar_part() * ctx.ring.coerce(1 << ctx.n)


def trace_report(A: FiberOperator, ctx: FiberContext) -> dict[str, tuple[Any, Any]]:
    """Matrix-side and symbol-side values of every applicable trace.

    :return: Map from trace name to (matrix value, symbol value).
    """
    sigma = symbol_of(A, ctx)
    values: dict[str, tuple[Any, Any]] = {
        "str": (graded_trace(A, parity_operator(ctx)), supertrace_from_symbol(sigma, ctx)),
        "tr1": (A.trace(), trace_from_symbol(sigma, ctx)),
    }
    if ctx.n % 2 == 0:
        star = grading_operator(GradingKind.STAR, ctx)
        values["tr*"] = (graded_trace(A, star), star_trace_from_symbol(sigma, ctx))
    if ctx.r == Fraction(1, 2):
        values["weyl"] = (A.trace(), weyl_trace(A, ctx))
    return values
