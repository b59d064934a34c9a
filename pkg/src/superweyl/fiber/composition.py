"""Composition f∘g := σ(f̂ĝ) of fiber symbols and the canonical odd Poisson bracket.

Three evaluation paths are kept side by side:

- ``BRUTE_FORCE``: quantize both factors, multiply the matrices, take the symbol.
- ``BIDIFFERENTIAL``: ``exp(iħ((1-r)∂_{θL}∂_{ξR} + r∂_{ξL}∂_{θR}))(f⊗g)``
  restricted to the diagonal, the right-hand derivative of each pair acting first.
- ``INTEGRAL``: the odd Gaussian integral formulas, available for r = 0 and r = 1.

Dependencies: superweyl.grassmann, superweyl.fiber.
"""

from __future__ import annotations

import logging

from ..constants import (
    EPS,
    TAU,
    THETA,
    THETA_LEFT,
    THETA_RIGHT,
    XI,
    XI_LEFT,
    XI_RIGHT,
    CompositionMethod,
)
from ..exceptions import GeneratorError, UnsupportedSymbolError
from ..grassmann import (
    GeneratorSet,
    Multivector,
    berezin_integral,
    exp_even_nilpotent,
    left_derivative,
    substitute_linear,
)
from .context import FiberContext
from .quantization import as_symbol, quantize, symbol_of

logger = logging.getLogger(__name__)


def _embed(
    f: Multivector, ctx: FiberContext, target: GeneratorSet, xi_to: str, theta_to: str
) -> Multivector:
    """f written over ``target`` with ξ -> ``xi_to`` and θ -> ``theta_to`` generators."""
    ring = ctx.ring
    images = {}
    for k in range(1, ctx.n + 1):
        images[f"{XI}{k}"] = Multivector.generator(target, f"{xi_to}{k}", ring)
        images[f"{THETA}{k}"] = Multivector.generator(target, f"{theta_to}{k}", ring)
    return substitute_linear(f, images, target)


def _shifted(
    f: Multivector, ctx: FiberContext, target: GeneratorSet, block: str, shift: str
) -> Multivector:
    """f over ``target`` with each generator of ``block`` replaced by itself plus ``shift``."""
    ring = ctx.ring
    images = {
        f"{block}{k}": Multivector.generator(target, f"{block}{k}", ring)
        + Multivector.generator(target, f"{shift}{k}", ring)
        for k in range(1, ctx.n + 1)
    }
    return substitute_linear(f, images, target)


def _compose_brute_force(f: Multivector, g: Multivector, ctx: FiberContext) -> Multivector:
    return symbol_of(quantize(f, ctx) @ quantize(g, ctx), ctx)


def _compose_bidifferential(f: Multivector, g: Multivector, ctx: FiberContext) -> Multivector:
    ring = ctx.ring
    gens = ctx.gens(XI_LEFT, THETA_LEFT, XI_RIGHT, THETA_RIGHT)
    r = ctx.r_scalar
    one_minus_r = ring.one() - r
    left = _embed(f, ctx, gens, XI_LEFT, THETA_LEFT)
    product = left * _embed(g, ctx, gens, XI_RIGHT, THETA_RIGHT)

    def apply_b(x: Multivector) -> Multivector:
        out = Multivector.zero(gens, ring)
        for k in range(1, ctx.n + 1):
            if not ring.is_zero(one_minus_r):
                inner = left_derivative(x, f"{XI_RIGHT}{k}")
                out = out + left_derivative(inner, f"{THETA_LEFT}{k}").scale(one_minus_r)
            if not ring.is_zero(r):
                inner = left_derivative(x, f"{THETA_RIGHT}{k}")
                out = out + left_derivative(inner, f"{XI_LEFT}{k}").scale(r)
        return out

    i_hbar = ring.imaginary_unit() * ctx.hbar(1)
    total = product
    term = product
    order = 0
    while True:
        order += 1
        term = apply_b(term)
        if term.is_zero:
            break
        total = total + term.scale(i_hbar**order * ring.factorial_inverse(order))
    target = ctx.symbol_gens
    diagonal = {}
    for k in range(1, ctx.n + 1):
        xi = Multivector.generator(target, f"{XI}{k}", ring)
        theta = Multivector.generator(target, f"{THETA}{k}", ring)
        diagonal[f"{XI_LEFT}{k}"] = xi
        diagonal[f"{XI_RIGHT}{k}"] = xi
        diagonal[f"{THETA_LEFT}{k}"] = theta
        diagonal[f"{THETA_RIGHT}{k}"] = theta
    return substitute_linear(total, diagonal, target)


def _compose_integral(f: Multivector, g: Multivector, ctx: FiberContext) -> Multivector:
    ring = ctx.ring
    if ctx.r not in (0, 1):
        raise UnsupportedSymbolError(f"integral composition needs r = 0 or r = 1, got r = {ctx.r}")
    gens = ctx.gens(XI, THETA, EPS, TAU)
    f4 = _embed(f, ctx, gens, XI, THETA)
    g4 = _embed(g, ctx, gens, XI, THETA)
    pairing = Multivector.zero(gens, ring)
    for k in range(1, ctx.n + 1):
        eps = Multivector.generator(gens, f"{EPS}{k}", ring)
        pairing = pairing + eps * Multivector.generator(gens, f"{TAU}{k}", ring)
    if ctx.r == 0:
        phase = exp_even_nilpotent(pairing.scale(-ctx.i_over_hbar()))
        integrand = phase * _shifted(f4, ctx, gens, THETA, TAU) * _shifted(g4, ctx, gens, XI, EPS)
        prefactor = ctx.minus_i_hbar(ctx.n)
    else:
        phase = exp_even_nilpotent(pairing.scale(ctx.i_over_hbar()))
        integrand = phase * _shifted(f4, ctx, gens, XI, EPS) * _shifted(g4, ctx, gens, THETA, TAU)
        prefactor = (ring.imaginary_unit() * ctx.hbar(1)) ** ctx.n
    integrated = berezin_integral(integrand, ctx.measure(EPS, TAU))
    return integrated.reexpress(ctx.symbol_gens).scale(prefactor)


_METHODS = {
    CompositionMethod.BRUTE_FORCE: _compose_brute_force,
    CompositionMethod.BIDIFFERENTIAL: _compose_bidifferential,
    CompositionMethod.INTEGRAL: _compose_integral,
}


def compose_symbols(
    f: Multivector,
    g: Multivector,
    ctx: FiberContext,
    method: CompositionMethod = CompositionMethod.BIDIFFERENTIAL,
) -> Multivector:
    """Symbol of the operator product f̂ĝ.

    :param method: Evaluation path; all paths return the same symbol.
    :raises UnsupportedSymbolError: For the integral path with 0 < r < 1.
    """
    f = as_symbol(f, ctx)
    g = as_symbol(g, ctx)
    return _METHODS[CompositionMethod(method)](f, g, ctx)


def _fiber_dimension(gens: GeneratorSet) -> int:
    n = len(gens) // 2
    expected = tuple(f"{XI}{k}" for k in range(1, n + 1)) + tuple(
        f"{THETA}{k}" for k in range(1, n + 1)
    )
    if gens.names != expected:
        raise GeneratorError(f"fiber symbols live over (ξ, θ), got {gens}")
    return n


def poisson_bracket_fiber(f: Multivector, g: Multivector) -> Multivector:
    """Canonical odd bracket of fiber symbols.

    ``{f,g} = (-1)^{f̃+1} Σ_a (∂_{θ_a}f ∂_{ξ^a}g + ∂_{ξ^a}f ∂_{θ_a}g)``.

    Mixed-parity ``f`` is split into homogeneous parts; {θ_a, ξ^b} = δ_a^b.
    """
    n = _fiber_dimension(f.gens)
    result = Multivector.zero(f.gens, f.ring)
    for bit, part in ((0, f.even_part()), (1, f.odd_part())):
        if part.is_zero:
            continue
        total = Multivector.zero(f.gens, f.ring)
        for k in range(1, n + 1):
            xi, theta = f"{XI}{k}", f"{THETA}{k}"
            total = total + left_derivative(part, theta) * left_derivative(g, xi)
            total = total + left_derivative(part, xi) * left_derivative(g, theta)
        result = result + (total if bit else -total)
    return result
