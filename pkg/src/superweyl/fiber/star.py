"""Hodge star on Λ(R^n) as an odd Gaussian integral.

``*u(ξ) = C ∫Dη/√g e^{-it g_ab ξ^a η^b} u(η)``. For ``n = 2m`` and ``C = t^{-m}`` the star
is an involution; in general ``*⁻¹ = C⁻²(it)⁻ⁿ(-1)^{n(n-1)/2} *``.

Dependencies: superweyl.grassmann, superweyl.fiber.
"""

from __future__ import annotations

from ..constants import ETA, XI
from ..exceptions import InvolutionError
from ..grassmann import Multivector, berezin_integral, exp_even_nilpotent
from .context import FiberContext
from .operator import FiberOperator, identity_operator


def hodge_star(ctx: FiberContext, *, require_involution: bool = False) -> FiberOperator:
    """Matrix of the star operator.

    :param require_involution: Insist on the normalization that makes ``*² = 1``.
    :raises InvolutionError: If ``require_involution`` is set but ``n`` is odd or
        ``C != t^{-m}``.
    """
    ring = ctx.ring
    n = ctx.n
    if require_involution:
        if n % 2:
            raise InvolutionError(f"the star is an involution only for even n, got n = {n}")
        if ctx.star_c != ctx.t_scalar ** (-ctx.m):
            raise InvolutionError(f"involution needs C = t^-{ctx.m}, got C = {ctx.star_c}")
    gens = ctx.kernel_gens
    pairing = Multivector.zero(gens, ring)
    for a in range(n):
        for b in range(n):
            entry = ctx.metric_entry(a, b)
            if ring.is_zero(entry):
                continue
            xi = Multivector.generator(gens, f"{XI}{a + 1}", ring)
            eta = Multivector.generator(gens, f"{ETA}{b + 1}", ring)
            pairing = pairing + (xi * eta).scale(entry)
    minus_it = -(ring.imaginary_unit() * ctx.t_scalar)
    kernel = exp_even_nilpotent(pairing.scale(minus_it))
    factor = ctx.star_c / ctx.sqrt_g
    measure = ctx.measure(ETA)

    def column(u: Multivector) -> Multivector:
        lifted = Multivector._raw(gens, ring, {m << n: c for m, c in u.items()})
        integrated = berezin_integral(kernel * lifted, measure)
        return Multivector(u.gens, dict(integrated.items()), ring).scale(factor)

    return FiberOperator.from_function(ctx, column)


def star_inverse(ctx: FiberContext) -> FiberOperator:
    """C⁻²(it)⁻ⁿ(-1)^{n(n-1)/2} *, the inverse of :func:`hodge_star`."""
    ring = ctx.ring
    n = ctx.n
    it = ring.imaginary_unit() * ctx.t_scalar
    factor = ctx.star_c ** (-2) * it ** (-n)
    if (n * (n - 1) // 2) % 2:
        factor = -factor
    return hodge_star(ctx).scale(factor)


def check_involution(S: FiberOperator) -> None:
    """Require S² = 1.

    :raises InvolutionError: Otherwise.
    """
    if not (S @ S).isclose(identity_operator(S.ctx)):
        raise InvolutionError("grading operator does not square to the identity")
