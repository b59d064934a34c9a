"""Integral kernels of fiber operators.

An operator ``A`` of parity ``Ã`` acts as
``(Au)(ξ) = (-1)^{nÃ} ∫Dη/√g k(ξ,η) u(η)``, and ``k = (-1)^n (A δ_η)(ξ)`` with
``δ_η(ξ) = √g ∏_{k=n..1}(ξ^k - η^k)``. Kernels are Multivectors over ``(ξ, η)``; the
kernel of a homogeneous operator has parity ``Ã + n``.

Dependencies: superweyl.grassmann, superweyl.fiber.
"""

from __future__ import annotations

import logging
from typing import Any

from ..constants import ETA, XI, XI_MID, Parity
from ..grassmann import Multivector, berezin_integral, substitute_linear
from .context import FiberContext
from .operator import FiberOperator

logger = logging.getLogger(__name__)


def delta_kernel(ctx: FiberContext, sign: int = -1) -> Multivector:
    """√g ∏_{k=n..1}(ξ^k + sign·η^k) over (ξ, η); ``sign=-1`` gives δ_η(ξ)."""
    gens = ctx.kernel_gens
    ring = ctx.ring
    result = Multivector.scalar(gens, ctx.sqrt_g, ring)
    for k in range(ctx.n, 0, -1):
        factor = Multivector.generator(gens, f"{XI}{k}", ring) + Multivector.generator(
            gens, f"{ETA}{k}", ring
        ).scale(sign)
        result = result * factor
    return result


def apply_on_block(A: FiberOperator, element: Multivector) -> Multivector:
    """Let ``A`` act on the leading block of ``n`` generators of ``element``.

    Every term is read as ``e_I(block) · rest`` and ``e_I`` is replaced by ``A e_I``.
    """
    block_mask = (1 << A.ctx.n) - 1
    ring = element.ring
    matrix = A.matrix
    out: dict[int, Any] = {}
    for mask, value in element.items():
        column = mask & block_mask
        rest = mask & ~block_mask
        for row in range(A.size):
            entry = matrix[row, column]
            if ring.is_zero(entry):
                continue
            target = row | rest
            product = entry * value
            out[target] = out[target] + product if target in out else product
    return Multivector(element.gens, out, ring)


def kernel_of(A: FiberOperator, ctx: FiberContext) -> Multivector:
    """Kernel k_A(ξ,η) = (-1)^n (A δ_η)(ξ)."""
    delta = delta_kernel(ctx)
    kernel = apply_on_block(A, delta)
    return -kernel if ctx.n % 2 else kernel


def _kernel_sign(ctx: FiberContext, kernel_parity: int) -> int:
    operator_parity = (kernel_parity + ctx.n) & 1
    return -1 if (ctx.n * operator_parity) & 1 else 1


def op_from_kernel(k: Multivector, ctx: FiberContext) -> FiberOperator:
    """Operator with kernel k; the inverse of :func:`kernel_of`."""
    gens = ctx.kernel_gens
    ring = ctx.ring
    measure = ctx.measure(ETA)
    inverse_root = ring.one() / ctx.sqrt_g
    parts = [(0, k.even_part()), (1, k.odd_part())]
    result = FiberOperator.zero(ctx)
    for bit, part in parts:
        if part.is_zero:
            continue
        sign = _kernel_sign(ctx, bit) * inverse_root

        def column(u: Multivector, part: Multivector = part, sign: Any = sign) -> Multivector:
            lifted = Multivector(gens, {mask << ctx.n: c for mask, c in u.items()}, ring)
            integrated = berezin_integral(part * lifted, measure)
            return Multivector(u.gens, dict(integrated.items()), ring).scale(sign)

        result = result + FiberOperator.from_function(ctx, column)
    logger.debug("operator rebuilt from kernel with %d terms (n=%d)", len(k), ctx.n)
    return result


def kernel_compose(
    kA: Multivector, kB: Multivector, parity_of_A: Parity | None, ctx: FiberContext
) -> Multivector:
    """Kernel of AB: (-1)^{nÃ} ∫Dζ/√g k_A(ξ,ζ) k_B(ζ,η).

    :param parity_of_A: Parity of A; None or MIXED splits ``kA`` into homogeneous parts.
    """
    n = ctx.n
    ring = ctx.ring
    gens3 = ctx.gens(XI, XI_MID, ETA)
    left_images = {
        f"{ETA}{k}": Multivector.generator(gens3, f"{XI_MID}{k}", ring) for k in range(1, n + 1)
    }
    right_images = {
        f"{XI}{k}": Multivector.generator(gens3, f"{XI_MID}{k}", ring) for k in range(1, n + 1)
    }
    kB3 = substitute_linear(kB, right_images, gens3)
    inverse_root = ring.one() / ctx.sqrt_g
    if parity_of_A in (Parity.EVEN, Parity.ODD):
        operator_bit = 1 if parity_of_A is Parity.ODD else 0
        pieces = [(operator_bit, kA)]
    else:
        split = ((0, kA.even_part()), (1, kA.odd_part()))
        pieces = [((bit + n) & 1, part) for bit, part in split]
    result = Multivector.zero(ctx.kernel_gens, ring)
    for operator_bit, piece in pieces:
        if piece.is_zero:
            continue
        kA3 = substitute_linear(piece, left_images, gens3)
        integrated = berezin_integral(kA3 * kB3, ctx.measure(XI_MID))
        sign = -1 if (n * operator_bit) & 1 else 1
        result = result + integrated.reexpress(ctx.kernel_gens).scale(inverse_root * sign)
    return result
