"""Operators on Λ(R^n) as 2^n x 2^n matrices over a scalar ring.

Row and column ``i`` correspond to the ascending monomial with bitmask ``i`` over
ξ¹..ξⁿ; column ``j`` holds the image of basis monomial ``j``.

Dependencies: numpy, superweyl.grassmann, superweyl.fiber.context.
"""

from __future__ import annotations

from collections.abc import Callable
from typing import Any

import numpy as np

from ..constants import Parity
from ..exceptions import FiberContextError
from ..grassmann import Multivector, left_derivative
from .context import FiberContext


class FiberOperator:
    """Immutable endomorphism of Λ given by its matrix."""

    __slots__ = ("_ctx", "_matrix")

    def __init__(self, ctx: FiberContext, matrix: np.ndarray) -> None:
        size = 1 << ctx.n
        if matrix.shape != (size, size):
            raise FiberContextError(f"operator matrix must be {size}x{size}, got {matrix.shape}")
        self._ctx = ctx
        self._matrix = matrix
        self._matrix.flags.writeable = False

    @classmethod
    def zero(cls, ctx: FiberContext) -> FiberOperator:
        size = 1 << ctx.n
        matrix = np.empty((size, size), dtype=object)
        matrix.fill(ctx.ring.zero())
        return cls(ctx, matrix)

    @classmethod
    def from_function(
        cls, ctx: FiberContext, fn: Callable[[Multivector], Multivector]
    ) -> FiberOperator:
        """Matrix of a linear map given by its action on Multivectors over ξ."""
        gens = ctx.form_gens
        ring = ctx.ring
        size = 1 << ctx.n
        matrix = np.empty((size, size), dtype=object)
        matrix.fill(ring.zero())
        for j in range(size):
            image = fn(Multivector._raw(gens, ring, {j: ring.one()}))
            for i, value in image.items():
                matrix[i, j] = value
        return cls(ctx, matrix)

    @classmethod
    def unit(cls, ctx: FiberContext, i: int, j: int) -> FiberOperator:
        """Matrix unit E_ij."""
        op = cls.zero(ctx)
        matrix = op._matrix.copy()
        matrix[i, j] = ctx.ring.one()
        return cls(ctx, matrix)

    @property
    def ctx(self) -> FiberContext:
        return self._ctx

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def size(self) -> int:
        return int(self._matrix.shape[0])

    def entries(self) -> list[tuple[int, int, Any]]:
        """Nonzero entries as (row, column, value)."""
        is_zero = self._ctx.ring.is_zero
        return [
            (i, j, self._matrix[i, j])
            for i in range(self.size)
            for j in range(self.size)
            if not is_zero(self._matrix[i, j])
        ]

    def apply(self, u: Multivector) -> Multivector:
        """Action on an element of Λ written over ξ¹..ξⁿ."""
        ring = self._ctx.ring
        out: dict[int, Any] = {}
        for j, value in u.items():
            column = self._matrix[:, j]
            for i in range(self.size):
                if not ring.is_zero(column[i]):
                    out[i] = out[i] + column[i] * value if i in out else column[i] * value
        return Multivector(u.gens, out, ring)

    def parity(self) -> Parity:
        degrees = {(i.bit_count() + j.bit_count()) & 1 for i, j, _ in self.entries()}
        if degrees == {1}:
            return Parity.ODD
        if len(degrees) == 2:
            return Parity.MIXED
        return Parity.EVEN

    def _masked(self, odd: bool) -> FiberOperator:
        matrix = self._matrix.copy()
        zero = self._ctx.ring.zero()
        for i in range(self.size):
            for j in range(self.size):
                if bool((i.bit_count() + j.bit_count()) & 1) != odd:
                    matrix[i, j] = zero
        return FiberOperator(self._ctx, matrix)

    def even_part(self) -> FiberOperator:
        return self._masked(odd=False)

    def odd_part(self) -> FiberOperator:
        return self._masked(odd=True)

    def homogeneous_parts(self) -> list[tuple[int, FiberOperator]]:
        """Nonzero (parity bit, part) pairs."""
        parts = []
        for bit, part in ((0, self.even_part()), (1, self.odd_part())):
            if not part.is_zero:
                parts.append((bit, part))
        return parts

    @property
    def is_zero(self) -> bool:
        return not self.entries()

    def _check(self, other: FiberOperator) -> None:
        if other._ctx.n != self._ctx.n or other._ctx.ring is not self._ctx.ring:
            raise FiberContextError("operators live on different fibers")

    def __add__(self, other: FiberOperator) -> FiberOperator:
        self._check(other)
        return FiberOperator(self._ctx, self._matrix + other._matrix)

    def __sub__(self, other: FiberOperator) -> FiberOperator:
        self._check(other)
        return FiberOperator(self._ctx, self._matrix - other._matrix)

    def __neg__(self) -> FiberOperator:
        return FiberOperator(self._ctx, -self._matrix)

    def scale(self, factor: Any) -> FiberOperator:
        factor = self._ctx.ring.coerce(factor)
        return FiberOperator(self._ctx, self._matrix * factor)

    def __matmul__(self, other: FiberOperator) -> FiberOperator:
        self._check(other)
        return FiberOperator(self._ctx, self._matrix.dot(other._matrix))

    def trace(self) -> Any:
        total = self._ctx.ring.zero()
        for i in range(self.size):
            total = total + self._matrix[i, i]
        return total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiberOperator):
            return NotImplemented
        if other._ctx.n != self._ctx.n:
            return False
        is_zero = self._ctx.ring.is_zero
        difference = self._matrix - other._matrix
        return all(is_zero(value) for value in difference.flat)

    __hash__ = None  # type: ignore[assignment]

    def isclose(self, other: FiberOperator, rel_tol: float = 1e-10, abs_tol: float = 1e-12) -> bool:
        self._check(other)
        ring = self._ctx.ring
        return all(
            ring.isclose(a, b, rel_tol=rel_tol, abs_tol=abs_tol)
            for a, b in zip(self._matrix.flat, other._matrix.flat, strict=True)
        )

    def __repr__(self) -> str:
        nonzero = len(self.entries())
        return f"FiberOperator(n={self._ctx.n}, parity={self.parity()}, nonzero={nonzero})"


def identity_operator(ctx: FiberContext) -> FiberOperator:
    return FiberOperator.from_function(ctx, lambda u: u)


def parity_operator(ctx: FiberContext) -> FiberOperator:
    """(-1)^P: +1 on even monomials, -1 on odd ones."""
    return FiberOperator.from_function(ctx, lambda u: u.even_part() - u.odd_part())


def generator_operators(ctx: FiberContext) -> tuple[list[FiberOperator], list[FiberOperator]]:
    """Left multiplications ξ̂^k and left derivatives ∂̂_k, k = 1..n."""
    gens = ctx.form_gens
    ring = ctx.ring
    multiplications = []
    derivatives = []
    for name in gens:
        xi = Multivector.generator(gens, name, ring)
        multiplications.append(FiberOperator.from_function(ctx, lambda u, g=xi: g * u))
        derivatives.append(
            FiberOperator.from_function(ctx, lambda u, k=name: left_derivative(u, k))
        )
    return multiplications, derivatives


def supercommutator(A: FiberOperator, B: FiberOperator) -> FiberOperator:
    """[A, B] = AB - (-1)^{ÃB̃} BA, extended bilinearly over parity parts."""
    result = FiberOperator.zero(A.ctx)
    for pa, a in A.homogeneous_parts():
        for pb, b in B.homogeneous_parts():
            swapped = b @ a
            term = a @ b - swapped if not pa & pb else a @ b + swapped
            result = result + term
    return result
