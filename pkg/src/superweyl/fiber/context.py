"""Fiber parameters: dimension, metric, ordering parameter, star constants, Planck mode.

Dependencies: fractions, math, numpy, pydantic, sympy, superweyl.grassmann.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any

import numpy as np
import sympy
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, ValidationError, field_validator

from ..constants import (
    CONTRAGREDIENT_PREFIXES,
    ETA,
    MAX_FIBER_DIM,
    THETA,
    XI,
    HbarMode,
)
from ..exceptions import FiberContextError
from ..grassmann import GeneratorSet
from ..scalars import EXACT, NUMERIC, ScalarRing


def exact_number(value: Any, what: str) -> Fraction:
    """Read an int, Fraction or ``"p/q"`` string as a Fraction.

    :raises FiberContextError: For floats, bools and unreadable text.
    """
    if isinstance(value, bool):
        raise FiberContextError(f"{what} must be a number, got {value!r}")
    if isinstance(value, Fraction | int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError:
            raise FiberContextError(f"{what}: cannot read {value!r} as a rational") from None
    raise FiberContextError(f"{what} must be exact (int, Fraction or 'p/q'), got {value!r}")


def _exact_sqrt(value: Fraction) -> Fraction | None:
    if value < 0:
        return None
    num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None


class FiberContext(BaseModel):
    """Immutable parameters of the calculus on Λ(R^n).

    ``metric`` defaults to the identity; ``star_constant`` defaults to ``t**-m`` for
    ``n = 2m`` and to 1 for odd ``n``. With the exact ring every number must be rational
    and ``det g`` must be a rational square.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(..., ge=1, le=MAX_FIBER_DIM)
    r: Fraction = Fraction(0)
    metric: tuple[tuple[Any, ...], ...] | None = None
    t: Any = Fraction(1)
    star_constant: Any = None
    ring: ScalarRing = EXACT
    hbar_mode: HbarMode = HbarMode.FORMAL
    hbar_value: Any = Fraction(1)

    _g: tuple[tuple[Any, ...], ...] = PrivateAttr(default=())
    _sqrt_g: Any = PrivateAttr(default=None)

    def __init__(self, **data: Any) -> None:
        try:
            super().__init__(**data)
        except ValidationError as exc:
            raise FiberContextError(str(exc)) from exc
        self._validate_numbers()

    @field_validator("r", mode="before")
    @classmethod
    def _rational_r(cls, value: Any) -> Fraction:
        r = exact_number(value, "r")
        if not 0 <= r <= 1:
            raise FiberContextError(f"r must lie in [0, 1], got {r}")
        return r

    @field_validator("metric", mode="before")
    @classmethod
    def _tuple_metric(cls, value: Any) -> Any:
        if value is None:
            return None
        return tuple(tuple(row) for row in value)

    def _number(self, value: Any, what: str) -> Any:
        return self.ring.coerce(exact_number(value, what) if self.ring is EXACT else value)

    def _validate_numbers(self) -> None:
        if self.ring not in (EXACT, NUMERIC):
            raise FiberContextError(
                f"fiber calculus runs over the exact or numeric ring, not {self.ring}"
            )
        if self.ring is EXACT:
            exact_number(self.t, "t")
            if self.star_constant is not None:
                exact_number(self.star_constant, "star_constant")
            if self.hbar_mode is HbarMode.NUMERIC:
                exact_number(self.hbar_value, "hbar_value")
        if self.t == 0:
            raise FiberContextError("star parameter t must be nonzero")
        n = self.n
        if self.metric is None:
            one, zero = self.ring.one(), self.ring.zero()
            self._g = tuple(tuple(one if a == b else zero for b in range(n)) for a in range(n))
            self._sqrt_g = one
            return
        if len(self.metric) != n or any(len(row) != n for row in self.metric):
            raise FiberContextError(f"metric must be {n}x{n}")
        self._g = tuple(tuple(self._number(v, "metric entry") for v in row) for row in self.metric)
        self._sqrt_g = self._metric_root()

    def _metric_root(self) -> Any:
        assert self.metric is not None
        if self.ring is EXACT:
            matrix = sympy.Matrix(
                [[sympy.Rational(str(exact_number(v, "g"))) for v in row] for row in self.metric]
            )
            if matrix != matrix.T:
                raise FiberContextError("metric is not symmetric")
            for k in range(1, self.n + 1):
                if matrix[:k, :k].det() <= 0:
                    raise FiberContextError("metric is not positive-definite")
            det = Fraction(str(matrix.det()))
            root = _exact_sqrt(det)
            if root is None:
                raise FiberContextError(
                    f"det g = {det} has no rational square root; use the numeric ring"
                )
            return self.ring.coerce(root)
        array = np.array(self.metric, dtype=float)
        if not np.allclose(array, array.T, rtol=1e-12, atol=1e-12):
            raise FiberContextError("metric is not symmetric")
        try:
            np.linalg.cholesky(array)
        except np.linalg.LinAlgError:
            raise FiberContextError("metric is not positive-definite") from None
        return self.ring.coerce(math.sqrt(float(np.linalg.det(array))))

    @property
    def m(self) -> int:
        """Half the dimension (floor)."""
        return self.n // 2

    def metric_entry(self, a: int, b: int) -> Any:
        """g_ab as a ring scalar (0-based indices)."""
        return self._g[a][b]

    @property
    def sqrt_g(self) -> Any:
        """Square root of det g as a ring scalar."""
        return self._sqrt_g

    @property
    def t_scalar(self) -> Any:
        return self._number(self.t, "t")

    @property
    def star_c(self) -> Any:
        """Normalization constant C of the Hodge star as a ring scalar."""
        if self.star_constant is not None:
            return self._number(self.star_constant, "star_constant")
        if self.n % 2:
            return self.ring.one()
        return self.t_scalar ** (-self.m)

    @property
    def r_scalar(self) -> Any:
        return self.ring.coerce(self.r)

    def hbar(self, power: int = 1) -> Any:
        """Planck's constant to a power: formal Laurent monomial or substituted number."""
        if self.hbar_mode is HbarMode.FORMAL:
            return self.ring.hbar(power)
        return self._number(self.hbar_value, "hbar_value") ** power

    def i_over_hbar(self) -> Any:
        return self.ring.imaginary_unit() * self.hbar(-1)

    def minus_i_hbar(self, power: int = 1) -> Any:
        """(-i hbar)**power."""
        base = -(self.ring.imaginary_unit() * self.hbar(1))
        return base**power

    def block(self, prefix: str) -> tuple[str, ...]:
        """Generator names prefix1..prefixn."""
        return tuple(f"{prefix}{k}" for k in range(1, self.n + 1))

    def measure(self, *prefixes: str) -> list[str]:
        """Berezin measure over several blocks; contragredient blocks run descending."""
        names: list[str] = []
        for prefix in prefixes:
            block = self.block(prefix)
            names.extend(reversed(block) if prefix in CONTRAGREDIENT_PREFIXES else block)
        return names

    def gens(self, *prefixes: str) -> GeneratorSet:
        return GeneratorSet.from_blocks(*(self.block(p) for p in prefixes))

    @property
    def form_gens(self) -> GeneratorSet:
        """Generators ξ¹..ξⁿ of Λ."""
        return self.gens(XI)

    @property
    def symbol_gens(self) -> GeneratorSet:
        """Generators (ξ¹..ξⁿ, θ_1..θ_n) of fiber symbols."""
        return self.gens(XI, THETA)

    @property
    def kernel_gens(self) -> GeneratorSet:
        """Generators (ξ¹..ξⁿ, η¹..ηⁿ) of kernels."""
        return self.gens(XI, ETA)

    def replace(self, **changes: Any) -> FiberContext:
        """A validated copy with some fields changed."""
        data = {name: getattr(self, name) for name in type(self).model_fields}
        data.update(changes)
        return FiberContext(**data)
