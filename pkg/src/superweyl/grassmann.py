"""Exterior superalgebra over named odd generators.

A :class:`Multivector` maps bitmasks over an ordered :class:`GeneratorSet` to nonzero
coefficients of a :class:`~superweyl.scalars.ScalarRing`. The monomial of a mask is the
product of its generators in ascending index order; every sign in the package derives
from that single convention.

Dependencies: collections.abc, types, typing, superweyl.scalars, superweyl.constants.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from types import MappingProxyType
from typing import Any

import sympy

from .constants import Parity
from .exceptions import AntisymmetryError, GeneratorError, ScalarRingError
from .scalars import EXACT, NUMERIC, SYMBOLIC, ScalarRing

logger = logging.getLogger(__name__)


def reorder_sign(left: int, right: int) -> int:
    """Sign of ``e_left * e_right`` relative to ``e_(left|right)`` for disjoint masks.

    Counts pairs (i in left, j in right) with i > j.
    """
    count = 0
    left >>= 1
    while left:
        count += (left & right).bit_count()
        left >>= 1
    return -1 if count & 1 else 1


class GeneratorSet:
    """Ordered tuple of distinct odd generator names."""

    __slots__ = ("_index", "_names")

    def __init__(self, names: Iterable[str]) -> None:
        self._names = tuple(names)
        self._index = {name: i for i, name in enumerate(self._names)}
        if len(self._index) != len(self._names):
            raise GeneratorError(f"duplicate generator names in {self._names}")

    @classmethod
    def from_blocks(cls, *blocks: Iterable[str]) -> GeneratorSet:
        return cls(name for block in blocks for name in block)

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    def index(self, name: str) -> int:
        """Position of a generator.

        :raises GeneratorError: If the name is not in the set.
        """
        try:
            return self._index[name]
        except KeyError:
            raise GeneratorError(f"unknown generator '{name}' (have {self._names})") from None

    def bit(self, name: str) -> int:
        return 1 << self.index(name)

    def mask_of(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            mask |= self.bit(name)
        return mask

    def names_of(self, mask: int) -> tuple[str, ...]:
        return tuple(name for i, name in enumerate(self._names) if mask >> i & 1)

    @property
    def full_mask(self) -> int:
        return (1 << len(self._names)) - 1

    def __add__(self, other: GeneratorSet) -> GeneratorSet:
        return GeneratorSet(self._names + other._names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self._names)

    def __iter__(self) -> Iterator[str]:
        return iter(self._names)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GeneratorSet):
            return NotImplemented
        return self._names == other._names

    def __hash__(self) -> int:
        return hash(self._names)

    def __repr__(self) -> str:
        return f"GeneratorSet({list(self._names)})"


class Multivector:
    """Immutable element of the exterior algebra over a generator set."""

    __slots__ = ("_gens", "_ring", "_terms")

    def __init__(
        self,
        gens: GeneratorSet,
        terms: Mapping[int, Any] | None = None,
        ring: ScalarRing = EXACT,
    ) -> None:
        self._gens = gens
        self._ring = ring
        self._terms: dict[int, Any] = {}
        limit = 1 << len(gens)
        for mask, value in (terms or {}).items():
            if not 0 <= mask < limit:
                raise GeneratorError(f"mask {mask:#b} outside {gens}")
            coefficient = ring.coerce(value)
            if not ring.is_zero(coefficient):
                self._terms[mask] = coefficient

    @classmethod
    def _raw(cls, gens: GeneratorSet, ring: ScalarRing, terms: dict[int, Any]) -> Multivector:
        obj = object.__new__(cls)
        obj._gens = gens
        obj._ring = ring
        obj._terms = terms
        return obj

    @classmethod
    def zero(cls, gens: GeneratorSet, ring: ScalarRing = EXACT) -> Multivector:
        return cls._raw(gens, ring, {})

    @classmethod
    def scalar(cls, gens: GeneratorSet, value: Any, ring: ScalarRing = EXACT) -> Multivector:
        return cls(gens, {0: value}, ring)

    @classmethod
    def generator(cls, gens: GeneratorSet, name: str, ring: ScalarRing = EXACT) -> Multivector:
        return cls._raw(gens, ring, {gens.bit(name): ring.one()})

    @classmethod
    def monomial(
        cls,
        gens: GeneratorSet,
        names: Sequence[str],
        coefficient: Any = 1,
        ring: ScalarRing = EXACT,
    ) -> Multivector:
        """Product of the named generators in the order given, times a coefficient."""
        result = cls.scalar(gens, coefficient, ring)
        for name in names:
            result = result * cls.generator(gens, name, ring)
        return result

    @property
    def gens(self) -> GeneratorSet:
        return self._gens

    @property
    def ring(self) -> ScalarRing:
        return self._ring

    @property
    def terms(self) -> Mapping[int, Any]:
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[tuple[int, Any]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, monomial: int | Sequence[str]) -> Any:
        """Coefficient of a canonical (ascending) monomial, given as mask or names."""
        mask = monomial if isinstance(monomial, int) else self._gens.mask_of(monomial)
        return self._terms.get(mask, self._ring.zero())

    def scalar_part(self) -> Any:
        return self._terms.get(0, self._ring.zero())

    def max_degree(self) -> int:
        return max((mask.bit_count() for mask in self._terms), default=0)

    def parity(self) -> Parity:
        degrees = {mask.bit_count() & 1 for mask in self._terms}
        if degrees == {1}:
            return Parity.ODD
        if len(degrees) == 2:
            return Parity.MIXED
        return Parity.EVEN

    def filter(self, keep: Callable[[int], bool]) -> Multivector:
        """Terms whose mask satisfies a predicate."""
        return Multivector._raw(
            self._gens, self._ring, {m: c for m, c in self._terms.items() if keep(m)}
        )

    def even_part(self) -> Multivector:
        return self.filter(lambda m: not m.bit_count() & 1)

    def odd_part(self) -> Multivector:
        return self.filter(lambda m: bool(m.bit_count() & 1))

    def homogeneous_part(self, degree: int) -> Multivector:
        return self.filter(lambda m: m.bit_count() == degree)

    def map_coefficients(
        self, fn: Callable[[Any], Any], ring: ScalarRing | None = None
    ) -> Multivector:
        target = ring or self._ring
        return Multivector(self._gens, {m: fn(c) for m, c in self._terms.items()}, target)

    def _check_compatible(self, other: Multivector) -> None:
        if other._gens != self._gens:
            raise GeneratorError(f"mismatched generator sets {self._gens} and {other._gens}")
        if other._ring is not self._ring:
            raise ScalarRingError(f"cannot combine {self._ring.name} and {other._ring.name}")

    def __add__(self, other: Multivector) -> Multivector:
        if not isinstance(other, Multivector):
            return NotImplemented
        self._check_compatible(other)
        is_zero = self._ring.is_zero
        out = dict(self._terms)
        for mask, value in other._terms.items():
            total = out[mask] + value if mask in out else value
            if is_zero(total):
                out.pop(mask, None)
            else:
                out[mask] = total
        return Multivector._raw(self._gens, self._ring, out)

    def __neg__(self) -> Multivector:
        return Multivector._raw(self._gens, self._ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Multivector) -> Multivector:
        if not isinstance(other, Multivector):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: Any) -> Multivector:
        """Multiply every coefficient by a scalar."""
        factor = self._ring.coerce(factor)
        if self._ring.is_zero(factor):
            return Multivector.zero(self._gens, self._ring)
        is_zero = self._ring.is_zero
        out = {}
        for mask, value in self._terms.items():
            product = factor * value
            if not is_zero(product):
                out[mask] = product
        return Multivector._raw(self._gens, self._ring, out)

    def __mul__(self, other: Any) -> Multivector:
        if isinstance(other, Multivector):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other: Any) -> Multivector:
        return self.scale(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        return (
            self._gens == other._gens
            and self._ring is other._ring
            and self._terms.keys() == other._terms.keys()
            and all(self._terms[m] == other._terms[m] for m in self._terms)
        )

    def __hash__(self) -> int:
        return hash((self._gens, frozenset(self._terms.items())))

    def isclose(self, other: Multivector, rel_tol: float = 1e-10, abs_tol: float = 1e-12) -> bool:
        """Coefficient-wise comparison using the ring's notion of closeness."""
        self._check_compatible(other)
        zero = self._ring.zero()
        return all(
            self._ring.isclose(
                self._terms.get(m, zero),
                other._terms.get(m, zero),
                rel_tol=rel_tol,
                abs_tol=abs_tol,
            )
            for m in set(self._terms) | set(other._terms)
        )

    def reexpress(self, target: GeneratorSet) -> Multivector:
        """Same element written over another generator set containing all used generators.

        :raises GeneratorError: If a term uses a generator missing from ``target``.
        """
        if target == self._gens:
            return self
        position = [target.index(name) if name in target else -1 for name in self._gens]
        out: dict[int, Any] = {}
        for mask, value in self._terms.items():
            new_mask = 0
            sign = 1
            for i in range(len(self._gens)):
                if not mask >> i & 1:
                    continue
                j = position[i]
                if j < 0:
                    raise GeneratorError(
                        f"generator '{self._gens.names[i]}' is not available in {target}"
                    )
                if (new_mask >> (j + 1)).bit_count() & 1:
                    sign = -sign
                new_mask |= 1 << j
            out[new_mask] = value if sign > 0 else -value
        return Multivector._raw(target, self._ring, out)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mask in sorted(self._terms, key=lambda m: (m.bit_count(), m)):
            names = " ".join(self._gens.names_of(mask))
            coefficient = self._terms[mask]
            parts.append(f"{coefficient}" if not names else f"{coefficient} * {names}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Multivector({self})"


def multiply(a: Multivector, b: Multivector) -> Multivector:
    """Exterior product.

    :raises GeneratorError: If the generator sets differ.
    """
    a._check_compatible(b)
    is_zero = a._ring.is_zero
    out: dict[int, Any] = {}
    for ma, ca in a._terms.items():
        for mb, cb in b._terms.items():
            if ma & mb:
                continue
            product = ca * cb
            if reorder_sign(ma, mb) < 0:
                product = -product
            mask = ma | mb
            if mask in out:
                total = out[mask] + product
                if is_zero(total):
                    del out[mask]
                else:
                    out[mask] = total
            elif not is_zero(product):
                out[mask] = product
    return Multivector._raw(a._gens, a._ring, out)


def left_derivative(a: Multivector, gen: str) -> Multivector:
    """Odd left derivative: move ``gen`` to the front, then delete it.

    :raises GeneratorError: If ``gen`` is unknown.
    """
    bit = a._gens.bit(gen)
    below = bit - 1
    out = {}
    for mask, value in a._terms.items():
        if mask & bit:
            out[mask ^ bit] = -value if (mask & below).bit_count() & 1 else value
    return Multivector._raw(a._gens, a._ring, out)


def berezin_integral(a: Multivector, gens: Sequence[str]) -> Multivector:
    """Berezin integral over the listed generators.

    ``∫D(g_1..g_k) = ∂_{g_1} ∘ ... ∘ ∂_{g_k}``: the last listed derivative acts first, so
    the integral extracts the coefficient of ``g_k ... g_1`` and ``∫ ξ²ξ¹ Dξ = 1``.

    :raises GeneratorError: If a generator is unknown.
    """
    bits = [a._gens.bit(name) for name in reversed(gens)]
    out = {}
    for mask, value in a._terms.items():
        sign = 1
        for bit in bits:
            if not mask & bit:
                break
            if (mask & (bit - 1)).bit_count() & 1:
                sign = -sign
            mask ^= bit
        else:
            out[mask] = value if sign > 0 else -value
    return Multivector._raw(a._gens, a._ring, out)


def substitute_linear(
    a: Multivector,
    images: Mapping[str, Multivector],
    target: GeneratorSet | None = None,
) -> Multivector:
    """Algebra homomorphism sending each generator to a degree-one element of ``target``.

    Generators without an explicit image are sent to the same-named generator of ``target``.

    :raises GeneratorError: If an image is not homogeneous of degree one, or lives on another
        generator set.
    """
    target = target or a._gens
    ring = a._ring
    image_of: list[Multivector] = []
    for name in a._gens:
        image = images.get(name)
        if image is None:
            image = Multivector.generator(target, name, ring)
        if image._gens != target:
            raise GeneratorError(f"image of '{name}' is not written over {target}")
        if any(mask.bit_count() != 1 for mask in image._terms):
            raise GeneratorError(f"image of '{name}' is not a degree-one combination: {image}")
        image_of.append(image)
    unknown = set(images) - set(a._gens.names)
    if unknown:
        raise GeneratorError(f"images given for unknown generators {sorted(unknown)}")

    products: dict[int, Multivector] = {0: Multivector.scalar(target, ring.one(), ring)}

    def product(mask: int) -> Multivector:
        cached = products.get(mask)
        if cached is None:
            top = mask.bit_length() - 1
            cached = multiply(product(mask ^ (1 << top)), image_of[top])
            products[mask] = cached
        return cached

    result = Multivector.zero(target, ring)
    for mask, value in a._terms.items():
        result = result + product(mask).scale(value)
    return result


def exp_even_nilpotent(a: Multivector) -> Multivector:
    """Exponential of a nilpotent even element, as a finite series.

    :raises GeneratorError: If ``a`` has a degree-0 or odd-degree term.
    """
    for mask in a._terms:
        degree = mask.bit_count()
        if degree == 0 or degree & 1:
            raise GeneratorError(f"exponent has a term of degree {degree}; need even degree >= 2")
    ring = a._ring
    result = Multivector.scalar(a._gens, ring.one(), ring)
    power = result
    k = 0
    while True:
        k += 1
        power = multiply(power, a)
        if power.is_zero:
            break
        result = result + power.scale(ring.factorial_inverse(k))
    return result


def _check_antisymmetric(matrix: list[list[Any]], ring: ScalarRing) -> None:
    size = len(matrix)
    if ring is NUMERIC:
        scale = max(
            (abs(v) for row in matrix for entry in row for v in entry.terms.values()), default=0.0
        )
        tolerance = 1e-12 * max(scale, 1e-300)
        for i in range(size):
            for j in range(size):
                residual = matrix[i][j] + matrix[j][i]
                if any(abs(v) > tolerance for v in residual.terms.values()):
                    raise AntisymmetryError(f"Q[{i}][{j}] + Q[{j}][{i}] = {residual}")
        return
    for i in range(size):
        for j in range(i, size):
            residual = matrix[i][j] + matrix[j][i]
            if ring is SYMBOLIC:
                residual = sympy.expand(residual)
            if not ring.is_zero(residual):
                raise AntisymmetryError(f"Q[{i}][{j}] + Q[{j}][{i}] = {residual} != 0")


def pfaffian(Q: Sequence[Sequence[Any]], ring: ScalarRing = EXACT) -> Any:
    """Pfaffian of an antisymmetric matrix as the odd Gaussian integral
    ``∫ Dθ exp(-½ Q^{ab} θ_a θ_b)`` over ``(θ_1..θ_k)``.

    :param Q: Square antisymmetric matrix of ring-coercible entries.
    :param ring: Scalar ring of the entries.
    :return: Pfaffian; zero for odd size.
    :raises AntisymmetryError: If ``Q`` is not antisymmetric.
    """
    size = len(Q)
    if any(len(row) != size for row in Q):
        raise AntisymmetryError("Pfaffian needs a square matrix")
    matrix = [[ring.coerce(entry) for entry in row] for row in Q]
    _check_antisymmetric(matrix, ring)
    names = [f"theta{k}" for k in range(1, size + 1)]
    gens = GeneratorSet(names)
    half = ring.rational(-1, 2)
    terms: dict[int, Any] = {}
    for a in range(size):
        for b in range(size):
            if a == b or ring.is_zero(matrix[a][b]):
                continue
            mask = (1 << a) | (1 << b)
            value = half * matrix[a][b] * reorder_sign(1 << a, 1 << b)
            terms[mask] = terms[mask] + value if mask in terms else value
    quadratic = Multivector(gens, terms, ring)
    integrated = berezin_integral(exp_even_nilpotent(quadratic), names)
    logger.debug("pfaffian of %dx%d matrix computed by Berezin integration", size, size)
    return integrated.scalar_part()
