"""Scalar rings carrying the coefficients of every Grassmann computation.

Three rings are provided:

- ``EXACT``: :class:`ExactScalar`, Laurent polynomials in the formal parameter hbar with
  Gaussian-rational coefficients. No rounding anywhere.
- ``NUMERIC``: :class:`NumericScalar`, the same Laurent structure over complex doubles.
- ``SYMBOLIC``: plain sympy expressions, used for form fields and phase-space symbols whose
  coefficients depend on chart coordinates and momenta.

Dependencies: abc, cmath, collections.abc, fractions, math, typing, sympy, superweyl.constants,
superweyl.exceptions.
"""

from __future__ import annotations

import cmath
import math
from abc import ABC, abstractmethod
from collections.abc import Iterator, Mapping
from fractions import Fraction
from typing import Any, ClassVar

import sympy

from .constants import RATIONALIZE_MAX_DENOMINATOR
from .exceptions import ScalarRingError

Rational = int | Fraction


class GaussianRational:
    """Complex number with arbitrary-precision rational real and imaginary parts."""

    __slots__ = ("im", "re")

    re: Fraction
    im: Fraction

    def __init__(self, re: Rational | str = 0, im: Rational | str = 0) -> None:
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> GaussianRational:
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def coerce(cls, value: Any) -> GaussianRational:
        """Lift an int, Fraction or GaussianRational.

        :raises ScalarRingError: For floats and other inexact values.
        """
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, int | Fraction) and not isinstance(value, bool):
            return cls._make(Fraction(value), Fraction(0))
        raise ScalarRingError(f"cannot use {type(value).__name__} as an exact scalar")

    def __add__(self, other: GaussianRational) -> GaussianRational:
        return GaussianRational._make(self.re + other.re, self.im + other.im)

    def __sub__(self, other: GaussianRational) -> GaussianRational:
        return GaussianRational._make(self.re - other.re, self.im - other.im)

    def __mul__(self, other: GaussianRational) -> GaussianRational:
        if not other.im and not self.im:
            return GaussianRational._make(self.re * other.re, Fraction(0))
        return GaussianRational._make(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self) -> GaussianRational:
        return GaussianRational._make(-self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int | Fraction):
            return self.re == other and not self.im
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def conjugate(self) -> GaussianRational:
        return GaussianRational._make(self.re, -self.im)

    def inverse(self) -> GaussianRational:
        """Multiplicative inverse.

        :raises ScalarRingError: If the value is zero.
        """
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ScalarRingError("division by zero in exact arithmetic")
        return GaussianRational._make(self.re / norm, -self.im / norm)

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im} i"
        return f"{self.re} + {self.im} i"

    def __repr__(self) -> str:
        return f"GaussianRational({self.re!r}, {self.im!r})"


class _LaurentScalar:
    """Finite Laurent polynomial in hbar; subclasses fix the coefficient field."""

    __slots__ = ("_terms",)

    _terms: dict[int, Any]
    _unit: ClassVar[Any]

    def __init__(self, terms: Mapping[int, Any] | None = None) -> None:
        coerce = type(self)._coefficient
        self._terms = {}
        for power, value in (terms or {}).items():
            coefficient = coerce(value)
            if coefficient:
                self._terms[int(power)] = coefficient

    @classmethod
    def _from_clean(cls, terms: dict[int, Any]) -> Any:
        obj = object.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def _coefficient(cls, value: Any) -> Any:  # pragma: no cover - overridden
        raise NotImplementedError

    @classmethod
    def _lift(cls, other: Any) -> Any:  # pragma: no cover - overridden
        raise NotImplementedError

    @classmethod
    def constant(cls, value: Any) -> Any:
        """Degree-zero scalar with the given coefficient."""
        return cls({0: value})

    @classmethod
    def hbar(cls, power: int = 1) -> Any:
        """The monomial hbar**power."""
        return cls._from_clean({power: cls._unit})

    @property
    def terms(self) -> Mapping[int, Any]:
        return dict(self._terms)

    def degrees(self) -> Iterator[int]:
        return iter(sorted(self._terms))

    def coefficient(self, power: int) -> Any:
        return self._terms.get(power, type(self)._coefficient(0))

    @property
    def min_degree(self) -> int | None:
        return min(self._terms) if self._terms else None

    @property
    def max_degree(self) -> int | None:
        return max(self._terms) if self._terms else None

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other: Any) -> Any:
        rhs = type(self)._lift(other)
        if rhs is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for power, value in rhs._terms.items():
            total = out[power] + value if power in out else value
            if total:
                out[power] = total
            else:
                out.pop(power, None)
        return type(self)._from_clean(out)

    __radd__ = __add__

    def __neg__(self) -> Any:
        return type(self)._from_clean({k: -v for k, v in self._terms.items()})

    def __pos__(self) -> Any:
        return self

    def __sub__(self, other: Any) -> Any:
        rhs = type(self)._lift(other)
        if rhs is NotImplemented:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: Any) -> Any:
        lhs = type(self)._lift(other)
        if lhs is NotImplemented:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: Any) -> Any:
        rhs = type(self)._lift(other)
        if rhs is NotImplemented:
            return NotImplemented
        if len(self._terms) == 1 and len(rhs._terms) == 1:
            (pa, ca), (pb, cb) = next(iter(self._terms.items())), next(iter(rhs._terms.items()))
            return type(self)._from_clean({pa + pb: ca * cb})
        out: dict[int, Any] = {}
        for pa, ca in self._terms.items():
            for pb, cb in rhs._terms.items():
                power = pa + pb
                out[power] = out[power] + ca * cb if power in out else ca * cb
        return type(self)._from_clean({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def inverse(self) -> Any:
        """Inverse of a monomial c*hbar**k.

        :raises ScalarRingError: For zero or multi-term values.
        """
        if len(self._terms) != 1:
            raise ScalarRingError(f"only hbar-monomials are invertible, got {self}")
        power, value = next(iter(self._terms.items()))
        return type(self)._from_clean({-power: type(self)._invert(value)})

    @classmethod
    def _invert(cls, value: Any) -> Any:  # pragma: no cover - overridden
        raise NotImplementedError

    def __truediv__(self, other: Any) -> Any:
        rhs = type(self)._lift(other)
        if rhs is NotImplemented:
            return NotImplemented
        return self * rhs.inverse()

    def __rtruediv__(self, other: Any) -> Any:
        lhs = type(self)._lift(other)
        if lhs is NotImplemented:
            return NotImplemented
        return lhs * self.inverse()

    def __pow__(self, exponent: int) -> Any:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = type(self).constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        try:
            rhs = type(self)._lift(other)
        except ScalarRingError:
            return False
        if rhs is NotImplemented:
            return NotImplemented
        return bool(self._terms == rhs._terms)

    def __hash__(self) -> int:
        if not self._terms:
            return hash(0)
        if len(self._terms) == 1 and 0 in self._terms:
            return hash(self._terms[0])
        return hash(frozenset(self._terms.items()))

    def evaluate(self, hbar: complex | float = 1.0) -> complex:
        """Substitute a numeric value for hbar."""
        total = 0j
        for power, value in self._terms.items():
            total += complex(_as_complex(value)) * complex(hbar) ** power
        return total

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for power in sorted(self._terms):
            body = f"({self._terms[power]})"
            parts.append(body if power == 0 else f"{body} hbar^{power}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self._terms!r})"


def _as_complex(value: Any) -> complex:
    if isinstance(value, GaussianRational):
        return value.to_complex()
    return complex(value)


class ExactScalar(_LaurentScalar):
    """Laurent polynomial in hbar with Gaussian-rational coefficients."""

    __slots__ = ()
    _unit = GaussianRational._make(Fraction(1), Fraction(0))

    @classmethod
    def _coefficient(cls, value: Any) -> GaussianRational:
        return GaussianRational.coerce(value)

    @classmethod
    def _invert(cls, value: GaussianRational) -> GaussianRational:
        return value.inverse()

    @classmethod
    def _lift(cls, other: Any) -> Any:
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, NumericScalar):
            raise ScalarRingError("cannot mix exact and numeric scalars")
        if isinstance(other, bool):
            return NotImplemented
        if isinstance(other, int | Fraction | GaussianRational):
            coefficient = GaussianRational.coerce(other)
            return cls._from_clean({0: coefficient} if coefficient else {})
        if isinstance(other, float | complex):
            raise ScalarRingError("floating-point values cannot enter exact arithmetic")
        return NotImplemented

    @classmethod
    def imaginary_unit(cls) -> ExactScalar:
        return cls._from_clean({0: GaussianRational._make(Fraction(0), Fraction(1))})

    def to_numeric(self) -> NumericScalar:
        """The same Laurent polynomial over complex doubles."""
        return NumericScalar({k: v.to_complex() for k, v in self._terms.items()})

    def real_rational(self) -> Fraction:
        """Value of a real constant as a Fraction.

        :raises ScalarRingError: If hbar or an imaginary part is present.
        """
        if not self._terms:
            return Fraction(0)
        if set(self._terms) != {0} or self._terms[0].im:
            raise ScalarRingError(f"{self} is not a real rational constant")
        return self._terms[0].re


class NumericScalar(_LaurentScalar):
    """Laurent polynomial in hbar with complex-double coefficients."""

    __slots__ = ()
    _unit = 1 + 0j

    @classmethod
    def _coefficient(cls, value: Any) -> complex:
        if isinstance(value, GaussianRational):
            return value.to_complex()
        return complex(value)

    @classmethod
    def _invert(cls, value: complex) -> complex:
        if value == 0:
            raise ScalarRingError("division by zero in numeric arithmetic")
        return 1 / value

    @classmethod
    def _lift(cls, other: Any) -> Any:
        if isinstance(other, NumericScalar):
            return other
        if isinstance(other, ExactScalar):
            return other.to_numeric()
        if isinstance(other, bool):
            return NotImplemented
        if isinstance(other, int | float | complex | Fraction | GaussianRational):
            coefficient = cls._coefficient(other)
            return cls._from_clean({0: coefficient} if coefficient else {})
        return NotImplemented

    @classmethod
    def imaginary_unit(cls) -> NumericScalar:
        return cls._from_clean({0: 1j})

    def isclose(self, other: Any, rel_tol: float = 1e-10, abs_tol: float = 1e-12) -> bool:
        """Coefficient-wise closeness across all hbar powers."""
        rhs = NumericScalar._lift(other)
        for power in set(self._terms) | set(rhs._terms):
            a = self._terms.get(power, 0j)
            b = rhs._terms.get(power, 0j)
            if not cmath.isclose(a, b, rel_tol=rel_tol, abs_tol=abs_tol):
                return False
        return True


class ScalarRing(ABC):
    """Coefficient ring of a Grassmann algebra."""

    name: ClassVar[str]

    @abstractmethod
    def zero(self) -> Any: ...

    @abstractmethod
    def one(self) -> Any: ...

    @abstractmethod
    def coerce(self, value: Any) -> Any:
        """Bring an int, Fraction or ring element into this ring."""

    @abstractmethod
    def imaginary_unit(self) -> Any: ...

    @abstractmethod
    def hbar(self, power: int = 1) -> Any: ...

    def is_zero(self, value: Any) -> bool:
        return not value

    def isclose(self, a: Any, b: Any, rel_tol: float = 1e-10, abs_tol: float = 1e-12) -> bool:
        return bool(a == b)

    def rational(self, numerator: int, denominator: int = 1) -> Any:
        return self.coerce(Fraction(numerator, denominator))

    def factorial_inverse(self, k: int) -> Any:
        return self.rational(1, math.factorial(k))

    def __repr__(self) -> str:
        return f"<ScalarRing {self.name}>"


class ExactRing(ScalarRing):
    """Gaussian-rational Laurent polynomials in hbar."""

    name = "exact"

    def zero(self) -> ExactScalar:
        return ExactScalar()

    def one(self) -> ExactScalar:
        return ExactScalar.constant(1)

    def coerce(self, value: Any) -> ExactScalar:
        if isinstance(value, str):
            value = Fraction(value)
        lifted = ExactScalar._lift(value)
        if lifted is NotImplemented:
            raise ScalarRingError(f"cannot coerce {type(value).__name__} into the exact ring")
        return lifted

    def imaginary_unit(self) -> ExactScalar:
        return ExactScalar.imaginary_unit()

    def hbar(self, power: int = 1) -> ExactScalar:
        return ExactScalar.hbar(power)


class NumericRing(ScalarRing):
    """Complex-double Laurent polynomials in hbar."""

    name = "numeric"

    def zero(self) -> NumericScalar:
        return NumericScalar()

    def one(self) -> NumericScalar:
        return NumericScalar.constant(1)

    def coerce(self, value: Any) -> NumericScalar:
        if isinstance(value, str):
            value = complex(value)
        lifted = NumericScalar._lift(value)
        if lifted is NotImplemented:
            raise ScalarRingError(f"cannot coerce {type(value).__name__} into the numeric ring")
        return lifted

    def imaginary_unit(self) -> NumericScalar:
        return NumericScalar.imaginary_unit()

    def hbar(self, power: int = 1) -> NumericScalar:
        return NumericScalar.hbar(power)

    def isclose(self, a: Any, b: Any, rel_tol: float = 1e-10, abs_tol: float = 1e-12) -> bool:
        return bool(self.coerce(a).isclose(b, rel_tol=rel_tol, abs_tol=abs_tol))


class SymbolicRing(ScalarRing):
    """Sympy expressions; zero detection is structural."""

    name = "symbolic"

    def zero(self) -> sympy.Expr:
        return sympy.S.Zero

    def one(self) -> sympy.Expr:
        return sympy.S.One

    def coerce(self, value: Any) -> sympy.Expr:
        if isinstance(value, Fraction):
            return sympy.Rational(value.numerator, value.denominator)
        if isinstance(value, GaussianRational):
            re = sympy.Rational(value.re.numerator, value.re.denominator)
            im = sympy.Rational(value.im.numerator, value.im.denominator)
            return re + sympy.I * im
        tree = getattr(value, "tree", None)
        if tree is not None:
            return tree
        if isinstance(value, _LaurentScalar):
            raise ScalarRingError("hbar-dependent scalars cannot enter the symbolic ring")
        return sympy.sympify(value)

    def is_zero(self, value: Any) -> bool:
        return bool(value == 0)

    def imaginary_unit(self) -> sympy.Expr:
        return sympy.I

    def hbar(self, power: int = 1) -> sympy.Expr:
        raise ScalarRingError("the symbolic ring carries no Planck parameter")

    def isclose(self, a: Any, b: Any, rel_tol: float = 1e-10, abs_tol: float = 1e-12) -> bool:
        return bool(sympy.expand(self.coerce(a) - self.coerce(b)) == 0)


EXACT = ExactRing()
NUMERIC = NumericRing()
SYMBOLIC = SymbolicRing()


def ring_of(value: Any) -> ScalarRing:
    """Ring a value naturally belongs to."""
    if isinstance(value, NumericScalar):
        return NUMERIC
    if isinstance(value, ExactScalar):
        return EXACT
    if isinstance(value, sympy.Basic):
        return SYMBOLIC
    raise ScalarRingError(f"{type(value).__name__} does not belong to a scalar ring")


def rationalize(
    value: float,
    tol: float = 1e-12,
    max_denominator: int = RATIONALIZE_MAX_DENOMINATOR,
) -> Fraction | None:
    """Continued-fraction rounding of a double.

    :param value: Number to round.
    :param tol: Largest accepted absolute deviation, relative to ``max(1, |value|)``.
    :param max_denominator: Bound handed to ``Fraction.limit_denominator``.
    :return: The rational approximation, or None when none is close enough.
    """
    if not math.isfinite(value):
        return None
    candidate = Fraction(value).limit_denominator(max_denominator)
    if abs(float(candidate) - value) <= tol * max(1.0, abs(value)):
        return candidate
    return None
