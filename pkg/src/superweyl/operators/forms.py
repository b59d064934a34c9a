"""Differential forms on a chart and differential operators acting on them.

A form is stored by its ``2^n`` coefficient functions, indexed like fiber monomials: the
component at bitmask ``i`` multiplies the ascending product of the ``ξ^a`` whose bits are
set. A :class:`FormOperator` is ``Σ_α M_α(x) ∂^α`` with ``|α| <= 2`` and matrix
coefficients ``M_α`` acting on the fiber; the ξ-multiplications and ξ-derivatives it is
built from are the fiber generator operators.

Dependencies: functools, numpy, sympy, superweyl.fiber, superweyl.geometry.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator, Mapping, Sequence
from functools import lru_cache
from typing import Any

import numpy as np
import sympy

from ..constants import XI
from ..exceptions import ChartMismatchError, GeneratorError, OperatorOrderError
from ..expr import Expr, evaluate_many
from ..fiber import FiberContext, generator_operators
from ..geometry import MetricChart
from ..grassmann import GeneratorSet, Multivector, reorder_sign
from ..scalars import SYMBOLIC

logger = logging.getLogger(__name__)

MAX_ORDER = 2

Index = tuple[int, ...]


def form_gens(n: int) -> GeneratorSet:
    """Generators ξ¹..ξⁿ of the form fiber."""
    return GeneratorSet(f"{XI}{k}" for k in range(1, n + 1))


def _sympify(value: Any) -> sympy.Expr:
    if isinstance(value, Expr):
        return value.tree
    return sympy.sympify(value)


@lru_cache(maxsize=8)
def generator_matrices(n: int) -> tuple[tuple[sympy.Matrix, ...], tuple[sympy.Matrix, ...]]:
    """Integer matrices of left multiplication by ξ^a and of ∂/∂ξ^a on Λ(R^n)."""
    multiplications, derivatives = generator_operators(FiberContext(n=n))

    def convert(op: Any) -> sympy.Matrix:
        return sympy.ImmutableMatrix(
            op.size,
            op.size,
            lambda i, j: sympy.Rational(str(op.matrix[i, j].real_rational())),
        )

    return (
        tuple(convert(op) for op in multiplications),
        tuple(convert(op) for op in derivatives),
    )


def xi_mult(n: int, a: int) -> sympy.Matrix:
    """Left multiplication by ξ^{a+1}."""
    return generator_matrices(n)[0][a]


def xi_deriv(n: int, a: int) -> sympy.Matrix:
    """Left derivative ∂/∂ξ^{a+1}."""
    return generator_matrices(n)[1][a]


def _is_zero_matrix(matrix: sympy.Matrix) -> bool:
    return all(entry == 0 for entry in matrix)


class FormField:
    """Immutable differential form ``Σ_I u_I(x) ξ^I`` on a chart."""

    __slots__ = ("_chart", "_vector")

    def __init__(self, chart: MetricChart, components: Sequence[Any]) -> None:
        size = 1 << chart.dim
        if len(components) != size:
            raise GeneratorError(f"a form on {chart.name} needs {size} components")
        self._chart = chart
        self._vector = sympy.ImmutableMatrix([_sympify(c) for c in components])

    @classmethod
    def _from_vector(cls, chart: MetricChart, vector: sympy.Matrix) -> FormField:
        obj = object.__new__(cls)
        obj._chart = chart
        obj._vector = sympy.ImmutableMatrix(vector)
        return obj

    @classmethod
    def zero(cls, chart: MetricChart) -> FormField:
        return cls(chart, [0] * (1 << chart.dim))

    @classmethod
    def monomial(
        cls, chart: MetricChart, coefficient: Any, indices: Sequence[int] = ()
    ) -> FormField:
        """``coefficient · ξ^{i_1} ... ξ^{i_k}`` for 0-based indices in any order."""
        mask = 0
        sign = 1
        for index in indices:
            if not 0 <= index < chart.dim:
                raise GeneratorError(f"form index {index} outside 0..{chart.dim - 1}")
            bit = 1 << index
            if mask & bit:
                return cls.zero(chart)
            sign *= reorder_sign(mask, bit)
            mask |= bit
        components: list[Any] = [0] * (1 << chart.dim)
        components[mask] = sign * _sympify(coefficient)
        return cls(chart, components)

    @classmethod
    def from_multivector(cls, chart: MetricChart, u: Multivector) -> FormField:
        """Form from a symbolic Multivector over ξ¹..ξⁿ.

        :raises GeneratorError: If ``u`` lives over other generators.
        """
        if u.gens != form_gens(chart.dim):
            raise GeneratorError(f"expected a Multivector over {form_gens(chart.dim)}")
        components: list[Any] = [0] * (1 << chart.dim)
        for mask, value in u.items():
            components[mask] = value
        return cls(chart, components)

    @property
    def chart(self) -> MetricChart:
        return self._chart

    @property
    def vector(self) -> sympy.Matrix:
        return self._vector

    @property
    def components(self) -> tuple[sympy.Expr, ...]:
        return tuple(self._vector)

    def component(self, indices: Sequence[int]) -> sympy.Expr:
        """Coefficient of the ascending monomial over the given 0-based indices."""
        mask = sum(1 << i for i in set(indices))
        return self._vector[mask]

    @property
    def is_zero(self) -> bool:
        return all(sympy.expand(c) == 0 for c in self._vector)

    def to_multivector(self) -> Multivector:
        terms = {mask: value for mask, value in enumerate(self._vector) if value != 0}
        return Multivector(form_gens(self._chart.dim), terms, SYMBOLIC)

    def degree_part(self, degree: int) -> FormField:
        return FormField(
            self._chart,
            [c if mask.bit_count() == degree else 0 for mask, c in enumerate(self._vector)],
        )

    def diff(self, a: int) -> FormField:
        """Componentwise partial derivative ∂/∂x^{a+1}."""
        return FormField._from_vector(self._chart, self._vector.diff(self._chart.symbols[a]))

    def _check(self, other: FormField) -> None:
        if other._chart is not self._chart:
            raise ChartMismatchError(f"forms on {self._chart.name} and {other._chart.name}")

    def __add__(self, other: FormField) -> FormField:
        self._check(other)
        return FormField._from_vector(self._chart, self._vector + other._vector)

    def __sub__(self, other: FormField) -> FormField:
        self._check(other)
        return FormField._from_vector(self._chart, self._vector - other._vector)

    def __neg__(self) -> FormField:
        return FormField._from_vector(self._chart, -self._vector)

    def scale(self, factor: Any) -> FormField:
        return FormField._from_vector(self._chart, self._vector * _sympify(factor))

    def evaluate(self, point: Mapping[str, float]) -> np.ndarray:
        """Numeric components at a point.

        :raises EvaluationDomainError: At a coordinate singularity.
        """
        return np.array(evaluate_many(list(self._vector), point), dtype=float)

    def __str__(self) -> str:
        return str(self.to_multivector())

    def __repr__(self) -> str:
        return f"FormField({self._chart.name!r}, {self})"


def _key(alpha: Sequence[int]) -> Index:
    key = tuple(sorted(alpha))
    if len(key) > MAX_ORDER:
        raise OperatorOrderError(f"derivative index {key} exceeds order {MAX_ORDER}")
    return key


def _subsets(alpha: Index) -> Iterator[tuple[Index, Index]]:
    """Splits of a multi-index into (taken, rest), one per subset of positions."""
    positions = range(len(alpha))
    for size in range(len(alpha) + 1):
        for chosen in itertools.combinations(positions, size):
            taken = tuple(alpha[i] for i in chosen)
            rest = tuple(alpha[i] for i in positions if i not in chosen)
            yield taken, rest


class FormOperator:
    """Differential operator ``Σ_α M_α(x) ∂^α`` on forms of one chart, of order at most two.

    :param chart: Chart the coefficients live on.
    :param terms: Mapping from multi-index ``α`` (0-based coordinate indices) to a
        ``2^n x 2^n`` matrix of expressions.
    :raises OperatorOrderError: If a multi-index has more than two entries.
    """

    __slots__ = ("_chart", "_terms")

    def __init__(self, chart: MetricChart, terms: Mapping[Sequence[int], Any]) -> None:
        size = 1 << chart.dim
        self._chart = chart
        self._terms: dict[Index, sympy.Matrix] = {}
        for alpha, matrix in terms.items():
            key = _key(alpha)
            matrix = sympy.ImmutableMatrix(matrix)
            if matrix.shape != (size, size):
                raise GeneratorError(f"coefficient matrix must be {size}x{size}")
            if key in self._terms:
                matrix = self._terms[key] + matrix
            self._terms[key] = sympy.ImmutableMatrix(matrix)
        self._terms = {k: m for k, m in self._terms.items() if not _is_zero_matrix(m)}

    @classmethod
    def zero(cls, chart: MetricChart) -> FormOperator:
        return cls(chart, {})

    @classmethod
    def identity(cls, chart: MetricChart) -> FormOperator:
        return cls.multiplication(chart, sympy.eye(1 << chart.dim))

    @classmethod
    def multiplication(cls, chart: MetricChart, matrix: Any) -> FormOperator:
        """Zeroth-order operator given by a fiber matrix with function entries."""
        return cls(chart, {(): matrix})

    @classmethod
    def partial(cls, chart: MetricChart, a: int) -> FormOperator:
        """∂/∂x^{a+1} acting componentwise."""
        return cls(chart, {(a,): sympy.eye(1 << chart.dim)})

    @property
    def chart(self) -> MetricChart:
        return self._chart

    @property
    def terms(self) -> dict[Index, sympy.Matrix]:
        return dict(self._terms)

    @property
    def order(self) -> int:
        return max((len(alpha) for alpha in self._terms), default=0)

    def coefficient(self, alpha: Sequence[int]) -> sympy.Matrix:
        size = 1 << self._chart.dim
        return self._terms.get(_key(alpha), sympy.zeros(size, size))

    def _check(self, other: FormOperator | FormField) -> None:
        if other.chart is not self._chart:
            raise ChartMismatchError(f"{self._chart.name} operator used on {other.chart.name}")

    def apply(self, u: FormField) -> FormField:
        """Image ``Σ_α M_α ∂^α u``; the order of ``u``'s coefficients is unrestricted."""
        self._check(u)
        xs = self._chart.symbols
        result = sympy.zeros(1 << self._chart.dim, 1)
        for alpha, matrix in self._terms.items():
            derived = u.vector
            for a in alpha:
                derived = derived.diff(xs[a])
            result += matrix * derived
        return FormField._from_vector(self._chart, result)

    __call__ = apply

    def __add__(self, other: FormOperator) -> FormOperator:
        self._check(other)
        merged: dict[Index, Any] = dict(self._terms)
        for alpha, matrix in other._terms.items():
            merged[alpha] = merged[alpha] + matrix if alpha in merged else matrix
        return FormOperator(self._chart, merged)

    def __neg__(self) -> FormOperator:
        return FormOperator(self._chart, {alpha: -m for alpha, m in self._terms.items()})

    def __sub__(self, other: FormOperator) -> FormOperator:
        return self + (-other)

    def scale(self, factor: Any) -> FormOperator:
        value = _sympify(factor)
        return FormOperator(self._chart, {alpha: m * value for alpha, m in self._terms.items()})

    def __matmul__(self, other: FormOperator) -> FormOperator:
        """Composition by the Leibniz rule.

        :raises OperatorOrderError: If the composite has a nonzero term of order above two.
        """
        self._check(other)
        xs = self._chart.symbols
        out: dict[Index, Any] = {}
        for alpha, left in self._terms.items():
            for beta, right in other._terms.items():
                for taken, rest in _subsets(alpha):
                    inner = right
                    for a in taken:
                        inner = inner.diff(xs[a])
                    product = left * inner
                    if _is_zero_matrix(product):
                        continue
                    key = tuple(sorted(beta + rest))
                    out[key] = out[key] + product if key in out else product
        for key, matrix in out.items():
            if len(key) > MAX_ORDER and not _is_zero_matrix(matrix.applyfunc(sympy.expand)):
                raise OperatorOrderError(
                    f"composite on {self._chart.name} has order {len(key)} > {MAX_ORDER}"
                )
        return FormOperator(self._chart, {k: m for k, m in out.items() if len(k) <= MAX_ORDER})

    def expanded(self) -> FormOperator:
        """Same operator with every coefficient entry expanded."""
        return FormOperator(
            self._chart, {alpha: m.applyfunc(sympy.expand) for alpha, m in self._terms.items()}
        )

    def __repr__(self) -> str:
        keys = sorted(self._terms, key=lambda k: (len(k), k))
        return f"FormOperator({self._chart.name!r}, order={self.order}, terms={keys})"
