"""Symbols on T*M in the coordinates (x, p, ξ = dx, θ = ∇p).

A :class:`TStarSymbol` is a Multivector over (ξ¹..ξⁿ, θ_1..θ_n) whose coefficients are
sympy expressions in the chart coordinates and the momenta ``p_<coordinate>``.

The differential acts by the structure equations

- ``dx^a = ξ^a`` and ``dξ^a = 0``
- ``dp_a = Γ^c_ba ξ^b p_c + θ_a``
- ``dθ_a = Γ^c_ba ξ^b θ_c - ½ R_kla^c ξ^k ξ^l p_c``

extended as an odd derivation.

Dependencies: sympy, superweyl.expr, superweyl.fiber, superweyl.geometry, superweyl.grassmann.
"""

from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Callable, Mapping
from typing import Any

import numpy as np
import sympy

from ..constants import THETA, XI, Parity
from ..exceptions import ChartMismatchError, GeneratorError
from ..expr import Expr, evaluate_many, symbol
from ..fiber import poisson_bracket_fiber
from ..geometry import CurvatureData, MetricChart, random_coefficient
from ..grassmann import GeneratorSet, Multivector
from ..scalars import NUMERIC, SYMBOLIC

logger = logging.getLogger(__name__)

MOMENTUM_PREFIX = "p_"


def tstar_gens(n: int) -> GeneratorSet:
    """Odd generators (ξ¹..ξⁿ, θ_1..θ_n)."""
    return GeneratorSet.from_blocks(
        [f"{XI}{k}" for k in range(1, n + 1)], [f"{THETA}{k}" for k in range(1, n + 1)]
    )


def momentum_names(chart: MetricChart) -> tuple[str, ...]:
    return tuple(f"{MOMENTUM_PREFIX}{x}" for x in chart.coordinates)


def momentum_symbols(chart: MetricChart) -> tuple[sympy.Symbol, ...]:
    return tuple(symbol(name) for name in momentum_names(chart))


class TStarSymbol:
    """Immutable function of (x, p, ξ, θ), polynomial in the odd variables."""

    __slots__ = ("_chart", "_value")

    def __init__(self, chart: MetricChart, value: Multivector) -> None:
        if value.gens != tstar_gens(chart.dim):
            raise GeneratorError(f"expected a Multivector over {tstar_gens(chart.dim)}")
        if value.ring is not SYMBOLIC:
            raise GeneratorError("T*M symbols need sympy coefficients")
        self._chart = chart
        self._value = value

    @classmethod
    def scalar(cls, chart: MetricChart, value: Expr | Any) -> TStarSymbol:
        tree = value.tree if isinstance(value, Expr) else sympy.sympify(value)
        return cls(chart, Multivector.scalar(tstar_gens(chart.dim), tree, SYMBOLIC))

    @classmethod
    def coordinate(cls, chart: MetricChart, a: int) -> TStarSymbol:
        """x^{a+1}."""
        return cls.scalar(chart, chart.symbols[a])

    @classmethod
    def momentum(cls, chart: MetricChart, a: int) -> TStarSymbol:
        """p_{a+1}."""
        return cls.scalar(chart, momentum_symbols(chart)[a])

    @classmethod
    def xi(cls, chart: MetricChart, a: int) -> TStarSymbol:
        """ξ^{a+1}."""
        gens = tstar_gens(chart.dim)
        return cls(chart, Multivector.generator(gens, f"{XI}{a + 1}", SYMBOLIC))

    @classmethod
    def theta(cls, chart: MetricChart, a: int) -> TStarSymbol:
        """θ_{a+1}."""
        gens = tstar_gens(chart.dim)
        return cls(chart, Multivector.generator(gens, f"{THETA}{a + 1}", SYMBOLIC))

    @classmethod
    def zero(cls, chart: MetricChart) -> TStarSymbol:
        return cls(chart, Multivector.zero(tstar_gens(chart.dim), SYMBOLIC))

    @property
    def chart(self) -> MetricChart:
        return self._chart

    @property
    def value(self) -> Multivector:
        return self._value

    @property
    def dim(self) -> int:
        return self._chart.dim

    def parity(self) -> Parity:
        return self._value.parity()

    def even_part(self) -> TStarSymbol:
        return TStarSymbol(self._chart, self._value.even_part())

    def odd_part(self) -> TStarSymbol:
        return TStarSymbol(self._chart, self._value.odd_part())

    def _map(self, fn: Callable[[sympy.Expr], sympy.Expr]) -> TStarSymbol:
        return TStarSymbol(self._chart, self._value.map_coefficients(fn))

    def diff_x(self, a: int) -> TStarSymbol:
        """∂/∂x^{a+1} of every coefficient."""
        x = self._chart.symbols[a]
        return self._map(lambda c: sympy.diff(c, x))

    def diff_p(self, a: int) -> TStarSymbol:
        """∂/∂p_{a+1} of every coefficient."""
        p = momentum_symbols(self._chart)[a]
        return self._map(lambda c: sympy.diff(c, p))

    def expanded(self) -> TStarSymbol:
        return self._map(sympy.expand)

    @property
    def is_zero(self) -> bool:
        """Zero after expanding every coefficient."""
        return self.expanded()._value.is_zero

    def _check(self, other: TStarSymbol) -> None:
        if other._chart.coordinates != self._chart.coordinates:
            raise ChartMismatchError(
                f"symbols on {self._chart.name} and {other._chart.name} cannot be combined"
            )

    def __add__(self, other: TStarSymbol) -> TStarSymbol:
        self._check(other)
        return TStarSymbol(self._chart, self._value + other._value)

    def __sub__(self, other: TStarSymbol) -> TStarSymbol:
        self._check(other)
        return TStarSymbol(self._chart, self._value - other._value)

    def __neg__(self) -> TStarSymbol:
        return TStarSymbol(self._chart, -self._value)

    def __mul__(self, other: TStarSymbol) -> TStarSymbol:
        self._check(other)
        return TStarSymbol(self._chart, self._value * other._value)

    def scale(self, factor: Expr | Any) -> TStarSymbol:
        tree = factor.tree if isinstance(factor, Expr) else sympy.sympify(factor)
        return TStarSymbol(self._chart, self._value.scale(tree))

    def evaluate(self, point: Mapping[str, float]) -> Multivector:
        """Numeric Multivector at given coordinates and momenta.

        :raises UnboundVariableError: If a coordinate or momentum is missing.
        """
        items = list(self._value.items())
        values = evaluate_many([c for _, c in items], point)
        terms = {mask: v for (mask, _), v in zip(items, values, strict=True)}
        return Multivector(self._value.gens, terms, NUMERIC)

    def max_abs(self, point: Mapping[str, float]) -> float:
        """Largest coefficient magnitude at a point."""
        return max((abs(c.evaluate(1.0)) for _, c in self.evaluate(point).items()), default=0.0)

    def __str__(self) -> str:
        return str(self._value)

    def __repr__(self) -> str:
        return f"TStarSymbol({self._chart.name!r}, {self})"


def canonical_bracket(f: TStarSymbol, g: TStarSymbol) -> TStarSymbol:
    """Super-Poisson bracket with ``{p_a, x^b} = δ_a^b`` and ``{θ_a, ξ^b} = δ_a^b``.

    :raises ChartMismatchError: If the symbols live on different charts.
    """
    f._check(g)
    result = TStarSymbol(f.chart, poisson_bracket_fiber(f.value, g.value))
    for a in range(f.dim):
        result = result + f.diff_p(a) * g.diff_x(a) - f.diff_x(a) * g.diff_p(a)
    return result


def _generator_differentials(data: CurvatureData, chart: MetricChart) -> dict[str, TStarSymbol]:
    """d of every odd generator and of every momentum, keyed by name."""
    n = chart.dim
    G = data.christoffel
    R = data.riemann
    p = momentum_symbols(chart)
    xi = [TStarSymbol.xi(chart, a) for a in range(n)]
    theta = [TStarSymbol.theta(chart, a) for a in range(n)]
    out: dict[str, TStarSymbol] = {}
    for a in range(n):
        dp = theta[a]
        dtheta = TStarSymbol.zero(chart)
        for b, c in itertools.product(range(n), repeat=2):
            if G[c, b, a] != 0:
                dp = dp + xi[b].scale(G[c, b, a] * p[c])
                dtheta = dtheta + (xi[b] * theta[c]).scale(G[c, b, a])
        for k, l, c in itertools.product(range(n), repeat=3):
            if k != l and R[k, l, a, c] != 0:
                dtheta = dtheta - (xi[k] * xi[l]).scale(R[k, l, a, c] * p[c] / 2)
        out[momentum_names(chart)[a]] = dp
        out[f"{XI}{a + 1}"] = TStarSymbol.zero(chart)
        out[f"{THETA}{a + 1}"] = dtheta
    return out


def cartan_d(f: TStarSymbol, data: CurvatureData) -> TStarSymbol:
    """Odd derivation d extending the structure equations by the graded Leibniz rule.

    :param f: Symbol to differentiate.
    :param data: Connection and curvature of a chart with the same coordinates.
    :raises ChartMismatchError: If ``data`` belongs to a chart with other coordinates.
    """
    chart = f.chart
    if data.chart.coordinates != chart.coordinates:
        raise ChartMismatchError(f"curvature of {data.chart.name} used on {chart.name}")
    n = chart.dim
    gens = f.value.gens
    images = _generator_differentials(data, chart)
    xs = chart.symbols
    ps = momentum_symbols(chart)
    momenta = momentum_names(chart)
    result = TStarSymbol.zero(chart)
    for mask, coefficient in f.value.items():
        monomial = TStarSymbol(chart, Multivector._raw(gens, SYMBOLIC, {mask: sympy.S.One}))
        # d(coefficient): dx^a = ξ^a plus the momentum differentials
        dc = TStarSymbol.zero(chart)
        for a in range(n):
            dx = sympy.diff(coefficient, xs[a])
            if dx != 0:
                dc = dc + TStarSymbol.xi(chart, a).scale(dx)
            dp = sympy.diff(coefficient, ps[a])
            if dp != 0:
                dc = dc + images[momenta[a]].scale(dp)
        result = result + dc * monomial
        # d(monomial) by the graded Leibniz rule over its ascending factors
        names = gens.names_of(mask)
        for i, name in enumerate(names):
            left = TStarSymbol(
                chart, Multivector.monomial(gens, names[:i], coefficient, SYMBOLIC)
            )
            right = TStarSymbol(chart, Multivector.monomial(gens, names[i + 1 :], 1, SYMBOLIC))
            term = left * images[name] * right
            result = result - term if i & 1 else result + term
    return result


def _sign(f: TStarSymbol) -> int:
    return -1 if f.parity() is Parity.ODD else 1


def _homogeneous(f: TStarSymbol) -> list[TStarSymbol]:
    return [part for part in (f.even_part(), f.odd_part()) if not part.value.is_zero]


def leibniz_defect(f: TStarSymbol, g: TStarSymbol, data: CurvatureData) -> TStarSymbol:
    """``D(f, g) = d{f, g} - {df, g} - (-1)^f̃ {f, dg}``, bilinear over parity parts."""
    f._check(g)
    result = TStarSymbol.zero(f.chart)
    for part in _homogeneous(f):
        bracket = canonical_bracket(part, g)
        result = result + cartan_d(bracket, data)
        result = result - canonical_bracket(cartan_d(part, data), g)
        tail = canonical_bracket(part, cartan_d(g, data))
        result = result - tail if _sign(part) > 0 else result + tail
    return result


def curvature_defect(f: TStarSymbol, g: TStarSymbol, data: CurvatureData) -> TStarSymbol:
    """Leibniz defect minus the defect of the flat metric on the same coordinates."""
    flat = CurvatureData.from_chart(data.chart.flat_twin())
    return leibniz_defect(f, g, data) - leibniz_defect(f, g, flat)


def generator_symbols(chart: MetricChart) -> dict[str, TStarSymbol]:
    """x^a, p_a, ξ^a and θ_a keyed by printable names such as ``p1``."""
    out: dict[str, TStarSymbol] = {}
    for a in range(chart.dim):
        out[f"x{a + 1}"] = TStarSymbol.coordinate(chart, a)
        out[f"p{a + 1}"] = TStarSymbol.momentum(chart, a)
        out[f"xi{a + 1}"] = TStarSymbol.xi(chart, a)
        out[f"theta{a + 1}"] = TStarSymbol.theta(chart, a)
    return out


def random_tstar_symbol(
    chart: MetricChart, rng: random.Random, parity: Parity = Parity.EVEN, terms: int = 3
) -> TStarSymbol:
    """Homogeneous symbol of degree at most two in (ξ, θ) and at most one in p."""
    gens = tstar_gens(chart.dim)
    wanted = 1 if parity is Parity.ODD else 0
    masks = [
        m for m in range(1 << len(gens)) if m.bit_count() <= 2 and m.bit_count() % 2 == wanted
    ]
    ps = momentum_symbols(chart)
    result = TStarSymbol.zero(chart)
    for _ in range(terms):
        coefficient = random_coefficient(chart, rng)
        if rng.random() < 0.5:
            coefficient = coefficient * rng.choice(ps)
        mask = rng.choice(masks)
        term = Multivector._raw(gens, SYMBOLIC, {mask: coefficient})
        result = result + TStarSymbol(chart, term)
    return result


def random_momenta(chart: MetricChart, rng: np.random.Generator) -> dict[str, float]:
    return {name: float(rng.uniform(-2.0, 2.0)) for name in momentum_names(chart)}
