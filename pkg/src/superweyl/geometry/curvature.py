"""Levi-Civita connection and curvature of a chart as expression tensors.

Index conventions (0-based arrays):

- ``christoffel[c, a, b] = Γ^c_ab = ½ g^{cd}(∂_a g_bd + ∂_b g_ad - ∂_d g_ab)``
- ``riemann[a, b, k, l] = R_abk^l``, where
  ``R_abk^l = ∂_a Γ^l_bk - ∂_b Γ^l_ak + Γ^l_am Γ^m_bk - Γ^l_bm Γ^m_ak``,
  so that ``[∇_a, ∇_b] = -R_abk^l ξ^k ∂/∂ξ^l`` on forms
- ``raised[a, b, k, l] = R_ab^{kl} = g^{km} R_abm^l``
- ``ricci[a, b] = Ric_a^b = R_ka^{kb}`` and ``scalar = Ric_a^a``

With these conventions the unit sphere has ``Ric = -δ`` and ``scalar = -2``;
``scalar_curvature = -scalar`` is the usual geometer's value.

Dependencies: dataclasses, numpy, sympy, superweyl.expr, superweyl.geometry.chart.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np
import sympy

from ..exceptions import MetricError
from ..expr import Expr, evaluate_many
from .chart import MetricChart

logger = logging.getLogger(__name__)

_SIMPLIFY_LIMIT = 80


def tidy(tree: sympy.Expr) -> sympy.Expr:
    """Simplify small trees; large ones are left as they are."""
    if tree == 0 or sympy.count_ops(tree) > _SIMPLIFY_LIMIT:
        return tree
    return sympy.simplify(tree)


def _object_array(shape: tuple[int, ...]) -> np.ndarray:
    array = np.empty(shape, dtype=object)
    array.fill(sympy.S.Zero)
    return array


@dataclass(frozen=True)
class CurvatureValues:
    """Numeric curvature tensors at one point, indexed like :class:`CurvatureData`."""

    point: dict[str, float]
    metric: np.ndarray
    inverse_metric: np.ndarray
    christoffel: np.ndarray
    riemann: np.ndarray
    raised: np.ndarray
    ricci: np.ndarray
    scalar: float

    @property
    def scalar_curvature(self) -> float:
        return -self.scalar


class CurvatureData:
    """Christoffel symbols, Riemann, Ricci and scalar curvature of a chart.

    Immutable once built. Use :meth:`from_chart` for the Levi-Civita connection, or
    :meth:`from_christoffel` to study an arbitrary connection.
    """

    def __init__(self, chart: MetricChart, christoffel: np.ndarray) -> None:
        n = chart.dim
        if christoffel.shape != (n, n, n):
            raise MetricError(f"Christoffel array must have shape {(n, n, n)}")
        self._chart = chart
        self._inverse = _inverse_metric(chart)
        self._christoffel = christoffel
        self._riemann = self._build_riemann()
        self._raised = self._build_raised()
        self._ricci = self._build_ricci()
        self._scalar = tidy(sum((self._ricci[a, a] for a in range(n)), sympy.S.Zero))
        logger.debug("curvature of %s built", chart.name)

    @classmethod
    def from_chart(cls, chart: MetricChart) -> CurvatureData:
        """Levi-Civita curvature data of the chart metric."""
        return cls(chart, christoffel(chart))

    @classmethod
    def from_christoffel(cls, chart: MetricChart, gamma: np.ndarray) -> CurvatureData:
        """Curvature of a given connection, which need not be symmetric or metric."""
        array = _object_array((chart.dim,) * 3)
        for index in itertools.product(range(chart.dim), repeat=3):
            value = gamma[index]
            array[index] = value.tree if isinstance(value, Expr) else sympy.sympify(value)
        return cls(chart, array)

    @property
    def chart(self) -> MetricChart:
        return self._chart

    @property
    def dim(self) -> int:
        return self._chart.dim

    @property
    def inverse_metric(self) -> np.ndarray:
        return self._inverse

    @property
    def christoffel(self) -> np.ndarray:
        return self._christoffel

    @property
    def riemann(self) -> np.ndarray:
        return self._riemann

    @property
    def raised(self) -> np.ndarray:
        return self._raised

    @property
    def ricci(self) -> np.ndarray:
        return self._ricci

    @property
    def scalar(self) -> sympy.Expr:
        return self._scalar

    @property
    def scalar_curvature(self) -> sympy.Expr:
        """Geometer's scalar curvature (2 on the unit sphere)."""
        return -self._scalar

    def mixed(self, a: int, k: int, b: int, l: int) -> sympy.Expr:
        """R_a^k_b^l = g^{km} R_amb^l."""
        return sum(
            (self._inverse[k, m] * self._riemann[a, m, b, l] for m in range(self.dim)),
            sympy.S.Zero,
        )

    def _build_riemann(self) -> np.ndarray:
        n = self.dim
        xs = self._chart.symbols
        G = self._christoffel
        R = _object_array((n, n, n, n))
        for a, b in itertools.combinations(range(n), 2):
            for k, l in itertools.product(range(n), repeat=2):
                value = sympy.diff(G[l, b, k], xs[a]) - sympy.diff(G[l, a, k], xs[b])
                for m in range(n):
                    value += G[l, a, m] * G[m, b, k] - G[l, b, m] * G[m, a, k]
                value = tidy(value)
                R[a, b, k, l] = value
                R[b, a, k, l] = -value
        return R

    def _build_raised(self) -> np.ndarray:
        n = self.dim
        raised = _object_array((n, n, n, n))
        for a, b, k, l in itertools.product(range(n), repeat=4):
            if a == b:
                continue
            raised[a, b, k, l] = tidy(
                sum(
                    (self._inverse[k, m] * self._riemann[a, b, m, l] for m in range(n)),
                    sympy.S.Zero,
                )
            )
        return raised

    def _build_ricci(self) -> np.ndarray:
        n = self.dim
        ricci = _object_array((n, n))
        for a, b in itertools.product(range(n), repeat=2):
            ricci[a, b] = tidy(
                sum((self._raised[k, a, k, b] for k in range(n)), sympy.S.Zero)
            )
        return ricci

    def _trees(self) -> list[sympy.Expr]:
        chart = self._chart
        n = self.dim
        metric = [chart.metric(a, b).tree for a in range(n) for b in range(n)]
        return [
            *metric,
            *self._inverse.ravel(),
            *self._christoffel.ravel(),
            *self._riemann.ravel(),
            *self._raised.ravel(),
            *self._ricci.ravel(),
            self._scalar,
        ]

    def at(self, point: Mapping[str, float]) -> CurvatureValues:
        """Numeric tensors at a point.

        :raises EvaluationDomainError: If the point hits a coordinate singularity.
        """
        n = self.dim
        values = np.array(evaluate_many(self._trees(), point), dtype=float)
        sizes = [n * n, n * n, n**3, n**4, n**4, n * n]
        shapes = [(n, n), (n, n), (n, n, n), (n,) * 4, (n,) * 4, (n, n)]
        arrays = []
        offset = 0
        for size, shape in zip(sizes, shapes, strict=True):
            arrays.append(values[offset : offset + size].reshape(shape))
            offset += size
        return CurvatureValues(dict(point), *arrays, scalar=float(values[offset]))


def _inverse_metric(chart: MetricChart) -> np.ndarray:
    """g^{ab} by the adjugate formula."""
    matrix = chart.metric_matrix()
    det = tidy(matrix.det())
    if det == 0:
        raise MetricError(f"{chart.name}: metric determinant vanishes identically")
    adjugate = matrix.adjugate()
    n = chart.dim
    inverse = _object_array((n, n))
    for a, b in itertools.product(range(n), repeat=2):
        inverse[a, b] = tidy(adjugate[a, b] / det)
    return inverse


def christoffel(chart: MetricChart) -> np.ndarray:
    """Γ^c_ab of the Levi-Civita connection, symmetric in (a, b) by construction."""
    n = chart.dim
    xs = chart.symbols
    g = chart.metric_matrix()
    inverse = _inverse_metric(chart)
    dg = [[[sympy.diff(g[b, d], xs[a]) for d in range(n)] for b in range(n)] for a in range(n)]
    gamma = _object_array((n, n, n))
    for c in range(n):
        for a in range(n):
            for b in range(a, n):
                value = sum(
                    (
                        inverse[c, d] * (dg[a][b][d] + dg[b][a][d] - dg[d][a][b])
                        for d in range(n)
                    ),
                    sympy.S.Zero,
                ) / 2
                value = tidy(value)
                gamma[c, a, b] = value
                gamma[c, b, a] = value
    return gamma


def riemann(chart: MetricChart) -> tuple[np.ndarray, np.ndarray]:
    """(R_abk^l, R_ab^{kl}) of the Levi-Civita connection."""
    data = CurvatureData.from_chart(chart)
    return data.riemann, data.raised


def ricci_and_scalar(data: CurvatureData) -> tuple[np.ndarray, sympy.Expr]:
    """(Ric_a^b, R) with Ric_a^b = R_ka^{kb} and R = Ric_a^a."""
    return data.ricci, data.scalar
