"""First- and second-order operators on forms built from the Levi-Civita connection.

Conventions on a chart with coordinates x¹..xⁿ:

- ``∇_a = ∂_a - Γ^l_ak ξ^k ∂/∂ξ^l``
- ``d = ξ^a ∂_a`` and ``δ = g^{ab} ∂/∂ξ^a ∇_b``
- ``□ = dδ + δd`` (equal to ``Σ_a ∂_a²`` on flat space)
- ``Δ = g^{ab}(∇_a ∇_b - Γ^c_ab ∇_c)``
- ``γ^a = ξ^a + g^{ak} ∂/∂ξ^k`` and ``D = γ^a ∇_a``

Operators take the :class:`~superweyl.geometry.CurvatureData` of a chart in place of the
chart; ``CurvatureData.from_chart(chart)`` builds it.

Dependencies: sympy, superweyl.geometry, superweyl.operators.forms.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from typing import Any

import sympy

from ..exceptions import GeneratorError
from ..expr import Expr, parse
from ..geometry import CurvatureData
from ..geometry.curvature import tidy
from .forms import FormOperator, xi_deriv, xi_mult

logger = logging.getLogger(__name__)


def _tree(value: Expr | str | Any) -> sympy.Expr:
    if isinstance(value, Expr):
        return value.tree
    if isinstance(value, str):
        return parse(value).tree
    return sympy.sympify(value)


def connection_matrix(data: CurvatureData, a: int) -> sympy.Matrix:
    """Fiber matrix ``Γ^l_ak ξ^k ∂/∂ξ^l`` subtracted from ``∂_a`` in ``∇_a``."""
    n = data.dim
    G = data.christoffel
    size = 1 << n
    matrix = sympy.zeros(size, size)
    for k in range(n):
        for l in range(n):
            if G[l, a, k] != 0:
                matrix += G[l, a, k] * (xi_mult(n, k) * xi_deriv(n, l))
    return matrix


def exterior_d(data: CurvatureData) -> FormOperator:
    """Exterior derivative ``ξ^a ∂_a``."""
    n = data.dim
    return FormOperator(data.chart, {(a,): xi_mult(n, a) for a in range(n)})


def covariant_derivative_operator(data: CurvatureData, a: int) -> FormOperator:
    """∇_a on forms (0-based coordinate index)."""
    chart = data.chart
    return FormOperator(
        chart,
        {(a,): sympy.eye(1 << chart.dim), (): -connection_matrix(data, a)},
    )


def codifferential(data: CurvatureData) -> FormOperator:
    """δ = g^{ab} ∂/∂ξ^a ∇_b."""
    n = data.dim
    chart = data.chart
    result = FormOperator.zero(chart)
    for b in range(n):
        contraction = sympy.zeros(1 << n, 1 << n)
        for a in range(n):
            g_ab = data.inverse_metric[a, b]
            if g_ab != 0:
                contraction += g_ab * xi_deriv(n, a)
        left = FormOperator.multiplication(chart, contraction)
        result = result + left @ covariant_derivative_operator(data, b)
    return result


def divergence(data: CurvatureData, X: Sequence[Expr | str | Any]) -> sympy.Expr:
    """Levi-Civita divergence ``∂_a X^a + Γ^b_ba X^a`` of a vector field."""
    n = data.dim
    if len(X) != n:
        raise GeneratorError(f"vector field needs {n} components, got {len(X)}")
    xs = data.chart.symbols
    components = [_tree(v) for v in X]
    G = data.christoffel
    value = sympy.S.Zero
    for a in range(n):
        value += sympy.diff(components[a], xs[a])
        value += sum((G[b, b, a] for b in range(n)), sympy.S.Zero) * components[a]
    return tidy(value)


def covariant_derivative(
    data: CurvatureData, X: Sequence[Expr | str | Any], s: Any = 0
) -> FormOperator:
    """Density-weighted derivative ``X^a ∇_a + s · div X``.

    :param data: Curvature of the chart.
    :param X: Vector field components X^a.
    :param s: Density weight; ``s = 1/2`` gives the half-density Lie derivative.
    """
    n = data.dim
    chart = data.chart
    result = FormOperator.zero(chart)
    for a, component in enumerate(X):
        result = result + covariant_derivative_operator(data, a).scale(_tree(component))
    weight = sympy.nsimplify(s) if not isinstance(s, sympy.Basic) else s
    if weight != 0:
        result = result + FormOperator.multiplication(
            chart, sympy.eye(1 << n) * (weight * divergence(data, X))
        )
    return result


def bochner_laplacian(data: CurvatureData) -> FormOperator:
    """Δ = g^{ab}(∇_a ∇_b - Γ^c_ab ∇_c)."""
    n = data.dim
    chart = data.chart
    G = data.christoffel
    nablas = [covariant_derivative_operator(data, a) for a in range(n)]
    result = FormOperator.zero(chart)
    for a in range(n):
        for b in range(n):
            g_ab = data.inverse_metric[a, b]
            if g_ab == 0:
                continue
            term = nablas[a] @ nablas[b]
            for c in range(n):
                if G[c, a, b] != 0:
                    term = term - nablas[c].scale(G[c, a, b])
            result = result + term.scale(g_ab)
    logger.debug("Bochner Laplacian on %s has %d terms", chart.name, len(result.terms))
    return result


def hodge_laplacian(data: CurvatureData) -> FormOperator:
    """□ = dδ + δd."""
    d = exterior_d(data)
    delta = codifferential(data)
    return d @ delta + delta @ d


def gamma_operators(data: CurvatureData) -> list[FormOperator]:
    """Clifford generators ``γ^a = ξ^a + g^{ak} ∂/∂ξ^k``, so ``{γ^a, γ^b} = 2 g^{ab}``."""
    n = data.dim
    chart = data.chart
    out = []
    for a in range(n):
        matrix = sympy.Matrix(xi_mult(n, a))
        for k in range(n):
            g_ak = data.inverse_metric[a, k]
            if g_ak != 0:
                matrix += g_ak * xi_deriv(n, k)
        out.append(FormOperator.multiplication(chart, matrix))
    return out


def dirac_operator(data: CurvatureData) -> FormOperator:
    """D = γ^a ∇_a; equals ``d + δ`` for a symmetric connection."""
    chart = data.chart
    result = FormOperator.zero(chart)
    for a, gamma in enumerate(gamma_operators(data)):
        result = result + gamma @ covariant_derivative_operator(data, a)
    return result
