"""Numeric verification of connection and curvature identities at sample points.

Dependencies: itertools, random, sympy, superweyl._parallel, superweyl.expr,
superweyl.models.
"""

from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Sequence

import numpy as np
import sympy

from .._parallel import ordered_map
from ..expr import evaluate_many
from ..models import CheckSettings, RunReport
from .chart import MetricChart, Point
from .curvature import CurvatureData

logger = logging.getLogger(__name__)


def random_coefficient(chart: MetricChart, rng: random.Random) -> sympy.Expr:
    """Smooth coefficient built from 1, x^a, x^a x^b, sin and cos of the coordinates."""
    xs = chart.symbols
    terms = [sympy.S.One, *xs]
    terms += [x * y for x, y in itertools.combinations_with_replacement(xs, 2)]
    terms += [sympy.sin(x) for x in xs] + [sympy.cos(x) for x in xs]
    picked = rng.sample(terms, k=min(3, len(terms)))
    return sum(
        (sympy.Rational(rng.randint(-5, 5) or 1, rng.randint(1, 4)) * t for t in picked),
        sympy.S.Zero,
    )


def _christoffel_symmetry(data: CurvatureData) -> list[sympy.Expr]:
    G = data.christoffel
    n = data.dim
    pairs = list(itertools.combinations(range(n), 2))
    return [G[c, a, b] - G[c, b, a] for c in range(n) for a, b in pairs]


def _antisymmetry_ab(data: CurvatureData) -> list[sympy.Expr]:
    R = data.riemann
    n = data.dim
    return [
        R[a, b, k, l] + R[b, a, k, l]
        for a, b in itertools.combinations(range(n), 2)
        for k, l in itertools.product(range(n), repeat=2)
    ]


def _antisymmetry_kl(data: CurvatureData) -> list[sympy.Expr]:
    Q = data.raised
    n = data.dim
    return [
        Q[a, b, k, l] + Q[a, b, l, k]
        for a, b in itertools.product(range(n), repeat=2)
        for k, l in itertools.combinations_with_replacement(range(n), 2)
    ]


def _bianchi(data: CurvatureData) -> list[sympy.Expr]:
    R = data.riemann
    n = data.dim
    return [
        R[a, b, k, l] + R[b, k, a, l] + R[k, a, b, l]
        for a, b, k in itertools.combinations(range(n), 3)
        for l in range(n)
    ]


def _metric_compatibility(data: CurvatureData) -> list[sympy.Expr]:
    chart = data.chart
    n = data.dim
    xs = chart.symbols
    g = chart.metric_matrix()
    G = data.christoffel
    out = []
    for a, b, c in itertools.product(range(n), repeat=3):
        value = sympy.diff(g[b, c], xs[a])
        for d in range(n):
            value -= G[d, a, b] * g[d, c] + G[d, a, c] * g[b, d]
        out.append(value)
    return out


def _covariant(data: CurvatureData, a: int, components: Sequence[sympy.Expr]) -> list[sympy.Expr]:
    """Components of ∇_a applied to the 1-form Σ u_k ξ^k."""
    xs = data.chart.symbols
    G = data.christoffel
    n = data.dim
    return [
        sympy.diff(components[k], xs[a]) - sum((G[l, a, k] * components[l] for l in range(n)), 0)
        for k in range(n)
    ]


def _commutator(data: CurvatureData, rng: random.Random) -> list[sympy.Expr]:
    n = data.dim
    R = data.riemann
    u = [random_coefficient(data.chart, rng) for _ in range(n)]
    out = []
    for a, b in itertools.combinations(range(n), 2):
        ab = _covariant(data, a, _covariant(data, b, u))
        ba = _covariant(data, b, _covariant(data, a, u))
        for k in range(n):
            expected = -sum((R[a, b, k, l] * u[l] for l in range(n)), sympy.S.Zero)
            out.append(ab[k] - ba[k] - expected)
    return out


def _scale(data: CurvatureData, point: Point) -> float:
    values = data.at(point)
    return float(max(np.max(np.abs(values.riemann), initial=0.0), 1.0))


def verify_curvature_identities(
    data: CurvatureData,
    points: Sequence[Point] | None = None,
    settings: CheckSettings | None = None,
) -> RunReport:
    """Residuals of the connection and curvature identities at sample points.

    Checks symmetry of Γ, antisymmetry of R_abk^l in (a, b) and of R_ab^{kl} in (k, l), the
    first Bianchi identity, the commutator relation ``[∇_a, ∇_b] = -R_abk^l ξ^k ∂_l`` on
    1-forms with random coefficients, and metric compatibility.

    :param data: Curvature to verify.
    :param points: Interior points; defaults to ``settings.samples`` seeded random points.
    :param settings: Tolerance, sample count and seed.
    :return: Report; a failing check names the identity and the worst point.
    """
    settings = settings or CheckSettings()
    chart = data.chart
    if points is None:
        points = chart.sample_points(settings.samples, settings.seed)
    rng = random.Random(settings.seed)
    identities = {
        "christoffel-symmetry": _christoffel_symmetry(data),
        "riemann-antisymmetry-ab": _antisymmetry_ab(data),
        "riemann-antisymmetry-kl": _antisymmetry_kl(data),
        "bianchi": _bianchi(data),
        "commutator-1forms": _commutator(data, rng),
        "metric-compatibility": _metric_compatibility(data),
    }
    report = RunReport(
        command="geometry",
        inputs={"chart": chart.name, "points": len(points), "seed": settings.seed},
    )
    scales = ordered_map(lambda p: _scale(data, p), points)
    for name, trees in identities.items():
        residuals = ordered_map(
            lambda p, trees=trees: max((abs(v) for v in evaluate_many(trees, p)), default=0.0),
            points,
        )
        worst = int(np.argmax(residuals)) if residuals else 0
        residual = residuals[worst] if residuals else 0.0
        ok = all(settings.within(r, s) for r, s in zip(residuals, scales, strict=True))
        detail = f"worst at {points[worst]}" if points else ""
        report.record(
            f"{chart.name}:{name}",
            ok,
            residual=residual,
            tolerance=settings.tolerance,
            detail=detail,
        )
        if not ok:
            logger.warning("%s: %s fails, residual %.3g at %s", chart.name, name, residual, detail)
    return report
