"""Weitzenböck formula on forms and its numeric verification.

``□ = Δ + E`` where the curvature endomorphism ``E`` takes one of three equivalent forms:

- ``weitz2``: ``Ric_a^b ξ^a ∂_b + ½ R_ab^{kl} ξ^a ξ^b ∂_k ∂_l``
- ``weitz1``: ``Ric_a^b ξ^a ∂_b + R_a^k_b^l ξ^a ξ^b ∂_k ∂_l``
- ``ordered``: ``-R_a^k_b^l ξ^a ∂_k ξ^b ∂_l``

(``∂_k`` abbreviates ``∂/∂ξ^k``.) The three agree by the first Bianchi identity.

Like :mod:`superweyl.operators.differential`, the endomorphism and the checks take the
:class:`~superweyl.geometry.CurvatureData` of a chart; the test-field builders take the chart.

Dependencies: itertools, numpy, sympy, superweyl.models, superweyl.operators.
"""

from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Callable, Sequence
from typing import Any

import numpy as np
import sympy

from .._parallel import ordered_map
from ..constants import WeitzenbockVariant
from ..expr import evaluate_many
from ..geometry import CurvatureData, MetricChart, Point, random_coefficient
from ..models import CheckSettings, RunReport
from .differential import (
    bochner_laplacian,
    codifferential,
    dirac_operator,
    exterior_d,
    hodge_laplacian,
)
from .forms import FormField, FormOperator, xi_deriv, xi_mult

logger = logging.getLogger(__name__)


def _weitz2(data: CurvatureData) -> sympy.Matrix:
    n = data.dim
    mult = [xi_mult(n, a) for a in range(n)]
    deriv = [xi_deriv(n, a) for a in range(n)]
    matrix = sympy.zeros(1 << n, 1 << n)
    for a, b in itertools.product(range(n), repeat=2):
        if data.ricci[a, b] != 0:
            matrix += data.ricci[a, b] * (mult[a] * deriv[b])
    for a, b in itertools.combinations(range(n), 2):
        for k, l in itertools.combinations(range(n), 2):
            # ½ Σ over all index pairs equals 2 Σ over a<b, k<l
            value = data.raised[a, b, k, l]
            if value != 0:
                matrix += 2 * value * (mult[a] * mult[b] * deriv[k] * deriv[l])
    return matrix


def _weitz1(data: CurvatureData) -> sympy.Matrix:
    n = data.dim
    mult = [xi_mult(n, a) for a in range(n)]
    deriv = [xi_deriv(n, a) for a in range(n)]
    matrix = sympy.zeros(1 << n, 1 << n)
    for a, b in itertools.product(range(n), repeat=2):
        if data.ricci[a, b] != 0:
            matrix += data.ricci[a, b] * (mult[a] * deriv[b])
    for a, k, b, l in itertools.product(range(n), repeat=4):
        if a == b or k == l:
            continue
        value = data.mixed(a, k, b, l)
        if value != 0:
            matrix += value * (mult[a] * mult[b] * deriv[k] * deriv[l])
    return matrix


def _ordered(data: CurvatureData) -> sympy.Matrix:
    n = data.dim
    mult = [xi_mult(n, a) for a in range(n)]
    deriv = [xi_deriv(n, a) for a in range(n)]
    matrix = sympy.zeros(1 << n, 1 << n)
    for a, k, b, l in itertools.product(range(n), repeat=4):
        value = data.mixed(a, k, b, l)
        if value != 0:
            matrix -= value * (mult[a] * deriv[k] * mult[b] * deriv[l])
    return matrix


_ENDOMORPHISMS: dict[WeitzenbockVariant, Callable[[CurvatureData], sympy.Matrix]] = {
    WeitzenbockVariant.WEITZ2: _weitz2,
    WeitzenbockVariant.WEITZ1: _weitz1,
    WeitzenbockVariant.ORDERED: _ordered,
}


def curvature_endomorphism(
    data: CurvatureData, variant: WeitzenbockVariant | str = WeitzenbockVariant.WEITZ2
) -> sympy.Matrix:
    """Fiber matrix of the curvature term ``□ - Δ`` in the requested form."""
    return _ENDOMORPHISMS[WeitzenbockVariant(variant)](data)


def weitzenbock_rhs(
    data: CurvatureData, variant: WeitzenbockVariant | str = WeitzenbockVariant.WEITZ2
) -> FormOperator:
    """Bochner Laplacian plus the curvature endomorphism."""
    endomorphism = curvature_endomorphism(data, variant)
    return bochner_laplacian(data) + FormOperator.multiplication(data.chart, endomorphism)


def _coefficients(chart: MetricChart) -> list[sympy.Expr]:
    xs = chart.symbols
    out: list[sympy.Expr] = [sympy.S.One, *xs]
    out += [x * y for x, y in itertools.combinations_with_replacement(xs, 2)]
    out += [sympy.sin(x) for x in xs] + [sympy.cos(x) for x in xs]
    return out


def _monomials(n: int) -> list[tuple[int, ...]]:
    return [tuple(i for i in range(n) if mask >> i & 1) for mask in range(1 << n)]


def standard_test_fields(chart: MetricChart) -> list[FormField]:
    """Coefficients 1, x^a, x^a x^b, sin x^a, cos x^a, each times every ξ-monomial."""
    return [
        FormField.monomial(chart, coefficient, indices)
        for indices in _monomials(chart.dim)
        for coefficient in _coefficients(chart)
    ]


def random_test_fields(chart: MetricChart, count: int, seed: int = 0) -> list[FormField]:
    """Inhomogeneous forms with a random smooth coefficient on every monomial."""
    rng = random.Random(seed)
    fields = []
    for _ in range(count):
        components = [random_coefficient(chart, rng) for _ in range(1 << chart.dim)]
        fields.append(FormField(chart, components))
    return fields


def _worst(
    pairs: Sequence[tuple[FormField, FormField]],
    points: Sequence[Point],
    settings: CheckSettings,
) -> tuple[bool, float, str]:
    """Max of ``|residual|`` over fields and points, relative to ``|reference|``."""

    def at_point(point: Point) -> tuple[bool, float, int]:
        ok = True
        worst, where = 0.0, -1
        for index, (residual, reference) in enumerate(pairs):
            value = float(np.max(np.abs(residual.evaluate(point)), initial=0.0))
            scale = float(np.max(np.abs(reference.evaluate(point)), initial=0.0))
            ok = ok and settings.within(value, scale)
            if value > worst or where < 0:
                worst, where = value, index
        return ok, worst, where

    results = ordered_map(at_point, points)
    ok = all(r[0] for r in results)
    if not results:
        return ok, 0.0, ""
    position = int(np.argmax([r[1] for r in results]))
    _, worst, field = results[position]
    detail = f"field {pairs[field][1]} at {points[position]}" if field >= 0 else ""
    return ok, worst, detail


def _record(
    report: RunReport,
    name: str,
    pairs: Sequence[tuple[FormField, FormField]],
    points: Sequence[Point],
    settings: CheckSettings,
) -> None:
    ok, residual, detail = _worst(pairs, points, settings)
    report.record(
        name, ok, residual=residual, tolerance=settings.tolerance, detail=detail if not ok else ""
    )
    if not ok:
        logger.warning("%s fails: residual %.3g, %s", name, residual, detail)


def _setup(
    data: CurvatureData,
    fields: Sequence[FormField] | None,
    points: Sequence[Point] | None,
    settings: CheckSettings | None,
) -> tuple[list[FormField], list[Point], CheckSettings]:
    settings = settings or CheckSettings()
    chart = data.chart
    if fields is None:
        fields = standard_test_fields(chart)
    if points is None:
        points = chart.sample_points(settings.samples, settings.seed)
    return list(fields), list(points), settings


def check_weitzenbock(
    data: CurvatureData,
    fields: Sequence[FormField] | None = None,
    points: Sequence[Point] | None = None,
    settings: CheckSettings | None = None,
    variant: WeitzenbockVariant | str = WeitzenbockVariant.WEITZ2,
) -> RunReport:
    """Residual of ``□u - (Δ + E)u`` over test fields and interior points.

    :param data: Curvature of the chart.
    :param fields: Test fields; defaults to :func:`standard_test_fields`.
    :param points: Evaluation points; defaults to seeded random interior points.
    :param settings: Tolerance, sample count and seed.
    :param variant: Form of the curvature term.
    :return: Report with one check; a failure names the worst field and point.
    """
    fields, points, settings = _setup(data, fields, points, settings)
    chart = data.chart
    box = hodge_laplacian(data)
    rhs = weitzenbock_rhs(data, variant)
    pairs = [(box(u) - rhs(u), u) for u in fields]
    report = RunReport(
        command="weitzenbock",
        inputs={"chart": chart.name, "fields": len(fields), "points": len(points)},
    )
    name = f"{chart.name}:weitzenbock-{WeitzenbockVariant(variant)}"
    _record(report, name, pairs, points, settings)
    return report


def check_variants(
    data: CurvatureData,
    points: Sequence[Point] | None = None,
    settings: CheckSettings | None = None,
) -> RunReport:
    """Pointwise agreement of the three curvature endomorphisms."""
    settings = settings or CheckSettings()
    chart = data.chart
    if points is None:
        points = chart.sample_points(settings.samples, settings.seed)
    reference = curvature_endomorphism(data, WeitzenbockVariant.WEITZ2)
    report = RunReport(command="weitzenbock", inputs={"chart": chart.name})
    for variant in (WeitzenbockVariant.WEITZ1, WeitzenbockVariant.ORDERED):
        difference = list(curvature_endomorphism(data, variant) - reference)
        entries = list(reference)

        def at_point(point: Point, difference: list[Any] = difference) -> tuple[float, float]:
            values = np.abs(evaluate_many(difference + entries, point))
            half = len(difference)
            return float(values[:half].max(initial=0.0)), float(values[half:].max(initial=0.0))

        results = ordered_map(at_point, points)
        residual = max((r for r, _ in results), default=0.0)
        ok = all(settings.within(r, s) for r, s in results)
        report.record(
            f"{chart.name}:{variant}-vs-weitz2",
            ok,
            residual=residual,
            tolerance=settings.tolerance,
        )
    return report


def check_form_complex(
    data: CurvatureData,
    fields: Sequence[FormField] | None = None,
    points: Sequence[Point] | None = None,
    settings: CheckSettings | None = None,
) -> RunReport:
    """``d² = 0``, ``δ² = 0``, ``d□ = □d`` and ``D² = □`` applied to test fields."""
    fields, points, settings = _setup(data, fields, points, settings)
    chart = data.chart
    d = exterior_d(data)
    delta = codifferential(data)
    box = hodge_laplacian(data)
    dirac = dirac_operator(data)
    report = RunReport(
        command="weitzenbock",
        inputs={"chart": chart.name, "fields": len(fields), "points": len(points)},
    )
    images = [box(u) for u in fields]
    checks: dict[str, list[tuple[FormField, FormField]]] = {
        "d-squared": [(d(d(u)), d(u)) for u in fields],
        "delta-squared": [(delta(delta(u)), delta(u)) for u in fields],
        "d-commutes-with-box": [
            (d(bu) - box(d(u)), bu) for u, bu in zip(fields, images, strict=True)
        ],
        "dirac-squared": [
            (dirac(dirac(u)) - bu, bu) for u, bu in zip(fields, images, strict=True)
        ],
    }
    for name, pairs in checks.items():
        _record(report, f"{chart.name}:{name}", pairs, points, settings)
    return report
