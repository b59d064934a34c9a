"""Euler characteristic by the Gauss-Bonnet-Chern integral, along two paths.

- Pfaffian path: ``Ω^{kl} = ½ R_ab^{kl} ξ^a ξ^b`` is put into the odd Gaussian
  ``exp(-½ Ω^{kl} τ_k τ_l)``; the Berezin integral over τ gives ``Pf(Ω)``, whose top
  ξ-coefficient (times ``(-1)^m (2π)^{-m} √g``) is the Euler density.
- Supertrace path: the symbol ``exp(-p² - ½ R_ab^{kl} ξ^a ξ^b θ_k θ_l)`` is integrated over
  T*M with the factor ``iⁿ/(2π)ⁿ``; the momentum integral is done in closed form.

The Grassmann algebra runs once per chart with sympy coefficients; the resulting scalar
density is compiled and integrated by Gauss-Legendre quadrature.

Dependencies: itertools, logging, math, typing, numpy, sympy, superweyl.expr, superweyl.fiber,
superweyl.geometry, superweyl.grassmann, superweyl.models, superweyl.scalars.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable, Sequence
from typing import Any

import numpy as np
import sympy

from ..constants import EULER_DENSITY_TOLERANCE, TAU, THETA, XI, Parity
from ..exceptions import UnsupportedSymbolError
from ..expr import evaluate_many
from ..fiber import FiberContext
from ..geometry import CurvatureData, Manifold, MetricChart, Point, integrate_box
from ..geometry.curvature import tidy
from ..geometry.quadrature import expression_density
from ..grassmann import GeneratorSet, Multivector, berezin_integral, exp_even_nilpotent
from ..models import ChartContribution, EulerReport, QuadratureSettings
from ..scalars import NUMERIC, SYMBOLIC, ScalarRing
from .symbol import momentum_symbols, tstar_gens

logger = logging.getLogger(__name__)

FiberSymbol = Callable[[CurvatureData], Multivector]

_CROSS_CHECK_POINTS = 3


def _xi_tau_gens(n: int) -> GeneratorSet:
    return GeneratorSet.from_blocks(
        [f"{XI}{k}" for k in range(1, n + 1)], [f"{TAU}{k}" for k in range(1, n + 1)]
    )


def pfaffian_top(raised: Any, n: int, ring: ScalarRing = SYMBOLIC) -> Any:
    """Coefficient of ``ξ¹⋯ξⁿ`` in ``Pf(Ω)`` with ``Ω^{kl} = ½ R_ab^{kl} ξ^a ξ^b``.

    :param raised: ``R_ab^{kl}`` indexed ``[a, b, k, l]``.
    :param n: Dimension.
    :param ring: ``SYMBOLIC`` for expression tensors, ``NUMERIC`` for values at a point.
    """
    gens = _xi_tau_gens(n)
    xi = [Multivector.generator(gens, f"{XI}{a}", ring) for a in range(1, n + 1)]
    tau_names = [f"{TAU}{k}" for k in range(1, n + 1)]
    tau = [Multivector.generator(gens, name, ring) for name in tau_names]
    half = ring.rational(1, 2)
    quadratic = Multivector.zero(gens, ring)
    for k, l in itertools.permutations(range(n), 2):
        omega = Multivector.zero(gens, ring)
        for a, b in itertools.permutations(range(n), 2):
            value = ring.coerce(raised[a, b, k, l])
            if not ring.is_zero(value):
                omega = omega + (xi[a] * xi[b]).scale(half * value)
        if not omega.is_zero:
            quadratic = quadratic - (omega * tau[k] * tau[l]).scale(half)
    pf = berezin_integral(exp_even_nilpotent(quadratic), tau_names)
    return pf.coefficient([f"{XI}{a}" for a in range(1, n + 1)])


def _volume_factor(chart: MetricChart) -> sympy.Expr:
    return sympy.sqrt(chart.metric_matrix().det())


def euler_density(data: CurvatureData, orientation: int = 1) -> sympy.Expr:
    """Euler density in chart coordinates, ready for ``∫ dⁿx``; zero in odd dimension."""
    n = data.dim
    if n % 2:
        return sympy.S.Zero
    m = n // 2
    top = tidy(sympy.expand(pfaffian_top(data.raised, n)))
    if top == 0:
        return sympy.S.Zero
    factor = orientation * sympy.Integer(-1) ** m / (2 * sympy.pi) ** m
    return factor * _volume_factor(data.chart) * top


def euler_density_at(data: CurvatureData, point: Point, orientation: int = 1) -> float:
    """Euler density at one point, with Grassmann arithmetic in the numeric ring."""
    n = data.dim
    if n % 2:
        return 0.0
    values = data.at(point)
    top = pfaffian_top(values.raised, n, NUMERIC)
    top_value = complex(top.evaluate(1.0)) if top else 0j
    volume = math.sqrt(float(np.linalg.det(values.metric)))
    m = n // 2
    return orientation * (-1) ** m * volume * top_value.real / (2 * math.pi) ** m


def curvature_gaussian(data: CurvatureData) -> Multivector:
    """``exp(-½ R_ab^{kl} ξ^a ξ^b θ_k θ_l)`` over (ξ, θ)."""
    n = data.dim
    gens = tstar_gens(n)
    xi = [Multivector.generator(gens, f"{XI}{a}", SYMBOLIC) for a in range(1, n + 1)]
    theta = [Multivector.generator(gens, name, SYMBOLIC) for name in gens.names[n:]]
    exponent = Multivector.zero(gens, SYMBOLIC)
    for a, b in itertools.permutations(range(n), 2):
        for k, l in itertools.permutations(range(n), 2):
            value = data.raised[a, b, k, l]
            if value != 0:
                exponent = exponent - (xi[a] * xi[b] * theta[k] * theta[l]).scale(value / 2)
    return exp_even_nilpotent(exponent)


def _check_fiber(fiber: Multivector, chart: MetricChart) -> None:
    if fiber.gens != tstar_gens(chart.dim) or fiber.ring is not SYMBOLIC:
        raise UnsupportedSymbolError("the fiber factor must be a sympy Multivector over (ξ, θ)")
    if fiber.parity() is not Parity.EVEN:
        raise UnsupportedSymbolError("the fiber factor of a Gaussian symbol must be even")
    momenta = set(momentum_symbols(chart))
    for _, coefficient in fiber.items():
        if momenta & sympy.sympify(coefficient).free_symbols:
            raise UnsupportedSymbolError(
                "only the factor exp(-p²) may depend on momenta; found them in the fiber part"
            )


def supertrace_density(
    data: CurvatureData, fiber: FiberSymbol | None = None, orientation: int = 1
) -> sympy.Expr:
    """x-density of ``iⁿ/(2π)ⁿ ∫ exp(-p²) F(ξ, θ)`` after the p- and Berezin integrals.

    :param data: Curvature of the chart.
    :param fiber: Builds ``F`` from the curvature; defaults to :func:`curvature_gaussian`.
    :param orientation: ``±1``.
    :raises UnsupportedSymbolError: If ``F`` is not an even p-independent (ξ, θ) element.
    """
    n = data.dim
    chart = data.chart
    factor = (fiber or curvature_gaussian)(data)
    _check_fiber(factor, chart)
    measure = FiberContext(n=n).measure(XI, THETA)
    top = tidy(sympy.expand(berezin_integral(factor, measure).scalar_part()))
    if top == 0:
        return sympy.S.Zero
    # ∫ dⁿp exp(-g^{ab} p_a p_b) = π^{n/2} √g
    prefactor = orientation * sympy.I**n / (2 * sympy.pi) ** n * sympy.pi ** sympy.Rational(n, 2)
    return prefactor * _volume_factor(chart) * top


def _integrate(
    chart: MetricChart, density: sympy.Expr, settings: QuadratureSettings
) -> complex:
    if density == 0:
        return 0j
    return integrate_box(expression_density(density, chart.coordinates), chart.ranges, settings)


def _cross_check(data: CurvatureData, density: sympy.Expr, orientation: int) -> float:
    """Largest relative gap between the compiled density and the numeric Pfaffian path."""
    chart = data.chart
    worst = 0.0
    for point in chart.sample_points(_CROSS_CHECK_POINTS):
        compiled = evaluate_many([density], point)[0] if density != 0 else 0.0
        direct = euler_density_at(data, point, orientation)
        gap = abs(compiled - direct) / max(1.0, abs(direct))
        if gap > EULER_DENSITY_TOLERANCE:
            logger.warning(
                "%s: symbolic and numeric Euler densities differ at %s (%.12g vs %.12g)",
                chart.name,
                point,
                compiled,
                direct,
            )
        worst = max(worst, gap)
    return worst


def _report(
    manifold: Manifold,
    settings: QuadratureSettings,
    contributions: Sequence[tuple[str, complex]],
    note: str | None = None,
    density_mismatch: float = 0.0,
) -> EulerReport:
    total = sum((value for _, value in contributions), 0j)
    chi = total.real
    expected = manifold.expected_euler
    return EulerReport(
        manifold=manifold.name,
        chi_computed=chi,
        chi_expected=expected,
        abs_error=abs(chi - expected) if expected is not None else None,
        imag_residual=abs(total.imag) / max(1.0, abs(chi)),
        density_mismatch=density_mismatch,
        nodes_per_dim=settings.nodes_per_dim,
        charts=[ChartContribution(label=label, contribution=v.real) for label, v in contributions],
        note=note,
    )


def euler_characteristic(
    manifold: Manifold, settings: QuadratureSettings | None = None
) -> EulerReport:
    """Gauss-Bonnet-Chern integral of the Pfaffian density over every chart.

    :param manifold: Spec whose charts tile the manifold.
    :param settings: Quadrature nodes per axis and chunk size.
    :return: Report with per-chart contributions; odd dimension gives 0 with a note.
    :raises EvaluationDomainError: If the density is not finite at a quadrature node.
    """
    settings = settings or QuadratureSettings()
    if manifold.dim % 2:
        logger.info("%s has odd dimension %d; χ = 0", manifold.name, manifold.dim)
        return _report(
            manifold,
            settings,
            [(chart.name, 0j) for chart in manifold.charts],
            note=f"odd dimension {manifold.dim}: the Euler characteristic vanishes",
        )
    orientation = manifold.orientation_sign
    contributions = []
    mismatch = 0.0
    for chart in manifold.charts:
        data = CurvatureData.from_chart(chart)
        density = euler_density(data, orientation)
        mismatch = max(mismatch, _cross_check(data, density, orientation))
        value = _integrate(chart, density, settings)
        logger.debug("%s contributes %.12g", chart.name, value.real)
        contributions.append((chart.name, value))
    report = _report(manifold, settings, contributions, density_mismatch=mismatch)
    logger.info("χ(%s) ≈ %.10f", manifold.name, report.chi_computed)
    return report


def supertrace_gaussian(
    manifold: Manifold,
    settings: QuadratureSettings | None = None,
    fiber: FiberSymbol | None = None,
) -> complex:
    """Supertrace integral ``iⁿ/(2π)ⁿ ∫_{T*M} exp(-p²) F(ξ, θ)`` over all charts.

    With the default ``F = exp(-½ R_ab^{kl} ξ^a ξ^b θ_k θ_l)`` the real part is the Euler
    characteristic and the imaginary part vanishes.

    :param manifold: Spec whose charts tile the manifold.
    :param settings: Quadrature nodes per axis and chunk size.
    :param fiber: Builds ``F`` per chart from its curvature.
    :raises UnsupportedSymbolError: If ``F`` leaves the Gaussian family.
    """
    settings = settings or QuadratureSettings()
    orientation = manifold.orientation_sign
    total = 0j
    for chart in manifold.charts:
        data = CurvatureData.from_chart(chart)
        total += _integrate(chart, supertrace_density(data, fiber, orientation), settings)
    logger.info("supertrace over %s: %s", manifold.name, total)
    return total
