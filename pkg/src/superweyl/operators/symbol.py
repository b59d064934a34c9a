"""Full symbol of the Hodge Laplacian at a point and its fiber-level verification.

At a point with curvature frozen to constants,

    σ(□) = -ħ⁻²(g^{ab} p_a p_b + ½ R_ab^{kl} ξ^a ξ^b θ_k θ_l)
           + (i/ħ)(1 - 2r) Ric_a^b ξ^a θ_b + r(1 - r) R

The momentum-free part is ``σ(A) + ½σ(B)`` for the fiber operators
``A = Ric_a^b ξ^a ∂/∂ξ^b`` and ``B = R_ab^{kl} ξ^a ξ^b ∂/∂ξ^k ∂/∂ξ^l``; both symbols are
checked against their closed forms by quantizing through :mod:`superweyl.fiber`.

Dependencies: dataclasses, fractions, itertools, logging, random, typing, numpy, sympy,
superweyl.fiber, superweyl.geometry, superweyl.grassmann, superweyl.models, superweyl.scalars.
"""

from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np
import sympy

from ..constants import NUMERIC_SYMBOL_TOLERANCE, THETA, XI, HbarMode
from ..exceptions import ChartMismatchError
from ..fiber import FiberContext, FiberOperator, generator_operators, symbol_of
from ..geometry import CurvatureData
from ..geometry.curvature import tidy
from ..grassmann import Multivector
from ..models import RunReport
from ..scalars import EXACT, NUMERIC, rationalize

logger = logging.getLogger(__name__)

_RATIONAL_TOL = 1e-12


@dataclass(frozen=True)
class LaplacianSymbol:
    """σ(□) at one point: a quadratic form in ``p`` plus a fiber symbol over (ξ, θ)."""

    point: dict[str, float]
    ctx: FiberContext
    momentum_metric: np.ndarray
    fiber: Multivector
    ricci: np.ndarray
    raised: np.ndarray

    @property
    def exact(self) -> bool:
        return self.ctx.ring is EXACT

    def at_momentum(self, p: Sequence[float]) -> Multivector:
        """Symbol with the momenta substituted; exact rings need rational momenta."""
        ring = self.ctx.ring
        n = self.ctx.n
        total = ring.zero()
        for a, b in itertools.product(range(n), repeat=2):
            value = self.momentum_metric[a, b] * p[a] * p[b]
            if ring is EXACT:
                value = rationalize(float(value)) or Fraction(float(value))
            total = total + ring.coerce(value)
        momentum = Multivector.scalar(self.fiber.gens, -total * self.ctx.hbar(-2), ring)
        return self.fiber + momentum

    def hbar_coefficient(self, power: int) -> Multivector:
        """Fiber terms multiplying ``ħ^power``; needs the formal Planck mode."""
        return self.fiber.map_coefficients(lambda c: c.coefficient(power))

    def __str__(self) -> str:
        n = self.ctx.n
        quadratic = " + ".join(
            f"({self.momentum_metric[a, b]:.6g}) p{a + 1} p{b + 1}"
            for a, b in itertools.product(range(n), repeat=2)
            if self.momentum_metric[a, b] != 0
        )
        return f"-hbar^-2 ({quadratic or '0'}) + [{self.fiber}]"


def _exact_array(trees: np.ndarray, values: np.ndarray) -> np.ndarray | None:
    """Rational tensor when every symbolic component is a rational constant.

    Floats from spec parameters are read as decimals. A component that still depends on
    the coordinates, or involves an irrational constant, makes the whole tensor inexact.
    """
    out = np.empty(trees.shape, dtype=object)
    for index, tree in np.ndenumerate(trees):
        constant = tidy(sympy.nsimplify(sympy.sympify(tree), rational=True))
        if constant.free_symbols or not constant.is_Rational:
            return None
        value = Fraction(int(constant.p), int(constant.q))
        numeric = float(values[index])
        if abs(float(value) - numeric) > _RATIONAL_TOL * max(1.0, abs(numeric)):
            return None
        out[index] = value
    return out


def ricci_symbol(ricci: np.ndarray, ctx: FiberContext) -> Multivector:
    """Σ Ric_a^b ξ^a θ_b."""
    gens = ctx.symbol_gens
    ring = ctx.ring
    result = Multivector.zero(gens, ring)
    for a, b in itertools.product(range(ctx.n), repeat=2):
        if ricci[a, b] != 0:
            names = [f"{XI}{a + 1}", f"{THETA}{b + 1}"]
            result = result + Multivector.monomial(gens, names, ring.coerce(ricci[a, b]), ring)
    return result


def riemann_symbol(raised: np.ndarray, ctx: FiberContext) -> Multivector:
    """Σ R_ab^{kl} ξ^a ξ^b θ_k θ_l."""
    gens = ctx.symbol_gens
    ring = ctx.ring
    result = Multivector.zero(gens, ring)
    for a, b, k, l in itertools.product(range(ctx.n), repeat=4):
        if a == b or k == l or raised[a, b, k, l] == 0:
            continue
        names = [f"{XI}{a + 1}", f"{XI}{b + 1}", f"{THETA}{k + 1}", f"{THETA}{l + 1}"]
        value = ring.coerce(raised[a, b, k, l])
        result = result + Multivector.monomial(gens, names, value, ring)
    return result


def contract_ricci(raised: np.ndarray) -> np.ndarray:
    """Ric_a^b = R_ka^{kb} of a raised curvature array."""
    n = raised.shape[0]
    out = np.empty((n, n), dtype=object)
    for a, b in itertools.product(range(n), repeat=2):
        out[a, b] = sum((raised[k, a, k, b] for k in range(n)), 0)
    return out


def _trace(matrix: np.ndarray) -> Any:
    return sum((matrix[a, a] for a in range(matrix.shape[0])), 0)


def fiber_part(ricci: np.ndarray, raised: np.ndarray, ctx: FiberContext) -> Multivector:
    """Momentum-free part of σ(□) for constant curvature inputs."""
    ring = ctx.ring
    r = ctx.r_scalar
    one = ring.one()
    scalar = ring.coerce(_trace(ricci))
    result = riemann_symbol(raised, ctx).scale(ring.rational(-1, 2) * ctx.hbar(-2))
    result = result + ricci_symbol(ricci, ctx).scale(ctx.i_over_hbar() * (one - r - r))
    return result + Multivector.scalar(ctx.symbol_gens, r * (one - r) * scalar, ring)


def ricci_operator(ricci: np.ndarray, ctx: FiberContext) -> FiberOperator:
    """A = Ric_a^b ξ^a ∂/∂ξ^b on Λ."""
    mult, deriv = generator_operators(ctx)
    result = FiberOperator.zero(ctx)
    for a, b in itertools.product(range(ctx.n), repeat=2):
        if ricci[a, b] != 0:
            result = result + (mult[a] @ deriv[b]).scale(ctx.ring.coerce(ricci[a, b]))
    return result


def riemann_operator(raised: np.ndarray, ctx: FiberContext) -> FiberOperator:
    """B = R_ab^{kl} ξ^a ξ^b ∂/∂ξ^k ∂/∂ξ^l on Λ."""
    mult, deriv = generator_operators(ctx)
    result = FiberOperator.zero(ctx)
    for a, b, k, l in itertools.product(range(ctx.n), repeat=4):
        if a == b or k == l or raised[a, b, k, l] == 0:
            continue
        term = mult[a] @ mult[b] @ deriv[k] @ deriv[l]
        result = result + term.scale(ctx.ring.coerce(raised[a, b, k, l]))
    return result


def _residual(difference: Multivector) -> float:
    return max((abs(c.evaluate(1.0)) for _, c in difference.items()), default=0.0)


def _scale(value: Multivector) -> float:
    return max(_residual(value), 1.0)


def verify_hodge_symbol_identities(
    ricci: np.ndarray, raised: np.ndarray, ctx: FiberContext
) -> RunReport:
    """Symbols of A and B against their closed forms, plus ``σ(A + ½B)``.

    ``ricci`` enters A and σA; B and σB use the contraction of ``raised``. The combined
    check compares with :func:`fiber_part` built from that contraction.

    :param ricci: n x n array of Ric_a^b (rationals for the exact ring).
    :param raised: n x n x n x n array of R_ab^{kl}, antisymmetric in (a, b) and in (k, l).
    :param ctx: Fiber context fixing r, ring and Planck mode.
    """
    ring = ctx.ring
    r = ctx.r_scalar
    i_hbar = ctx.i_over_hbar()
    contracted = contract_ricci(raised)
    gens = ctx.symbol_gens

    def scalar(value: Any) -> Multivector:
        return Multivector.scalar(gens, value, ring)

    A = ricci_operator(ricci, ctx)
    B = riemann_operator(raised, ctx)
    expected_a = ricci_symbol(ricci, ctx).scale(i_hbar) + scalar(r * ring.coerce(_trace(ricci)))
    expected_b = (
        riemann_symbol(raised, ctx).scale(i_hbar * i_hbar)
        - ricci_symbol(contracted, ctx).scale(i_hbar * r * ring.rational(4))
        - scalar(ring.rational(2) * r * r * ring.coerce(_trace(contracted)))
    )
    cases = {
        "sigma-A": (symbol_of(A, ctx), expected_a),
        "sigma-B": (symbol_of(B, ctx), expected_b),
        "sigma-box-fiber": (
            symbol_of(ricci_operator(contracted, ctx) + B.scale(ring.rational(1, 2)), ctx),
            fiber_part(contracted, raised, ctx),
        ),
    }
    report = RunReport(
        command="laplacian-symbol",
        inputs={"n": ctx.n, "r": str(ctx.r), "ring": ring.name},
    )
    for name, (computed, expected) in cases.items():
        residual = _residual(computed - expected)
        if ring is NUMERIC:
            ok = residual <= NUMERIC_SYMBOL_TOLERANCE * _scale(expected)
        else:
            ok = computed == expected
        report.record(
            name,
            ok,
            residual=residual,
            tolerance=NUMERIC_SYMBOL_TOLERANCE if ring is NUMERIC else 0.0,
            detail="" if ok else f"computed {computed}, expected {expected}",
        )
        if not ok:
            logger.warning("%s identity fails (n=%d, r=%s)", name, ctx.n, ctx.r)
    return report


def hodge_symbol(
    data: CurvatureData,
    point: Mapping[str, float],
    r: Fraction | int | str = 0,
    hbar_mode: HbarMode | str = HbarMode.FORMAL,
    hbar_value: Fraction | int | str = 1,
) -> LaplacianSymbol:
    """σ(□) at a point.

    The symbol is exact when the symbolic Ricci and Riemann components are rational
    constants on the chart; otherwise it is built in the numeric ring from the values at
    the point.

    :param data: Curvature of the chart.
    :param point: Coordinates of the point.
    :param r: Odd ordering parameter in [0, 1].
    :param hbar_mode: Keep ħ formal or substitute ``hbar_value``.
    :param hbar_value: Value of ħ in numeric Planck mode.
    :raises ChartMismatchError: If the point is outside the chart box.
    """
    chart = data.chart
    if set(point) != set(chart.coordinates) or not chart.contains(point):
        raise ChartMismatchError(f"point {dict(point)} lies outside chart {chart.name}")
    values = data.at(point)
    ricci = _exact_array(data.ricci, values.ricci)
    raised = _exact_array(data.raised, values.raised)
    if ricci is None or raised is None:
        ring = NUMERIC
        ricci, raised = values.ricci, values.raised
        logger.info("curvature at %s is not rational; using the numeric ring", dict(point))
    else:
        ring = EXACT
    ctx = FiberContext(
        n=chart.dim, r=r, ring=ring, hbar_mode=HbarMode(hbar_mode), hbar_value=hbar_value
    )
    return LaplacianSymbol(
        point=dict(point),
        ctx=ctx,
        momentum_metric=values.inverse_metric,
        fiber=fiber_part(ricci, raised, ctx),
        ricci=ricci,
        raised=raised,
    )


def verify_hodge_symbol(symbol: LaplacianSymbol) -> RunReport:
    """Fiber identities at the symbol's point, with the symbol printed into the report."""
    report = verify_hodge_symbol_identities(symbol.ricci, symbol.raised, symbol.ctx)
    report.inputs["point"] = symbol.point
    report.values["symbol"] = str(symbol)
    report.values["exact"] = symbol.exact
    return report


def random_curvature_tensors(
    n: int, rng: random.Random, bound: int = 5
) -> tuple[np.ndarray, np.ndarray]:
    """Random rational ``R_ab^{kl}`` antisymmetric in both pairs, with its Ricci contraction."""
    raised = np.empty((n, n, n, n), dtype=object)
    raised.fill(Fraction(0))
    for a, b in itertools.combinations(range(n), 2):
        for k, l in itertools.combinations(range(n), 2):
            value = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
            raised[a, b, k, l] = value
            raised[b, a, k, l] = -value
            raised[a, b, l, k] = -value
            raised[b, a, l, k] = value
    return contract_ricci(raised), raised
