"""Tests for the full symbol of the Hodge Laplacian.

Dependencies: pytest, numpy, superweyl.operators.symbol.
"""

import itertools
import math
import random
from fractions import Fraction

import pytest

from conftest import exact
from superweyl.constants import HbarMode
from superweyl.exceptions import ChartMismatchError
from superweyl.fiber import FiberContext
from superweyl.geometry import CurvatureData, MetricChart, load_spec
from superweyl.grassmann import Multivector
from superweyl.operators import (
    hodge_symbol,
    random_curvature_tensors,
    verify_hodge_symbol,
    verify_hodge_symbol_identities,
)
from superweyl.scalars import EXACT, NUMERIC

EQUATOR = {"th": math.pi / 2, "ph": 1.0}


def test_flat_symbol_is_momentum_square(flat_data: CurvatureData) -> None:
    """Test σ(□) = -ħ⁻² p² on flat space."""
    symbol = hodge_symbol(flat_data, {"x": 0.0, "y": 0.0})
    assert symbol.exact
    assert symbol.fiber.is_zero
    value = symbol.at_momentum([1, 2])
    expected = Multivector.scalar(symbol.fiber.gens, EXACT.coerce(-5) * EXACT.hbar(-2))
    assert value == expected


@pytest.mark.parametrize("r", [0, Fraction(1, 2), 1])
def test_sphere_symbol_identities(r: Fraction, sphere_data: CurvatureData) -> None:
    """Test the fiber identities of σ(□) on the sphere equator."""
    symbol = hodge_symbol(sphere_data, EQUATOR, r=r)
    assert symbol.exact
    report = verify_hodge_symbol(symbol)
    assert report.passed, report.first_failure
    assert report.values["exact"] is True
    assert "hbar^-2" in report.values["symbol"]


def test_sphere_scalar_term(sphere_data: CurvatureData) -> None:
    """Test the momentum-free scalar r(1 - r)R = -1/2 at r = 1/2."""
    symbol = hodge_symbol(sphere_data, EQUATOR, r=Fraction(1, 2))
    assert symbol.fiber.scalar_part() == exact(Fraction(-1, 2))


def test_numeric_planck_mode(sphere_data: CurvatureData) -> None:
    """Test that a numeric ħ removes the Laurent structure."""
    symbol = hodge_symbol(sphere_data, EQUATOR, hbar_mode=HbarMode.NUMERIC, hbar_value=2)
    assert verify_hodge_symbol(symbol).passed


def test_irrational_curvature_uses_numeric_ring() -> None:
    """Test the numeric fallback when the curvature is not rational at the point."""
    chart = MetricChart(
        ["x", "y"], [(0.0, 2.0), (0.0, 1.0)], [["1", "0"], ["0", "(2 + sin(x))^2"]]
    )
    symbol = hodge_symbol(CurvatureData.from_chart(chart), {"x": 1.0, "y": 0.5})
    assert not symbol.exact
    assert symbol.ctx.ring is NUMERIC
    assert verify_hodge_symbol(symbol).passed


def test_decimal_parameters_stay_exact() -> None:
    """Test that a sphere of radius 2.5 from a spec file gives exact curvature -4/25."""
    chart = load_spec("sphere2", {"radius": 2.5}).charts[0]
    symbol = hodge_symbol(CurvatureData.from_chart(chart), {"th": 1.0, "ph": 1.0})
    assert symbol.exact
    assert symbol.ricci[0, 0] == Fraction(-4, 25)
    assert symbol.ricci[0, 1] == 0


def test_hyperbolic_plane_is_exact(h2_data: CurvatureData) -> None:
    """Test that constant negative curvature is recognized as rational."""
    symbol = hodge_symbol(h2_data, {"x": 0.3, "y": 1.7})
    assert symbol.exact
    assert symbol.ricci[1, 1] == 1


def test_point_outside_chart(sphere_data: CurvatureData) -> None:
    """Test ChartMismatchError for points outside the box or missing coordinates."""
    with pytest.raises(ChartMismatchError):
        hodge_symbol(sphere_data, {"th": 4.0, "ph": 1.0})
    with pytest.raises(ChartMismatchError):
        hodge_symbol(sphere_data, {"th": 1.0})


@pytest.mark.parametrize(("n", "r"), [(2, 0), (2, Fraction(1, 3)), (3, Fraction(1, 2)), (3, 1)])
def test_identities_on_random_tensors(n: int, r: Fraction, rng: random.Random) -> None:
    """Test σ(A), σ(B) and the combined fiber part for random curvature tensors."""
    ricci, raised = random_curvature_tensors(n, rng)
    report = verify_hodge_symbol_identities(ricci, raised, FiberContext(n=n, r=r))
    assert report.passed, report.first_failure
    assert [c.name for c in report.checks] == ["sigma-A", "sigma-B", "sigma-box-fiber"]


def test_random_tensors_are_antisymmetric(rng: random.Random) -> None:
    """Test the symmetries of the generated curvature."""
    ricci, raised = random_curvature_tensors(3, rng)
    for a, b, k, l in itertools.product(range(3), repeat=4):
        assert raised[a, b, k, l] == -raised[b, a, k, l] == -raised[a, b, l, k]
    assert ricci[0, 0] == sum(raised[k, 0, k, 0] for k in range(3))
