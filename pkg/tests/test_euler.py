"""Tests for the Euler characteristic along the Pfaffian and supertrace paths.

Dependencies: pytest, pytest-mock, sympy, superweyl.tstar.
"""

import math

import pytest
import sympy
from pytest_mock import MockerFixture

from superweyl.constants import EULER_DENSITY_TOLERANCE, EULER_TOLERANCE, IMAG_TOLERANCE
from superweyl.exceptions import UnsupportedSymbolError
from superweyl.geometry import CurvatureData, Manifold, load_spec, parse_spec
from superweyl.grassmann import Multivector
from superweyl.models import QuadratureSettings
from superweyl.scalars import NUMERIC, SYMBOLIC
from superweyl.tstar import (
    euler_characteristic,
    euler_density,
    euler_density_at,
    pfaffian_top,
    supertrace_density,
    supertrace_gaussian,
    tstar_gens,
)

SPHERE_POINT = {"th": 1.1, "ph": 0.4}
FAST = QuadratureSettings(nodes_per_dim=24)


def test_sphere_density(sphere_data: CurvatureData) -> None:
    """Test the Euler density sin(th)/2π of the unit sphere along both evaluation paths."""
    expected = math.sin(1.1) / (2 * math.pi)
    assert euler_density_at(sphere_data, SPHERE_POINT) == pytest.approx(expected)
    density = euler_density(sphere_data)
    th = sympy.Symbol("th")
    assert float(density.subs(th, 1.1)) == pytest.approx(expected)


def test_pfaffian_top_numeric_matches_symbolic(sphere_data: CurvatureData) -> None:
    """Test pfaffian_top in the numeric ring against the symbolic tensors."""
    values = sphere_data.at(SPHERE_POINT)
    numeric = pfaffian_top(values.raised, 2, NUMERIC)
    symbolic = pfaffian_top(sphere_data.raised, 2, SYMBOLIC)
    bindings = {sympy.Symbol(k): v for k, v in SPHERE_POINT.items()}
    assert complex(numeric.evaluate(1.0)) == pytest.approx(complex(symbolic.subs(bindings)))


def test_sphere(sphere_manifold: Manifold) -> None:
    """Test χ(S²) = 2 with a small imaginary residual."""
    report = euler_characteristic(sphere_manifold, FAST)
    assert report.chi_expected == 2
    assert report.abs_error < EULER_TOLERANCE
    assert report.imag_residual < IMAG_TOLERANCE
    assert [c.label for c in report.charts] == ["sphere2"]
    assert report.nodes_per_dim == 24


def test_torus(torus_manifold: Manifold) -> None:
    """Test χ(T²) = 0."""
    report = euler_characteristic(torus_manifold, FAST)
    assert report.chi_computed == pytest.approx(0.0, abs=1e-12)
    assert report.abs_error == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("radius", [0.5, 3.0])
def test_scale_invariance(radius: float) -> None:
    """Test that χ does not depend on the sphere radius."""
    report = euler_characteristic(load_spec("sphere2", {"radius": radius}), FAST)
    assert report.chi_computed == pytest.approx(2.0, abs=EULER_TOLERANCE)


def test_orientation_flips_sign() -> None:
    """Test that orientation -1 negates the integral."""
    manifold = load_spec("sphere2")
    data = manifold.spec.model_dump()
    data["orientation"] = "-1"
    report = euler_characteristic(parse_spec(data), FAST)
    assert report.chi_computed == pytest.approx(-2.0, abs=EULER_TOLERANCE)


def test_density_cross_check_agrees(sphere_manifold: Manifold) -> None:
    """Test that the compiled and numeric densities agree on the sphere."""
    report = euler_characteristic(sphere_manifold, FAST)
    assert report.densities_agree
    assert report.density_mismatch < EULER_DENSITY_TOLERANCE


def test_density_cross_check_reports_mismatch(
    sphere_manifold: Manifold, mocker: MockerFixture
) -> None:
    """Test that a wrong compiled density shows up in the report."""
    mocker.patch(
        "superweyl.tstar.euler.euler_density",
        side_effect=lambda data, orientation=1: 2 * euler_density(data, orientation),
    )
    report = euler_characteristic(sphere_manifold, FAST)
    assert not report.densities_agree
    assert report.density_mismatch > 1e-3
    assert "density_mismatch" in report.model_dump()


def test_odd_dimension() -> None:
    """Test that odd dimension gives χ = 0 with a note."""
    circle = parse_spec(
        {
            "name": "circle",
            "dim": 1,
            "coordinates": ["t"],
            "charts": [{"ranges": [[0.0, 2 * math.pi]], "metric": [["1"]]}],
            "expected_euler": 0,
        }
    )
    report = euler_characteristic(circle)
    assert report.chi_computed == 0.0
    assert report.note is not None and "odd" in report.note
    assert supertrace_gaussian(circle, FAST) == 0j


def test_supertrace_agrees_on_sphere(sphere_manifold: Manifold) -> None:
    """Test that the supertrace integral reproduces χ(S²) with zero imaginary part."""
    value = supertrace_gaussian(sphere_manifold, FAST)
    assert value.real == pytest.approx(2.0, abs=EULER_TOLERANCE)
    assert abs(value.imag) < IMAG_TOLERANCE


def test_supertrace_density_matches_euler_density(sphere_data: CurvatureData) -> None:
    """Test pointwise equality of the two densities after the momentum integral."""
    bindings = {sympy.Symbol(k): v for k, v in SPHERE_POINT.items()}
    trace = complex(supertrace_density(sphere_data).subs(bindings))
    euler = float(euler_density(sphere_data).subs(bindings))
    assert trace.real == pytest.approx(euler)
    assert trace.imag == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize(
    "fiber",
    [
        lambda data: Multivector.generator(tstar_gens(2), "xi1", SYMBOLIC),
        lambda data: Multivector.scalar(tstar_gens(2), 1.0, NUMERIC),
        lambda data: Multivector.scalar(tstar_gens(2), sympy.Symbol("p_th"), SYMBOLIC),
        lambda data: Multivector.scalar(tstar_gens(3), 1, SYMBOLIC),
    ],
)
def test_unsupported_fiber(fiber, sphere_data: CurvatureData) -> None:
    """Test UnsupportedSymbolError for odd, numeric, momentum-dependent or misshaped factors."""
    with pytest.raises(UnsupportedSymbolError):
        supertrace_density(sphere_data, fiber)


@pytest.mark.slow
def test_product_of_spheres() -> None:
    """Test χ(S² x S²) = 4 through the four-dimensional Pfaffian."""
    report = euler_characteristic(load_spec("s2xs2"), QuadratureSettings(nodes_per_dim=12))
    assert report.chi_computed == pytest.approx(4.0, abs=EULER_TOLERANCE)


@pytest.mark.slow
def test_four_sphere_matches_supertrace() -> None:
    """Test that both paths agree on the bundled four-sphere."""
    manifold = load_spec("sphere4")
    settings = QuadratureSettings(nodes_per_dim=12)
    report = euler_characteristic(manifold, settings)
    assert report.abs_error < EULER_TOLERANCE
    assert supertrace_gaussian(manifold, settings).real == pytest.approx(report.chi_computed)
