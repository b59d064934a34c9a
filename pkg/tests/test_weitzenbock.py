"""Tests for the Weitzenböck formula and its three curvature endomorphisms.

Dependencies: pytest, numpy, sympy, superweyl.operators.
"""

import numpy as np
import pytest

from superweyl.constants import WeitzenbockVariant
from superweyl.geometry import CurvatureData, MetricChart
from superweyl.models import CheckSettings
from superweyl.operators import (
    check_form_complex,
    check_variants,
    check_weitzenbock,
    curvature_endomorphism,
    random_test_fields,
    standard_test_fields,
)

SPHERE_POINT = {"th": 1.1, "ph": 0.4}
SETTINGS = CheckSettings(samples=3, seed=2)


def _numeric(matrix, chart: MetricChart, point: dict[str, float]) -> np.ndarray:
    bindings = {s: point[str(s)] for s in chart.symbols}
    return np.array(matrix.subs(bindings).evalf(), dtype=float)


@pytest.mark.parametrize("variant", list(WeitzenbockVariant))
def test_sphere_endomorphism(variant: WeitzenbockVariant, sphere_data: CurvatureData) -> None:
    """Test □ - Δ = -1 on 1-forms and 0 on functions and 2-forms of the unit sphere."""
    endomorphism = curvature_endomorphism(sphere_data, variant)
    matrix = _numeric(endomorphism, sphere_data.chart, SPHERE_POINT)
    np.testing.assert_allclose(matrix, np.diag([0.0, -1.0, -1.0, 0.0]), atol=1e-12)


def test_flat_endomorphism_vanishes(flat_data: CurvatureData) -> None:
    """Test that the curvature term is zero on flat space."""
    for variant in WeitzenbockVariant:
        assert curvature_endomorphism(flat_data, variant).is_zero_matrix


@pytest.mark.parametrize("fixture", ["flat_data", "sphere_data", "h2_data"])
@pytest.mark.parametrize("variant", list(WeitzenbockVariant))
def test_weitzenbock_random_fields(
    fixture: str, variant: WeitzenbockVariant, request: pytest.FixtureRequest
) -> None:
    """Test □u = (Δ + E)u for random inhomogeneous forms."""
    data = request.getfixturevalue(fixture)
    fields = random_test_fields(data.chart, 3, seed=11)
    report = check_weitzenbock(data, fields, settings=SETTINGS, variant=variant)
    assert report.passed, report.first_failure
    assert report.checks[0].name == f"{data.chart.name}:weitzenbock-{variant}"


@pytest.mark.slow
def test_weitzenbock_standard_fields_flat3(flat3_chart: MetricChart) -> None:
    """Test the full standard field set in three dimensions."""
    data = CurvatureData.from_chart(flat3_chart)
    fields = standard_test_fields(flat3_chart)
    assert len(fields) == 8 * 16
    assert check_weitzenbock(data, fields, settings=SETTINGS).passed


def test_variants_agree(h2_data: CurvatureData, sphere_data: CurvatureData) -> None:
    """Test pointwise agreement of weitz1 and ordered with weitz2."""
    for data in (h2_data, sphere_data):
        report = check_variants(data, settings=SETTINGS)
        assert report.passed
        assert [c.name for c in report.checks] == [
            f"{data.chart.name}:weitz1-vs-weitz2",
            f"{data.chart.name}:ordered-vs-weitz2",
        ]


def test_form_complex(sphere_data: CurvatureData) -> None:
    """Test d² = 0, δ² = 0, d□ = □d and D² = □ on the sphere."""
    fields = random_test_fields(sphere_data.chart, 2, seed=4)
    report = check_form_complex(sphere_data, fields, settings=SETTINGS)
    assert report.passed, report.first_failure
    assert len(report.checks) == 4
