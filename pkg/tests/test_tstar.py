"""Tests for symbols on T*M, the Cartan differential and the Leibniz defect.

Dependencies: pytest, superweyl.tstar.
"""

import random

import pytest

from superweyl.constants import Parity
from superweyl.exceptions import ChartMismatchError, GeneratorError
from superweyl.geometry import CurvatureData
from superweyl.grassmann import Multivector
from superweyl.models import CheckSettings
from superweyl.scalars import EXACT
from superweyl.tstar import (
    TStarSymbol,
    canonical_bracket,
    cartan_d,
    curvature_defect,
    defect_table,
    generator_symbols,
    leibniz_defect,
    random_tstar_symbol,
    run_dcheck,
    tstar_gens,
)

FLAT_PHASE = {"x": 0.1, "y": 0.2, "p_x": 0.5, "p_y": -0.3}
SPHERE_PHASE = {"th": 1.1, "ph": 0.4, "p_th": 0.7, "p_ph": -1.2}


def _one(chart) -> TStarSymbol:
    return TStarSymbol.scalar(chart, 1)


class TestTStarSymbol:
    """Test construction and the canonical bracket."""

    def test_requires_symbolic_coefficients(self, flat_chart) -> None:
        """Test GeneratorError for exact coefficients or foreign generators."""
        with pytest.raises(GeneratorError):
            TStarSymbol(flat_chart, Multivector.scalar(tstar_gens(2), 1, EXACT))
        with pytest.raises(GeneratorError):
            TStarSymbol(flat_chart, Multivector.zero(tstar_gens(3)))

    def test_canonical_pairs(self, flat_chart) -> None:
        """Test {p_a, x^b} = δ, {x^a, p_b} = -δ and {θ_a, ξ^b} = {ξ^b, θ_a} = δ."""
        g = generator_symbols(flat_chart)
        one = _one(flat_chart)
        assert (canonical_bracket(g["p1"], g["x1"]) - one).is_zero
        assert (canonical_bracket(g["x1"], g["p1"]) + one).is_zero
        assert canonical_bracket(g["p1"], g["x2"]).is_zero
        assert (canonical_bracket(g["theta1"], g["xi1"]) - one).is_zero
        assert (canonical_bracket(g["xi1"], g["theta1"]) - one).is_zero
        assert canonical_bracket(g["theta2"], g["xi1"]).is_zero

    def test_parity(self, flat_chart) -> None:
        """Test parity of generators and products."""
        g = generator_symbols(flat_chart)
        assert g["xi1"].parity() is Parity.ODD
        assert (g["xi1"] * g["theta2"]).parity() is Parity.EVEN

    def test_chart_mismatch(self, flat_chart, sphere_chart) -> None:
        """Test that symbols on different coordinates cannot be combined."""
        with pytest.raises(ChartMismatchError):
            _one(flat_chart) + _one(sphere_chart)

    def test_evaluate_needs_momenta(self, flat_chart) -> None:
        """Test numeric evaluation at a phase-space point."""
        p = generator_symbols(flat_chart)["p1"]
        assert p.max_abs(FLAT_PHASE) == pytest.approx(0.5)


class TestCartanDifferential:
    """Test the odd derivation d."""

    def test_coordinates(self, sphere_data: CurvatureData) -> None:
        """Test dx^a = ξ^a and dξ^a = 0."""
        g = generator_symbols(sphere_data.chart)
        assert (cartan_d(g["x1"], sphere_data) - g["xi1"]).is_zero
        assert cartan_d(g["xi2"], sphere_data).is_zero

    def test_flat_momentum(self, flat_data: CurvatureData) -> None:
        """Test dp_a = θ_a and dθ_a = 0 on flat space."""
        g = generator_symbols(flat_data.chart)
        assert (cartan_d(g["p2"], flat_data) - g["theta2"]).is_zero
        assert cartan_d(g["theta1"], flat_data).is_zero

    def test_sphere_momentum_has_connection_terms(self, sphere_data: CurvatureData) -> None:
        """Test that dp_ph picks up Christoffel terms on the sphere."""
        g = generator_symbols(sphere_data.chart)
        difference = cartan_d(g["p2"], sphere_data) - g["theta2"]
        assert difference.max_abs(SPHERE_PHASE) > 0.1

    def test_d_squared_flat_symbolic(self, flat_data: CurvatureData, rng: random.Random) -> None:
        """Test d² = 0 exactly on random flat-space symbols."""
        for parity in (Parity.EVEN, Parity.ODD):
            f = random_tstar_symbol(flat_data.chart, rng, parity)
            assert cartan_d(cartan_d(f, flat_data), flat_data).is_zero

    def test_d_squared_sphere_generators(self, sphere_data: CurvatureData) -> None:
        """Test d² = 0 numerically on the sphere generators."""
        for f in generator_symbols(sphere_data.chart).values():
            ddf = cartan_d(cartan_d(f, sphere_data), sphere_data)
            assert ddf.max_abs(SPHERE_PHASE) < 1e-10

    def test_graded_leibniz(self, sphere_data: CurvatureData, rng: random.Random) -> None:
        """Test d(fg) = (df)g + (-1)^f̃ f(dg)."""
        chart = sphere_data.chart
        f = random_tstar_symbol(chart, rng, Parity.ODD)
        g = random_tstar_symbol(chart, rng, Parity.EVEN)
        lhs = cartan_d(f * g, sphere_data)
        rhs = cartan_d(f, sphere_data) * g - f * cartan_d(g, sphere_data)
        assert (lhs - rhs).max_abs(SPHERE_PHASE) < 1e-9

    def test_chart_mismatch(self, flat_chart, sphere_data: CurvatureData) -> None:
        """Test ChartMismatchError for curvature of another chart."""
        with pytest.raises(ChartMismatchError):
            cartan_d(_one(flat_chart), sphere_data)


class TestLeibnizDefect:
    """Test the failure of d to be a derivation of the bracket."""

    @pytest.mark.parametrize(
        ("fixture", "phase"), [("flat_data", FLAT_PHASE), ("sphere_data", SPHERE_PHASE)]
    )
    def test_momentum_xi_defect(
        self, fixture: str, phase: dict[str, float], request: pytest.FixtureRequest
    ) -> None:
        """Test D(p_a, ξ^b) = -δ_a^b on flat and curved charts."""
        data = request.getfixturevalue(fixture)
        g = generator_symbols(data.chart)
        one = _one(data.chart)
        assert (leibniz_defect(g["p1"], g["xi1"], data) + one).max_abs(phase) < 1e-10
        assert leibniz_defect(g["p1"], g["xi2"], data).max_abs(phase) < 1e-10

    def test_flat_curvature_defect_vanishes(self, flat_data: CurvatureData) -> None:
        """Test that the curvature part of the defect is zero on flat space."""
        table = defect_table(flat_data, FLAT_PHASE, curvature_only=True)
        assert len(table) == 64
        assert max(table.values()) == pytest.approx(0.0, abs=1e-12)
        assert defect_table(flat_data, FLAT_PHASE)["D(p1,xi1)"] == pytest.approx(1.0)

    def test_sphere_curvature_defect(self, sphere_data: CurvatureData) -> None:
        """Test that curvature makes some defect differ from its flat value."""
        table = defect_table(sphere_data, SPHERE_PHASE, curvature_only=True)
        assert max(table.values()) > 1e-6

    def test_curvature_defect_of_coordinates(self, sphere_data: CurvatureData) -> None:
        """Test that pairs of coordinates have no defect at all."""
        g = generator_symbols(sphere_data.chart)
        assert curvature_defect(g["x1"], g["x2"], sphere_data).is_zero


class TestRunDcheck:
    """Test the dcheck report."""

    @pytest.mark.parametrize("fixture", ["flat_data", "sphere_data"])
    def test_passes(self, fixture: str, request: pytest.FixtureRequest) -> None:
        """Test d² = 0 and graded symmetry of the defect."""
        data = request.getfixturevalue(fixture)
        report = run_dcheck(data, CheckSettings(samples=2, seed=3), random_cases=2)
        assert report.passed, report.first_failure
        name = data.chart.name
        assert [c.name for c in report.checks] == [
            f"{name}:d-squared-generators",
            f"{name}:d-squared-random",
            f"{name}:defect-graded-symmetry",
        ]
        assert "D(p1,xi1)" in report.values["leibniz_defect"]

    def test_curvature_defect_values(self, flat_data: CurvatureData, sphere_data) -> None:
        """Test that the curvature part vanishes on flat space only."""
        settings = CheckSettings(samples=1)
        flat = run_dcheck(flat_data, settings, random_cases=1)
        curved = run_dcheck(sphere_data, settings, random_cases=1)
        assert flat.values["curvature_defect_max"] == pytest.approx(0.0, abs=1e-12)
        assert curved.values["curvature_defect_max"] > 1e-6
