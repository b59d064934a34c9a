"""Tests for forms, form operators and the first-order calculus on charts.

Dependencies: pytest, sympy, superweyl.operators.
"""

import math

import pytest
import sympy

from superweyl.exceptions import ChartMismatchError, GeneratorError, OperatorOrderError
from superweyl.geometry import CurvatureData, MetricChart
from superweyl.operators import (
    FormField,
    FormOperator,
    bochner_laplacian,
    codifferential,
    covariant_derivative,
    divergence,
    exterior_d,
    gamma_operators,
    hodge_laplacian,
)
from superweyl.operators.weitzenbock import random_test_fields

SPHERE_POINT = {"th": 1.1, "ph": 0.4}
FLAT_POINT = {"x": 0.3, "y": -0.6}


class TestFormField:
    """Test form construction and arithmetic."""

    def test_component_count_checked(self, flat_chart: MetricChart) -> None:
        """Test GeneratorError for the wrong number of components."""
        with pytest.raises(GeneratorError):
            FormField(flat_chart, [1, 2, 3])

    def test_monomial_ordering_sign(self, flat_chart: MetricChart) -> None:
        """Test ξ²ξ¹ = -ξ¹ξ² and ξ¹ξ¹ = 0."""
        field = FormField.monomial(flat_chart, "x", [1, 0])
        assert field.component([0, 1]) == -sympy.Symbol("x")
        assert FormField.monomial(flat_chart, 1, [0, 0]).is_zero
        with pytest.raises(GeneratorError):
            FormField.monomial(flat_chart, 1, [2])

    def test_chart_mismatch(self, flat_chart: MetricChart, h2_chart: MetricChart) -> None:
        """Test that forms on different charts do not add."""
        with pytest.raises(ChartMismatchError):
            FormField.zero(flat_chart) + FormField.zero(h2_chart)

    def test_multivector_roundtrip(self, flat_chart: MetricChart) -> None:
        """Test conversion through a symbolic Multivector."""
        field = FormField(flat_chart, ["x", 0, "y", "x*y"])
        assert FormField.from_multivector(flat_chart, field.to_multivector()).vector == field.vector

    def test_degree_part(self, flat_chart: MetricChart) -> None:
        """Test projection onto one form degree."""
        field = FormField(flat_chart, [1, 2, 3, 4])
        assert list(field.degree_part(1).evaluate(FLAT_POINT)) == [0.0, 2.0, 3.0, 0.0]


class TestFormOperator:
    """Test differential operators on forms."""

    def test_order_limit(self, flat_chart: MetricChart) -> None:
        """Test OperatorOrderError above second order."""
        with pytest.raises(OperatorOrderError):
            FormOperator(flat_chart, {(0, 0, 1): sympy.eye(4)})

    def test_composition_is_leibniz(self, flat_chart: MetricChart) -> None:
        """Test (∂_x ∘ x) applied to y gives y."""
        x = sympy.Symbol("x")
        product = FormOperator.partial(flat_chart, 0) @ FormOperator.multiplication(
            flat_chart, sympy.eye(4) * x
        )
        image = product(FormField.monomial(flat_chart, "y"))
        assert image.evaluate(FLAT_POINT)[0] == pytest.approx(FLAT_POINT["y"])
        assert product.order == 1

    def test_exterior_derivative(self, flat_data: CurvatureData) -> None:
        """Test d(xy) = y ξ¹ + x ξ²."""
        image = exterior_d(flat_data)(FormField.monomial(flat_data.chart, "x*y"))
        values = image.evaluate(FLAT_POINT)
        assert values[1] == pytest.approx(FLAT_POINT["y"])
        assert values[2] == pytest.approx(FLAT_POINT["x"])

    def test_codifferential_contracts(self, flat_data: CurvatureData) -> None:
        """Test δ(x ξ¹) = g^{11} ∂_x x = 1."""
        image = codifferential(flat_data)(FormField.monomial(flat_data.chart, "x", [0]))
        assert image.evaluate(FLAT_POINT)[0] == pytest.approx(1.0)

    def test_d_squared_vanishes(self, sphere_data: CurvatureData) -> None:
        """Test d² = 0 symbolically on random forms."""
        d = exterior_d(sphere_data)
        for field in random_test_fields(sphere_data.chart, 3, seed=5):
            assert d(d(field)).is_zero

    def test_laplacians_on_functions(self, sphere_data: CurvatureData) -> None:
        """Test □ cos(th) = Δ cos(th) = -2 cos(th) on the unit sphere."""
        f = FormField.monomial(sphere_data.chart, "cos(th)")
        expected = -2 * math.cos(SPHERE_POINT["th"])
        for operator in (hodge_laplacian(sphere_data), bochner_laplacian(sphere_data)):
            assert operator(f).evaluate(SPHERE_POINT)[0] == pytest.approx(expected)

    def test_gamma_anticommutators(self, sphere_data: CurvatureData) -> None:
        """Test {γ^a, γ^b} = 2 g^{ab}."""
        gammas = [g.coefficient(()) for g in gamma_operators(sphere_data)]
        for a in range(2):
            for b in range(2):
                anticommutator = gammas[a] * gammas[b] + gammas[b] * gammas[a]
                expected = 2 * sphere_data.inverse_metric[a, b] * sympy.eye(4)
                assert sympy.simplify(anticommutator - expected) == sympy.zeros(4, 4)

    def test_divergence(self, sphere_data: CurvatureData) -> None:
        """Test div ∂_th = cot(th) on the sphere."""
        value = divergence(sphere_data, ["1", "0"])
        th = sympy.Symbol("th")
        assert float(value.subs(th, 1.1)) == pytest.approx(1 / math.tan(1.1))
        with pytest.raises(GeneratorError):
            divergence(sphere_data, ["1"])

    def test_half_density_derivative(self, flat_data: CurvatureData) -> None:
        """Test (x ∇_x + ½ div) applied to 1 gives ½."""
        operator = covariant_derivative(flat_data, ["x", "0"], s="1/2")
        image = operator(FormField.monomial(flat_data.chart, 1))
        assert image.evaluate(FLAT_POINT)[0] == pytest.approx(0.5)
