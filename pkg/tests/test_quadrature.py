"""Tests for tensor Gauss-Legendre quadrature.

Dependencies: pytest, numpy, superweyl.geometry.quadrature.
"""

import math

import numpy as np
import pytest

from superweyl.exceptions import EvaluationDomainError
from superweyl.expr import parse
from superweyl.geometry import MetricChart, gauss_legendre, integrate_box, integrate_chart
from superweyl.geometry.quadrature import expression_density
from superweyl.models import QuadratureSettings


def test_weights_sum_to_interval_length() -> None:
    """Test that the weights on [-1, 1] add up to 2."""
    nodes, weights = gauss_legendre(7)
    assert len(nodes) == 7
    assert math.fsum(weights) == pytest.approx(2.0)


def test_constant_over_box() -> None:
    """Test the volume of a rectangle."""
    value = integrate_box(lambda cols: np.ones_like(cols[0]), [(0.0, 2.0), (0.0, 3.0)])
    assert value == pytest.approx(6.0)


def test_polynomial_is_exact() -> None:
    """Test that low-degree polynomials integrate exactly with few nodes."""
    settings = QuadratureSettings(nodes_per_dim=4)
    ranges = [(0.0, 1.0), (0.0, 3.0)]
    value = integrate_box(lambda cols: cols[0] ** 3 * cols[1] ** 2, ranges, settings)
    assert value == pytest.approx(0.25 * 9.0)


def test_chunking_does_not_change_result() -> None:
    """Test that the chunk size only affects batching."""
    density = expression_density(parse("exp(x)*cos(y)").tree, ["x", "y"])
    ranges = [(0.0, 1.0), (0.0, 1.0)]
    whole = integrate_box(density, ranges, QuadratureSettings(nodes_per_dim=12, chunk_size=10**6))
    pieces = integrate_box(density, ranges, QuadratureSettings(nodes_per_dim=12, chunk_size=7))
    assert pieces == pytest.approx(whole, rel=1e-14)
    assert whole.real == pytest.approx((math.e - 1.0) * math.sin(1.0))


def test_complex_density() -> None:
    """Test that imaginary parts are integrated separately."""
    value = integrate_box(lambda cols: 1j * cols[0], [(0.0, 2.0)])
    assert value.real == pytest.approx(0.0)
    assert value.imag == pytest.approx(2.0)


def test_sphere_area(sphere_chart: MetricChart) -> None:
    """Test ∫ sin(th) over the sphere chart equals 4π."""
    assert integrate_chart(sphere_chart, "sin(th)") == pytest.approx(4 * math.pi)


def test_points_per_dim_override(flat_chart: MetricChart) -> None:
    """Test that an explicit node count overrides the settings."""
    value = integrate_chart(flat_chart, "x^2 + y^2", points_per_dim=3)
    assert value == pytest.approx(8.0 / 3.0)


def test_singular_density(flat_chart: MetricChart) -> None:
    """Test EvaluationDomainError when the density is not finite at a node."""
    with pytest.raises(EvaluationDomainError):
        integrate_chart(flat_chart, "log(x)", points_per_dim=4)
