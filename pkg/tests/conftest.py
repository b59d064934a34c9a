"""Pytest fixtures for superweyl tests.

Dependencies: pytest, numpy, superweyl (charts, curvature, Grassmann algebra).
"""

import math
import random
from collections.abc import Sequence
from fractions import Fraction

import numpy as np
import pytest

from superweyl.geometry import CurvatureData, Manifold, MetricChart, load_spec
from superweyl.grassmann import GeneratorSet, Multivector
from superweyl.scalars import EXACT, ExactScalar, ScalarRing

PI = math.pi


def random_multivector(
    gens: GeneratorSet,
    rng: random.Random,
    density: float = 0.5,
    ring: ScalarRing = EXACT,
    degrees: Sequence[int] | None = None,
) -> Multivector:
    """Multivector with small random rational coefficients on a random subset of monomials.

    :param gens: Generator set.
    :param rng: Seeded random source.
    :param density: Probability that a monomial gets a coefficient.
    :param ring: Coefficient ring.
    :param degrees: Restrict to monomials of these degrees.
    :return: A random element (possibly zero).
    """
    terms = {}
    for mask in range(1 << len(gens)):
        if degrees is not None and mask.bit_count() not in degrees:
            continue
        if rng.random() < density:
            value = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
            terms[mask] = value if ring is EXACT else float(value)
    return Multivector(gens, terms, ring)


def exact(value: int | Fraction) -> ExactScalar:
    """Exact scalar constant."""
    return ExactScalar.constant(value)


@pytest.fixture
def rng() -> random.Random:
    """Seeded random source."""
    return random.Random(1234)


@pytest.fixture
def np_rng() -> np.random.Generator:
    """Seeded numpy generator."""
    return np.random.default_rng(1234)


@pytest.fixture
def sphere_chart() -> MetricChart:
    """Unit sphere in (th, ph) away from the poles."""
    return MetricChart(
        ["th", "ph"],
        [(0.0, PI), (0.0, 2 * PI)],
        [["1", "0"], ["0", "sin(th)^2"]],
        label="unit-sphere",
        trim=0.2,
    )


@pytest.fixture
def flat_chart() -> MetricChart:
    """Flat plane with the identity metric."""
    return MetricChart(
        ["x", "y"], [(-1.0, 1.0), (-1.0, 1.0)], [["1", "0"], ["0", "1"]], label="flat2"
    )


@pytest.fixture
def flat3_chart() -> MetricChart:
    """Flat three-space with the identity metric."""
    identity = [["1" if a == b else "0" for b in range(3)] for a in range(3)]
    return MetricChart(["x", "y", "z"], [(-1.0, 1.0)] * 3, identity, label="flat3")


@pytest.fixture
def h2_chart() -> MetricChart:
    """Upper half-plane box with the hyperbolic metric."""
    return MetricChart(
        ["x", "y"],
        [(-1.0, 1.0), (0.5, 2.0)],
        [["1/y^2", "0"], ["0", "1/y^2"]],
        label="h2-box",
    )


@pytest.fixture
def sphere_data(sphere_chart: MetricChart) -> CurvatureData:
    """Curvature of the unit sphere."""
    return CurvatureData.from_chart(sphere_chart)


@pytest.fixture
def flat_data(flat_chart: MetricChart) -> CurvatureData:
    """Curvature of the flat plane."""
    return CurvatureData.from_chart(flat_chart)


@pytest.fixture
def h2_data(h2_chart: MetricChart) -> CurvatureData:
    """Curvature of the hyperbolic box."""
    return CurvatureData.from_chart(h2_chart)


@pytest.fixture
def sphere_manifold() -> Manifold:
    """Bundled unit-sphere spec."""
    return load_spec("sphere2")


@pytest.fixture
def torus_manifold() -> Manifold:
    """Bundled flat-torus spec."""
    return load_spec("torus2")
