"""Tests for the exterior superalgebra, Berezin integration and the Pfaffian.

Dependencies: pytest, sympy, superweyl.grassmann, superweyl.scalars.
"""

import itertools
import random
from fractions import Fraction

import pytest
import sympy

from conftest import exact, random_multivector
from superweyl.constants import Parity
from superweyl.exceptions import AntisymmetryError, GeneratorError, ScalarRingError
from superweyl.grassmann import (
    GeneratorSet,
    Multivector,
    berezin_integral,
    exp_even_nilpotent,
    left_derivative,
    multiply,
    pfaffian,
    reorder_sign,
    substitute_linear,
)
from superweyl.scalars import EXACT, NUMERIC, SYMBOLIC

GENS = GeneratorSet(["xi1", "xi2", "xi3", "xi4"])
PROPERTY_CASES = 150


def _gen(name: str, gens: GeneratorSet = GENS) -> Multivector:
    return Multivector.generator(gens, name)


def test_generators_anticommute() -> None:
    """Test ξ¹ξ² = -ξ²ξ¹ and (ξ¹)² = 0."""
    a, b = _gen("xi1"), _gen("xi2")
    assert a * b == -(b * a)
    assert (a * a).is_zero


def test_reorder_sign() -> None:
    """Test the sign of moving generators into ascending order."""
    assert reorder_sign(0b01, 0b10) == 1
    assert reorder_sign(0b10, 0b01) == -1
    assert reorder_sign(0b110, 0b001) == 1


def test_duplicate_generators_rejected() -> None:
    """Test GeneratorSet refuses repeated names."""
    with pytest.raises(GeneratorError):
        GeneratorSet(["a", "a"])


def test_mismatched_sets_and_rings_rejected() -> None:
    """Test that elements over different sets or rings cannot be combined."""
    other = GeneratorSet(["eta1"])
    with pytest.raises(GeneratorError):
        _gen("xi1") + Multivector.generator(other, "eta1")
    with pytest.raises(ScalarRingError):
        _gen("xi1") + Multivector.generator(GENS, "xi1", NUMERIC)


def test_parity() -> None:
    """Test parity of homogeneous and mixed elements."""
    a, b = _gen("xi1"), _gen("xi2")
    assert (a * b).parity() is Parity.EVEN
    assert a.parity() is Parity.ODD
    assert (a + a * b).parity() is Parity.MIXED


def test_product_associative(rng: random.Random) -> None:
    """Test (ab)c = a(bc) on random elements."""
    for _ in range(PROPERTY_CASES):
        a, b, c = (random_multivector(GENS, rng, 0.3) for _ in range(3))
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


def test_left_derivative_graded_leibniz(rng: random.Random) -> None:
    """Test ∂(ab) = (∂a)b + (-1)^|a| a(∂b) for homogeneous a."""
    for _ in range(PROPERTY_CASES):
        degree = rng.randint(0, 3)
        a = random_multivector(GENS, rng, 0.5, degrees=[degree])
        b = random_multivector(GENS, rng, 0.3)
        gen = rng.choice(GENS.names)
        sign = -1 if degree % 2 else 1
        lhs = left_derivative(a * b, gen)
        rhs = left_derivative(a, gen) * b + (a * left_derivative(b, gen)).scale(sign)
        assert lhs == rhs


def test_berezin_anchor() -> None:
    """Test ∫D(ξ¹, ξ²) ξ²ξ¹ = 1."""
    gens = GeneratorSet(["xi1", "xi2"])
    element = _gen("xi2", gens) * _gen("xi1", gens)
    assert berezin_integral(element, ["xi1", "xi2"]).scalar_part() == 1


def test_berezin_kills_lower_degrees() -> None:
    """Test that the integral of a non-top monomial vanishes."""
    gens = GeneratorSet(["xi1", "xi2"])
    element = Multivector.scalar(gens, 3) + _gen("xi1", gens)
    assert berezin_integral(element, ["xi1", "xi2"]).is_zero


def test_berezin_change_of_variables(rng: random.Random) -> None:
    """Test ∫ f(Aξ) = det(A) ∫ f(ξ) for random integer matrices A."""
    names = list(GENS.names)
    for _ in range(PROPERTY_CASES):
        matrix = [[rng.randint(-2, 2) for _ in names] for _ in names]
        images = {
            name: Multivector(GENS, {1 << j: matrix[i][j] for j in range(len(names))})
            for i, name in enumerate(names)
        }
        f = random_multivector(GENS, rng, 0.5)
        det = int(sympy.Matrix(matrix).det())
        lhs = berezin_integral(substitute_linear(f, images), names)
        assert lhs == berezin_integral(f, names).scale(det)


def test_substitute_linear_requires_degree_one() -> None:
    """Test that non-linear images are rejected."""
    image = _gen("xi1") * _gen("xi2")
    with pytest.raises(GeneratorError):
        substitute_linear(_gen("xi3"), {"xi3": image})


def test_exp_even_nilpotent() -> None:
    """Test exp(ξ¹ξ² + ξ³ξ⁴) = 1 + ξ¹ξ² + ξ³ξ⁴ + ξ¹ξ²ξ³ξ⁴."""
    a = _gen("xi1") * _gen("xi2")
    b = _gen("xi3") * _gen("xi4")
    one = Multivector.scalar(GENS, 1)
    assert exp_even_nilpotent(a + b) == one + a + b + a * b
    with pytest.raises(GeneratorError):
        exp_even_nilpotent(_gen("xi1"))


def test_reexpress_reorders_with_sign() -> None:
    """Test rewriting ab over the set (b, a)."""
    gens = GeneratorSet(["a", "b"])
    swapped = GeneratorSet(["b", "a"])
    element = _gen("a", gens) * _gen("b", gens)
    assert element.reexpress(swapped).coefficient(0b11) == -1


def test_pfaffian_small() -> None:
    """Test the 2x2 and 4x4 Pfaffian closed forms."""
    assert pfaffian([[0, 5], [-5, 0]]) == 5
    a = {(0, 1): 1, (0, 2): 2, (0, 3): 3, (1, 2): 4, (1, 3): 5, (2, 3): 6}
    Q = [[0] * 4 for _ in range(4)]
    for (i, j), value in a.items():
        Q[i][j], Q[j][i] = value, -value
    assert pfaffian(Q) == 1 * 6 - 2 * 5 + 3 * 4


def test_pfaffian_odd_size_is_zero() -> None:
    """Test that odd-size matrices have zero Pfaffian."""
    assert pfaffian([[0, 1, 2], [-1, 0, 3], [-2, -3, 0]]) == 0


def test_pfaffian_squared_is_determinant(rng: random.Random) -> None:
    """Test Pf(Q)² = det(Q) on random antisymmetric rational matrices."""
    for size in (2, 4, 6):
        for _ in range(PROPERTY_CASES // 3):
            Q = [[Fraction(0)] * size for _ in range(size)]
            for i, j in itertools.combinations(range(size), 2):
                value = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
                Q[i][j], Q[j][i] = value, -value
            det = sympy.Matrix(Q).det()
            pf = pfaffian(Q)
            assert pf * pf == exact(Fraction(int(det.p), int(det.q)))


def test_pfaffian_rejects_non_antisymmetric() -> None:
    """Test AntisymmetryError on a symmetric matrix."""
    with pytest.raises(AntisymmetryError):
        pfaffian([[0, 1], [1, 0]])


def test_pfaffian_symbolic() -> None:
    """Test the Pfaffian of a symbolic 2x2 matrix."""
    q = sympy.Symbol("q")
    assert sympy.expand(pfaffian([[0, q], [-q, 0]], SYMBOLIC) - q) == 0


def test_numeric_ring_pfaffian() -> None:
    """Test the numeric ring agrees with the exact ring."""
    value = pfaffian([[0.0, 2.5], [-2.5, 0.0]], NUMERIC)
    assert value.evaluate() == pytest.approx(2.5)
    assert EXACT.coerce(3) == exact(3)
