"""Tests for Minkowski 3-space algebra."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.minkowski import (
    CausalClass,
    Vec3,
    causal_class,
    det3,
    mink_inner,
    mink_norm_sq,
)
from src.utils.error_handling import NonFiniteError


class TestVec3:
    """Test Vec3 arithmetic."""

    def test_arithmetic(self) -> None:
        """Test addition, scaling and negation."""
        u = Vec3(1.0, 2.0, 3.0)
        v = Vec3(0.5, -1.0, 2.0)
        assert u + v == Vec3(1.5, 1.0, 5.0)
        assert u - v == Vec3(0.5, 3.0, 1.0)
        assert 2.0 * u == Vec3(2.0, 4.0, 6.0)
        assert u * 2.0 == Vec3(2.0, 4.0, 6.0)
        assert u / 2.0 == Vec3(0.5, 1.0, 1.5)
        assert -u == Vec3(-1.0, -2.0, -3.0)

    def test_numpy_scalar_multiplication(self) -> None:
        """Test numpy scalars scale a Vec3 instead of broadcasting."""
        scaled = np.float64(2.0) * Vec3(1.0, 0.0, -1.0)
        assert isinstance(scaled, Vec3)
        assert scaled == Vec3(2.0, 0.0, -2.0)

    def test_array_round_trip(self) -> None:
        """Test conversion to and from arrays."""
        v = Vec3(1.0, -2.0, 0.25)
        assert Vec3.from_array(v.to_array()) == v
        assert list(v) == [1.0, -2.0, 0.25]
        assert v.norm() == pytest.approx(math.sqrt(5.0625))

    def test_from_array_wrong_length(self) -> None:
        """Test from_array needs three components."""
        with pytest.raises(ValueError, match="Expected 3 components"):
            Vec3.from_array([1.0, 2.0])

    def test_non_finite_rejected(self) -> None:
        """Test NaN or infinite components are rejected."""
        with pytest.raises(NonFiniteError):
            Vec3(math.nan, 0.0, 0.0)
        with pytest.raises(NonFiniteError):
            Vec3(0.0, 0.0, math.inf)


class TestMinkowskiProduct:
    """Test the (+, +, -) product and causal character."""

    def test_basis(self) -> None:
        """Test the metric on the coordinate basis."""
        e1, e2, e3 = Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)
        assert mink_inner(e1, e1) == 1.0
        assert mink_inner(e2, e2) == 1.0
        assert mink_inner(e3, e3) == -1.0
        assert mink_inner(e1, e3) == 0.0

    def test_symmetric(self) -> None:
        """Test g(u, v) = g(v, u)."""
        u, v = Vec3(1.0, 2.0, 3.0), Vec3(-4.0, 0.5, 2.0)
        assert mink_inner(u, v) == mink_inner(v, u) == -9.0

    def test_bilinear(self, rng: np.random.Generator) -> None:
        """Test g(au + bv, w) = a g(u, w) + b g(v, w) in each argument."""
        for _ in range(100):
            u, v, w = (Vec3.from_array(r) for r in rng.uniform(-3.0, 3.0, (3, 3)))
            a, b = rng.uniform(-2.0, 2.0, 2)
            left = a * mink_inner(u, w) + b * mink_inner(v, w)
            assert mink_inner(a * u + b * v, w) == pytest.approx(left, abs=1e-12)
            right = a * mink_inner(w, u) + b * mink_inner(w, v)
            assert mink_inner(w, a * u + b * v) == pytest.approx(right, abs=1e-12)

    @pytest.mark.parametrize(
        "v, expected",
        [
            (Vec3(1.0, 0.0, 1.0), CausalClass.NULL),
            (Vec3(0.6, 0.8, 1.0), CausalClass.NULL),
            (Vec3(1.0, 0.0, 0.0), CausalClass.SPACELIKE),
            (Vec3(0.0, 0.0, 1.0), CausalClass.TIMELIKE),
            (Vec3(0.0, 0.0, 0.0), CausalClass.ZERO),
        ],
    )
    def test_causal_class(self, v: Vec3, expected: CausalClass) -> None:
        """Test classification by the sign of g(v, v)."""
        assert causal_class(v) is expected

    @given(st.floats(min_value=-1e3, max_value=1e3, allow_nan=False))
    def test_generator_direction_is_null(self, f: float) -> None:
        """Test (2f, f^2 - 1, f^2 + 1) is null for every f."""
        p = Vec3(2.0 * f, f * f - 1.0, f * f + 1.0)
        assert abs(mink_norm_sq(p)) <= 1e-12 * (1.0 + f * f) ** 2


class TestDeterminant:
    """Test det3."""

    def test_identity(self) -> None:
        """Test the coordinate frame has determinant 1."""
        assert det3(Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)) == 1.0

    def test_row_swap(self) -> None:
        """Test swapping rows flips the sign."""
        u, v, w = Vec3(1.0, 2.0, 0.5), Vec3(0.0, 1.0, 3.0), Vec3(2.0, -1.0, 1.0)
        assert det3(u, v, w) == pytest.approx(-det3(v, u, w))

    def test_matches_numpy(self, rng: np.random.Generator) -> None:
        """Test against numpy.linalg.det."""
        for _ in range(20):
            rows = rng.uniform(-2.0, 2.0, size=(3, 3))
            vectors = [Vec3.from_array(r) for r in rows]
            assert det3(*vectors) == pytest.approx(np.linalg.det(rows), abs=1e-12)

    @pytest.mark.parametrize(
        "u, v, w",
        [
            (Vec3(1.0, 2.0, 3.0), Vec3(1.0, 2.0, 3.0), Vec3(0.0, 1.0, -1.0)),
            (Vec3(1.0, -2.0, 0.5), Vec3(0.0, 1.0, 1.0), Vec3(2.0, -3.0, 2.0)),
            (Vec3(0.0, 0.0, 0.0), Vec3(1.0, 0.0, 0.0), Vec3(0.0, 1.0, 0.0)),
        ],
    )
    def test_dependent_rows(self, u: Vec3, v: Vec3, w: Vec3) -> None:
        """Test repeated, combined or zero rows give determinant 0."""
        assert det3(u, v, w) == pytest.approx(0.0, abs=1e-12)

    def test_random_combination(self, rng: np.random.Generator) -> None:
        """Test a row that is a combination of the other two."""
        for _ in range(20):
            u, v = (Vec3.from_array(r) for r in rng.uniform(-2.0, 2.0, (2, 3)))
            a, b = rng.uniform(-2.0, 2.0, 2)
            assert det3(u, v, a * u + b * v) == pytest.approx(0.0, abs=1e-12)
