"""Tests for central finite-difference stencils."""

import math

import numpy as np
import pytest

from src.finite_difference import (
    STENCILS,
    derivative,
    derivative_at_index,
    get_stencil,
    half_width,
)
from src.utils.error_handling import InsufficientStencilError, InvalidParamError


class TestStencilTables:
    """Test the stencil coefficients."""

    @pytest.mark.parametrize("key", sorted(STENCILS))
    def test_moment_conditions(self, key: tuple) -> None:
        """Test weights annihilate constants and reproduce x^order / order!."""
        order, _ = key
        offsets, weights = STENCILS[key]
        assert np.sum(weights) == pytest.approx(0.0, abs=1e-14)
        moment = np.sum(weights * offsets.astype(float) ** order)
        assert moment / math.factorial(order) == pytest.approx(1.0, rel=1e-14)

    @pytest.mark.parametrize("key", sorted(STENCILS))
    def test_exact_for_polynomials(self, key: tuple) -> None:
        """Test stencils differentiate polynomials of degree order+accuracy-1."""
        order, accuracy = key
        degree = order + accuracy - 1
        x = 0.7
        estimate = derivative(lambda t: t**degree, x, 0.1, order, accuracy)
        exact = math.perm(degree, order) * x ** (degree - order)
        assert float(estimate) == pytest.approx(exact, rel=1e-8)

    def test_unknown_stencil(self) -> None:
        """Test unknown combinations raise InvalidParamError."""
        with pytest.raises(InvalidParamError, match="No central stencil"):
            get_stencil(4, 2)

    def test_half_width(self) -> None:
        """Test the number of samples per side."""
        assert half_width(1, 2) == 1
        assert half_width(3, 4) == 3
        assert half_width(2, 6) == 3


class TestDerivative:
    """Test derivative function."""

    def test_sine(self) -> None:
        """Test the 7-point first derivative of sin."""
        estimate = derivative(math.sin, 0.3, 1e-2, order=1, accuracy=6)
        assert float(estimate) == pytest.approx(math.cos(0.3), abs=1e-10)

    def test_third_derivative(self) -> None:
        """Test the 7-point third derivative of exp."""
        estimate = derivative(math.exp, 0.5, 1e-2, order=3, accuracy=4)
        assert float(estimate) == pytest.approx(math.exp(0.5), abs=1e-7)

    def test_vector_valued(self) -> None:
        """Test vector-valued functions are differentiated componentwise."""

        def curve(t: float) -> np.ndarray:
            return np.array([math.cos(t), math.sin(t), t])

        estimate = derivative(curve, 1.0, 1e-3, order=2, accuracy=4)
        assert estimate.shape == (3,)
        np.testing.assert_allclose(
            estimate, [-math.cos(1.0), -math.sin(1.0), 0.0], atol=1e-8
        )

    def test_non_positive_step(self) -> None:
        """Test the step must be positive."""
        with pytest.raises(InvalidParamError, match="Step must be positive"):
            derivative(math.sin, 0.0, 0.0)


class TestDerivativeAtIndex:
    """Test derivative_at_index function."""

    def test_cubic_samples(self) -> None:
        """Test the third derivative of sampled t^3 is 6."""
        t = np.linspace(0.0, 1.0, 11)
        values = np.stack([t**3, 2.0 * t**3], axis=1)
        estimate = derivative_at_index(values, 5, 0.1, order=3, accuracy=4)
        np.testing.assert_allclose(estimate, [6.0, 12.0], rtol=1e-8)

    def test_stencil_runs_off_the_end(self) -> None:
        """Test indices too close to an end raise InsufficientStencilError."""
        values = np.zeros((10, 3))
        with pytest.raises(InsufficientStencilError, match="needs 3 samples"):
            derivative_at_index(values, 2, 0.1, order=3, accuracy=4)
        with pytest.raises(InsufficientStencilError):
            derivative_at_index(values, 7, 0.1, order=3, accuracy=4)
