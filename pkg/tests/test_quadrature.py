"""Tests for adaptive Gauss-Kronrod quadrature."""

import math

import numpy as np
import pytest
from scipy import integrate

from src.quadrature import adaptive_gk15, gk15
from src.utils.budget import WorkBudget
from src.utils.error_handling import InvalidParamError, QuadratureFailure


class TestGk15:
    """Test the single-panel rule."""

    def test_polynomial_exact(self) -> None:
        """Test the 15-point rule integrates x^10 exactly."""
        panel = gk15(lambda x: x**10, 0.0, 1.0)
        assert float(panel.value[0]) == pytest.approx(1.0 / 11.0, rel=1e-14)

    def test_error_estimate_floor(self) -> None:
        """Test the error estimate never drops below the roundoff floor."""
        panel = gk15(lambda x: 1.0, 0.0, 2.0)
        assert panel.error >= panel.roundoff > 0.0
        assert panel.resolved_to_roundoff

    def test_vector_valued(self) -> None:
        """Test componentwise integration."""
        panel = gk15(lambda x: np.array([1.0, x, x * x]), 0.0, 3.0)
        np.testing.assert_allclose(panel.value, [3.0, 4.5, 9.0], rtol=1e-14)


class TestAdaptiveGk15:
    """Test adaptive_gk15 against scipy.integrate.quad."""

    @pytest.mark.parametrize(
        "func, a, b",
        [
            (math.sin, 0.0, math.pi),
            (math.exp, -1.0, 2.0),
            (lambda x: 1.0 / (1.0 + 25.0 * x * x), -1.0, 1.0),
            (lambda x: math.cos(20.0 * x), 0.0, 3.0),
            (math.sqrt, 0.0, 1.0),
        ],
    )
    def test_against_scipy(self, func, a: float, b: float) -> None:
        """Test accuracy on smooth, peaked, oscillatory and endpoint-singular
        integrands."""
        result = adaptive_gk15(func, a, b, tol=1e-12)
        reference, _ = integrate.quad(func, a, b, epsabs=1e-14, epsrel=1e-14)
        assert float(result.value) == pytest.approx(reference, abs=1e-11)
        assert result.error <= 1e-12
        assert not result.roundoff_limited

    def test_vector_valued(self) -> None:
        """Test vector-valued integrands share the subdivision."""
        result = adaptive_gk15(
            lambda x: np.array([math.cos(x), math.sin(x)]), 0.0, 1.0, tol=1e-12
        )
        np.testing.assert_allclose(
            result.value, [math.sin(1.0), 1.0 - math.cos(1.0)], atol=1e-12
        )

    def test_backward(self) -> None:
        """Test b < a integrates backward."""
        result = adaptive_gk15(lambda x: x * x, 1.0, 0.0, tol=1e-12)
        assert float(result.value) == pytest.approx(-1.0 / 3.0, rel=1e-14)

    def test_empty_interval(self) -> None:
        """Test a == b gives zeros of the integrand's shape."""
        result = adaptive_gk15(lambda x: np.array([x, x, x]), 0.5, 0.5, tol=1e-10)
        np.testing.assert_array_equal(result.value, np.zeros(3))
        assert result.error == 0.0

    def test_budget_exhausted(self) -> None:
        """Test a shared budget stops the subdivision."""
        budget = WorkBudget(capacity=2)
        with pytest.raises(QuadratureFailure, match="budget") as info:
            adaptive_gk15(
                lambda x: math.sin(50.0 * x), 0.0, 10.0, tol=1e-13, budget=budget
            )
        assert info.value.error_code == "BudgetExhausted"

    def test_max_depth(self) -> None:
        """Test the bisection depth limit."""
        with pytest.raises(QuadratureFailure, match="depth") as info:
            adaptive_gk15(
                lambda x: math.sin(50.0 * x), 0.0, 10.0, 1e-13, max_depth=2
            )
        assert info.value.error_code == "MaxDepth"

    def test_budget_accounting(self) -> None:
        """Test each bisection draws one unit."""
        budget = WorkBudget(capacity=1000)
        result = adaptive_gk15(math.exp, 0.0, 5.0, tol=1e-13, budget=budget)
        assert budget.used == result.panels - 1

    def test_invalid_tolerance(self) -> None:
        """Test the tolerance must be positive."""
        with pytest.raises(InvalidParamError):
            adaptive_gk15(math.exp, 0.0, 1.0, tol=0.0)
