import logging
import math
from functools import wraps
from typing import Any, Callable, Iterable, List, Optional, Type


class NullCurveError(Exception):
    """Base exception for null-curve computations."""

    def __init__(self, message: str, error_code: Optional[str] = None):
        super().__init__(message)
        self.error_code = error_code


class DomainError(NullCurveError):
    """Raised when a parameter lies outside the domain of an operation."""

    pass


class PoleError(DomainError):
    """Raised when a fractional-linear map is evaluated at its pole."""

    pass


class OverflowRangeError(DomainError):
    """Raised when an argument would overflow double precision."""

    pass


class InvalidParamError(NullCurveError):
    """Raised when a construction parameter violates its constraints."""

    pass


class InvalidMapError(InvalidParamError):
    """Raised when a fractional-linear map is degenerate (ad - bc = 0)."""

    pass


class EmptyDomainError(InvalidParamError):
    """Raised when no admissible interval exists for a generator."""

    pass


class QuadratureFailure(NullCurveError):
    """Raised when adaptive quadrature cannot meet its tolerance."""

    pass


class InsufficientStencilError(NullCurveError):
    """Raised when a finite-difference stencil does not fit the samples."""

    pass


class NonFiniteError(NullCurveError):
    """Raised when a NaN or infinite value enters a computation."""

    pass


class ConfigError(NullCurveError):
    """Raised when run configuration is malformed."""

    pass


def handle_numeric_errors(
    logger: Optional[logging.Logger] = None,
    reraise_as: Optional[Type[NullCurveError]] = None,
) -> Callable:
    """
    Decorator to map floating-point failures onto the library's exceptions.

    Args:
        logger: Logger instance for error logging
        reraise_as: Exception type for unexpected errors (defaults to
            NullCurveError)

    Returns:
        Decorated function with error handling
    """
    if reraise_as is None:
        reraise_as = NullCurveError

    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            try:
                return func(*args, **kwargs)
            except NullCurveError:
                # Re-raise our own exceptions as-is
                raise

            except ZeroDivisionError as e:
                if logger:
                    logger.error(f"Division by zero in {func.__name__}: {e}")
                raise DomainError(
                    f"Division by zero in {func.__name__}: {e}", "ZeroDivision"
                )

            except OverflowError as e:
                if logger:
                    logger.error(f"Overflow in {func.__name__}: {e}")
                raise OverflowRangeError(
                    f"Overflow in {func.__name__}: {e}", "Overflow"
                )

            except FloatingPointError as e:
                if logger:
                    logger.error(f"Floating point error in {func.__name__}: {e}")
                raise DomainError(
                    f"Floating point error in {func.__name__}: {e}", "FloatingPoint"
                )

            except ValueError as e:
                # math.sqrt, math.log and friends signal domain errors this way
                if logger:
                    logger.error(f"Math domain error in {func.__name__}: {e}")
                raise DomainError(f"Math domain error: {e}", "MathDomain")

            except Exception as e:
                if logger:
                    logger.exception(f"Unexpected error in {func.__name__}: {e}")
                raise reraise_as(f"Unexpected error: {e}")

        return wrapper

    return decorator


def validate_finite(value: float, name: str = "value") -> float:
    """
    Validate that a scalar is finite.

    Raises:
        NonFiniteError: If the value is NaN or infinite
    """
    value = float(value)
    if not math.isfinite(value):
        raise NonFiniteError(f"{name} must be finite, got {value}")
    return value


def validate_epsilon(epsilon: float) -> int:
    """
    Validate and normalize an orientation sign.

    Args:
        epsilon: Orientation, +1 or -1 (ints or floats accepted)

    Returns:
        The sign as an int

    Raises:
        InvalidParamError: If epsilon is not +1 or -1
    """
    if epsilon not in (1, -1):
        raise InvalidParamError(f"epsilon must be +1 or -1, got {epsilon}")
    return int(epsilon)


def validate_tolerance(tol: float) -> float:
    """
    Validate a positive, finite tolerance.

    Raises:
        InvalidParamError: If tol is not a positive finite number
    """
    tol = float(tol)
    if not math.isfinite(tol) or tol <= 0.0:
        raise InvalidParamError(f"Tolerance must be positive and finite: {tol}")
    return tol


def validate_grid(grid: Iterable[float], min_points: int = 1) -> List[float]:
    """
    Validate a parameter grid.

    Args:
        grid: Parameter values
        min_points: Minimum number of points required

    Returns:
        The grid as a list of floats

    Raises:
        InvalidParamError: If the grid is too short, not strictly increasing,
            or contains non-finite values
    """
    values = [float(s) for s in grid]
    if len(values) < min_points:
        raise InvalidParamError(
            f"Grid needs at least {min_points} points, got {len(values)}"
        )
    for s in values:
        if not math.isfinite(s):
            raise InvalidParamError(f"Grid contains a non-finite value: {s}")
    for left, right in zip(values, values[1:]):
        if not right > left:
            raise InvalidParamError(
                f"Grid must be strictly increasing ({left} followed by {right})"
            )
    return values
