"""Linear algebra of the Minkowski 3-space with signature (+, +, -)."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from .utils.error_handling import NonFiniteError

# Absolute band around zero inside which a vector counts as null
NULL_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Vec3:
    """A point or vector of E^3_1 with coordinates (x, y, z)."""

    x: float
    y: float
    z: float

    # numpy scalars defer to __rmul__ instead of broadcasting over Vec3
    __array_ufunc__ = None

    def __post_init__(self) -> None:
        if not (
            math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)
        ):
            raise NonFiniteError(
                f"Vec3 components must be finite: ({self.x}, {self.y}, {self.z})"
            )

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "Vec3":
        """Build a vector from any length-3 sequence or array."""
        if len(values) != 3:
            raise ValueError(f"Expected 3 components, got {len(values)}")
        return cls(float(values[0]), float(values[1]), float(values[2]))

    @classmethod
    def zero(cls) -> "Vec3":
        return cls(0.0, 0.0, 0.0)

    def to_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def norm(self) -> float:
        """Euclidean norm of the coordinate triple."""
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y
        yield self.z

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def __mul__(self, scalar: float) -> "Vec3":
        return Vec3(scalar * self.x, scalar * self.y, scalar * self.z)

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> "Vec3":
        return Vec3(self.x / scalar, self.y / scalar, self.z / scalar)


class CausalClass(str, Enum):
    """Causal character of a vector."""

    NULL = "null"
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    ZERO = "zero"


def mink_inner(u: Vec3, v: Vec3) -> float:
    """Minkowski product g(u, v) = u.x v.x + u.y v.y - u.z v.z."""
    return u.x * v.x + u.y * v.y - u.z * v.z


def mink_norm_sq(v: Vec3) -> float:
    """g(v, v); its sign gives the causal character."""
    return mink_inner(v, v)


def causal_class(v: Vec3, tol: float = NULL_TOLERANCE) -> CausalClass:
    """
    Classify a vector by the sign of g(v, v).

    Args:
        v: Vector to classify
        tol: Absolute band around 0 inside which the vector is null

    Returns:
        ZERO for the zero vector, otherwise NULL, SPACELIKE or TIMELIKE
    """
    if v.x == 0.0 and v.y == 0.0 and v.z == 0.0:
        return CausalClass.ZERO
    q = mink_norm_sq(v)
    if abs(q) <= tol:
        return CausalClass.NULL
    return CausalClass.SPACELIKE if q > 0.0 else CausalClass.TIMELIKE


def det3(u: Vec3, v: Vec3, w: Vec3) -> float:
    """Determinant of the 3x3 matrix with rows u, v, w (cofactor expansion)."""
    return (
        u.x * (v.y * w.z - v.z * w.y)
        - u.y * (v.x * w.z - v.z * w.x)
        + u.z * (v.x * w.y - v.y * w.x)
    )
