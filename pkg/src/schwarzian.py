"""
Schwarzian derivative and fractional-linear (Möbius) maps of the real line.

S(f) = (f''/f')' - (1/2)(f''/f')^2 is invariant under post-composition with
r -> (ar + b)/(cr + d). Maps are evaluated over R only, so the pole of a
map is an error rather than the point at infinity.
"""

import math
import sys
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from .utils.error_handling import (
    DomainError,
    InvalidMapError,
    NonFiniteError,
    PoleError,
    validate_finite,
)

EPS = sys.float_info.epsilon

# Samples and degree of the local fit behind schwarzian_fd
FD_FIT_POINTS = 4001
FD_FIT_DEGREE = 4


@dataclass(frozen=True)
class Jet3:
    """Value and first three derivatives of a function at a point."""

    f0: float
    f1: float
    f2: float
    f3: float

    def __post_init__(self) -> None:
        for name in ("f0", "f1", "f2", "f3"):
            if not math.isfinite(getattr(self, name)):
                raise NonFiniteError(f"Jet component {name} is not finite: {self}")

    def negate(self) -> "Jet3":
        """Jet of -f."""
        return Jet3(-self.f0, -self.f1, -self.f2, -self.f3)

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.f0, self.f1, self.f2, self.f3)


@dataclass(frozen=True)
class MobiusMap:
    """The map T(r) = (a r + b)/(c r + d) with a d - b c != 0."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d"):
            validate_finite(getattr(self, name), name)
        if self.determinant == 0.0:
            raise InvalidMapError(
                f"Degenerate map (ad - bc = 0): a={self.a}, b={self.b}, "
                f"c={self.c}, d={self.d}"
            )

    @property
    def determinant(self) -> float:
        return self.a * self.d - self.b * self.c

    def pole(self) -> Optional[float]:
        """The real point sent to infinity, or None for affine maps."""
        if self.c == 0.0:
            return None
        return -self.d / self.c

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """The map self o other."""
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)


def schwarzian_of_jet(j: Jet3) -> float:
    """
    Schwarzian derivative from a 3-jet: f'''/f' - (3/2)(f''/f')^2.

    Raises:
        DomainError: If f' vanishes
    """
    if j.f1 == 0.0:
        raise DomainError(f"Schwarzian needs f' != 0, got jet {j}")
    r = j.f2 / j.f1
    return j.f3 / j.f1 - 1.5 * r * r


def schwarzian_rational(j: Jet3) -> float:
    """The same quantity in the form (2 f' f''' - 3 f''^2) / (2 f'^2)."""
    if j.f1 == 0.0:
        raise DomainError(f"Schwarzian needs f' != 0, got jet {j}")
    return (2.0 * j.f1 * j.f3 - 3.0 * j.f2 * j.f2) / (2.0 * j.f1 * j.f1)


def default_fd_step(s: float) -> float:
    """h = u^(1/5) max(1, |s|): truncation O(h^2) balanced against O(u/h^3)."""
    return EPS**0.2 * max(1.0, abs(s))


def schwarzian_fd(
    f: Callable[[float], float], s: float, h: Optional[float] = None
) -> float:
    """
    Estimate S(f)(s) from samples of f alone on [s - 3h, s + 3h].

    f', f'' and f''' come from a least-squares quartic through FD_FIT_POINTS
    equally spaced samples of that window. On a symmetric window this is a
    wide central stencil: the truncation error is O(h^2) and the roundoff
    term O(u |f| / h^3), with a constant well below that of the 5-point
    third difference. Offsets are taken from the rounded abscissae, so the
    rounding of s + t does not enter as noise.

    Args:
        f: Function of one real variable, evaluable on [s - 3h, s + 3h]
        s: Evaluation point
        h: Step (defaults to default_fd_step(s))

    Raises:
        DomainError: If the f' estimate is lost in roundoff noise
    """
    if h is None:
        h = default_fd_step(s)
    half = 3.0 * h
    points = s + np.linspace(-half, half, FD_FIT_POINTS)
    values = np.array([f(float(p)) for p in points])
    if not np.all(np.isfinite(values)):
        raise DomainError(f"f is not finite on [{s - half}, {s + half}]")

    c = P.polyfit((points - s) / half, values, FD_FIT_DEGREE)
    d1 = c[1] / half
    d2 = 2.0 * c[2] / half**2
    d3 = 6.0 * c[3] / half**3

    scale = float(np.max(np.abs(values)))
    noise = EPS * max(scale, sys.float_info.min) / h
    if abs(d1) < 10.0 * noise:
        raise DomainError(
            f"f' estimate {d1:.3e} at s={s} is below 10x its roundoff noise "
            f"{noise:.3e}"
        )
    r = d2 / d1
    return float(d3 / d1 - 1.5 * r * r)


def mobius_apply(T: MobiusMap, r: float) -> float:
    """
    Evaluate T(r) = (a r + b)/(c r + d).

    Raises:
        PoleError: If c r + d = 0
    """
    den = T.c * r + T.d
    if den == 0.0:
        raise PoleError(f"r={r} is the pole of {T}")
    return (T.a * r + T.b) / den


def compose_jet(outer: Tuple[float, float, float, float], inner: Jet3) -> Jet3:
    """
    Third-order chain rule for g o f.

    Args:
        outer: (g, g', g'', g''') evaluated at f(s)
        inner: Jet of f at s

    Returns:
        Jet of g o f at s
    """
    g0, g1, g2, g3 = outer
    f1, f2, f3 = inner.f1, inner.f2, inner.f3
    return Jet3(
        g0,
        g1 * f1,
        g2 * f1 * f1 + g1 * f2,
        g3 * f1 * f1 * f1 + 3.0 * g2 * f1 * f2 + g1 * f3,
    )


def mobius_jet(T: MobiusMap, j: Jet3) -> Jet3:
    """
    Push a 3-jet forward through T.

    Raises:
        PoleError: If c f0 + d = 0
    """
    den = T.c * j.f0 + T.d
    if den == 0.0:
        raise PoleError(f"f0={j.f0} is the pole of {T}")
    det = T.determinant
    t1 = det / (den * den)
    t2 = -2.0 * T.c * t1 / den
    t3 = -3.0 * T.c * t2 / den
    return compose_jet(((T.a * j.f0 + T.b) / den, t1, t2, t3), j)
