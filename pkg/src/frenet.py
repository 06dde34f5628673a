"""
Cartan frame (L, N, W) and torsion of the null curve of a generator.

With P = (2f, f^2 - 1, f^2 + 1), Q = (1, f, f) and R = (0, 1, 1):

    L = (eps / 2f') P
    W = -(eps f'' / 2f'^2) P + eps Q
    N = -(eps f''^2 / 4f'^3) P + (eps f'' / f') Q - eps f' R

and the torsion is the Schwarzian of f, which also equals
(1/2) g(alpha''', alpha''').
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .finite_difference import derivative, derivative_at_index
from .generator import Generator
from .minkowski import Vec3, det3, mink_inner
from .schwarzian import Jet3, schwarzian_of_jet
from .synthesis import SampledCurve
from .utils.error_handling import (
    DomainError,
    InsufficientStencilError,
    NullCurveError,
    validate_epsilon,
)
from .utils.logging import get_logger

logger = get_logger(__name__)

# Relative tolerance on the local grid spacing for the 7-point stencil
SPACING_TOLERANCE = 1e-6
DEFAULT_FRAME_STEP = 1e-4


@dataclass(frozen=True)
class FrenetFrame:
    L: Vec3
    N: Vec3
    W: Vec3

    def gram_residual(self) -> float:
        """Largest deviation from g(L,N) = g(W,W) = 1 and the four zeros."""
        L, N, W = self.L, self.N, self.W
        return max(
            abs(mink_inner(L, N) - 1.0),
            abs(mink_inner(W, W) - 1.0),
            abs(mink_inner(L, L)),
            abs(mink_inner(L, W)),
            abs(mink_inner(N, N)),
            abs(mink_inner(N, W)),
        )

    def determinant(self) -> float:
        return det3(self.L, self.N, self.W)

    def as_rows(self) -> np.ndarray:
        return np.array([self.L.to_array(), self.N.to_array(), self.W.to_array()])


@dataclass(frozen=True)
class FrameDiagnostics:
    gram_residual: float
    frenet_residual: float
    det_value: float
    torsion_mismatch: float
    normal_residual: float

    def worst_equation_residual(self) -> float:
        return max(self.frenet_residual, self.normal_residual, self.torsion_mismatch)


def _basis(f: float) -> Tuple[Vec3, Vec3, Vec3]:
    return (
        Vec3(2.0 * f, f * f - 1.0, f * f + 1.0),
        Vec3(1.0, f, f),
        Vec3(0.0, 1.0, 1.0),
    )


def frame_from_jet(j: Jet3, epsilon: int) -> FrenetFrame:
    """The frame in terms of the jet of f at one point."""
    if j.f1 == 0.0:
        raise DomainError(f"Frame needs f' != 0, got jet {j}")
    P, Q, R = _basis(j.f0)
    f1, f2 = j.f1, j.f2
    L = (epsilon / (2.0 * f1)) * P
    W = (-epsilon * f2 / (2.0 * f1 * f1)) * P + epsilon * Q
    N = (
        (-epsilon * f2 * f2 / (4.0 * f1**3)) * P
        + (epsilon * f2 / f1) * Q
        - (epsilon * f1) * R
    )
    return FrenetFrame(L, N, W)


def frame_at(gen: Generator, epsilon: int, s: float) -> FrenetFrame:
    """
    Closed-form frame of the curve of gen at s.

    Raises:
        DomainError: If s lies outside the span of gen or f' vanishes there
    """
    return frame_from_jet(gen.eval(s), validate_epsilon(epsilon))


def acceleration_jet(gen: Generator, epsilon: int, s: float) -> Vec3:
    """
    alpha''' = W' from the jet:
    -eps (f'''/2f'^2 - f''^2/f'^3) P - (eps f''/f') Q + eps f' R.
    """
    epsilon = validate_epsilon(epsilon)
    j = gen.eval(s)
    if j.f1 == 0.0:
        raise DomainError(f"alpha''' needs f' != 0, got jet {j}")
    P, Q, R = _basis(j.f0)
    f1, f2, f3 = j.f1, j.f2, j.f3
    return (
        (-epsilon * (f3 / (2.0 * f1 * f1) - f2 * f2 / f1**3)) * P
        - (epsilon * f2 / f1) * Q
        + (epsilon * f1) * R
    )


def torsion_schwarzian(gen: Generator, s: float) -> float:
    """Torsion at s as the Schwarzian of the generator."""
    return schwarzian_of_jet(gen.eval(s))


def torsion_from_acceleration(
    curve: SampledCurve, index: int, spacing_tol: float = SPACING_TOLERANCE
) -> float:
    """
    Torsion (1/2) g(alpha''', alpha''') from sampled positions.

    alpha''' comes from the 7-point central stencil, so the error is
    O(h^4) from truncation plus O(u / h^3) from roundoff in the positions.

    Args:
        curve: Sampled curve
        index: Sample index with three neighbours on each side
        spacing_tol: Relative tolerance on uniform local spacing

    Raises:
        InsufficientStencilError: If the stencil does not fit or the local
            spacing is not uniform
    """
    s = curve.parameters()
    if index - 3 < 0 or index + 3 >= len(s):
        raise InsufficientStencilError(
            f"Index {index} needs 3 samples on each side (curve has {len(s)})"
        )
    steps = np.diff(s[index - 3 : index + 4])
    h = float(np.mean(steps))
    if np.max(np.abs(steps - h)) > spacing_tol * abs(h):
        raise InsufficientStencilError(
            f"Spacing around index {index} is not uniform: {steps}"
        )
    a3 = Vec3.from_array(
        derivative_at_index(curve.positions(), index, h, order=3, accuracy=4)
    )
    return 0.5 * mink_inner(a3, a3)


def torsion_along(
    curve: SampledCurve, spacing_tol: float = SPACING_TOLERANCE
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Torsion from positions at every index where the stencil fits.

    Returns:
        (parameters, torsions) for the usable indices
    """
    params = []
    values = []
    s = curve.parameters()
    for i in range(3, len(curve) - 3):
        try:
            values.append(torsion_from_acceleration(curve, i, spacing_tol))
        except InsufficientStencilError:
            continue
        params.append(s[i])
    return np.array(params), np.array(values)


def frenet_residuals(
    gen: Generator, epsilon: int, s: float, h: Optional[float] = None
) -> FrameDiagnostics:
    """
    Check the frame equations L' = W, N' = tau W, W' = -tau L - N at s.

    Frame derivatives are 5-point central differences of the closed-form
    frame, with tau taken from the Schwarzian. The torsion mismatch
    compares the Schwarzian with (1/2) g(W', W'), and the normal residual
    checks N = -alpha''' - (1/2) g(alpha''', alpha''') L with alpha''' = W'.

    Args:
        gen: Generator
        epsilon: Orientation
        s: Evaluation point; [s - 2h, s + 2h] must lie in the span
        h: Difference step (default 1e-4)

    Raises:
        DomainError: If the stencil leaves the span of gen
    """
    epsilon = validate_epsilon(epsilon)
    if h is None:
        h = DEFAULT_FRAME_STEP
    if not (gen.span.contains(s - 2.0 * h) and gen.span.contains(s + 2.0 * h)):
        raise DomainError(f"[{s - 2 * h}, {s + 2 * h}] leaves the span {gen.span}")

    frame = frame_at(gen, epsilon, s)
    tau = torsion_schwarzian(gen, s)

    def rows(t: float) -> np.ndarray:
        return frame_at(gen, epsilon, t).as_rows()

    try:
        d = derivative(rows, s, h, order=1, accuracy=4)
    except NullCurveError as e:
        raise DomainError(f"Frame not differentiable at s={s}: {e}")
    dL, dN, dW = (Vec3.from_array(row) for row in d)
    L, N, W = frame.L, frame.N, frame.W

    residuals = np.concatenate(
        [
            (dL - W).to_array(),
            (dN - tau * W).to_array(),
            (dW + tau * L + N).to_array(),
        ]
    )
    torsion_fd = 0.5 * mink_inner(dW, dW)
    normal_fd = -1.0 * dW - (0.5 * mink_inner(dW, dW)) * L
    diagnostics = FrameDiagnostics(
        gram_residual=frame.gram_residual(),
        frenet_residual=float(np.max(np.abs(residuals))),
        det_value=frame.determinant(),
        torsion_mismatch=abs(tau - torsion_fd),
        normal_residual=float(np.max(np.abs((N - normal_fd).to_array()))),
    )
    logger.debug(f"Frame diagnostics for {gen.label} at s={s}: {diagnostics}")
    return diagnostics
