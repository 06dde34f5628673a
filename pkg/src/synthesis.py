"""
Null curves from a generator f.

The velocity of the curve is

    alpha'(s) = (epsilon / 2 f'(s)) (2 f, f^2 - 1, f^2 + 1),

which is null for every f, and the curve is its running integral from an
anchor (s0, alpha0). Integration runs segment by segment over the sample
grid, outward from s0 in both directions.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .config import default_tolerance
from .generator import Generator
from .minkowski import Vec3
from .quadrature import adaptive_gk15
from .schwarzian import Jet3
from .utils.budget import WorkBudget
from .utils.error_handling import (
    DomainError,
    InvalidParamError,
    NonFiniteError,
    validate_epsilon,
    validate_finite,
    validate_grid,
    validate_tolerance,
)
from .utils.logging import get_logger

logger = get_logger(__name__)

# Offset used to take limits at removable points of the integrand
REMOVABLE_OFFSET = 1e-7


@dataclass(frozen=True)
class CurveSpec:
    """Generator, orientation and anchor of a curve."""

    gen: Generator
    epsilon: int
    s0: float
    alpha0: Vec3

    def __post_init__(self) -> None:
        object.__setattr__(self, "epsilon", validate_epsilon(self.epsilon))
        s0 = validate_finite(self.s0, "s0")
        if not self.gen.span.contains_closed(s0):
            raise DomainError(
                f"Anchor s0={s0} lies outside the span {self.gen.span} "
                f"of {self.gen.label}"
            )
        object.__setattr__(self, "s0", s0)


@dataclass(frozen=True)
class CurveSample:
    s: float
    pos: Vec3
    err: float


@dataclass(frozen=True)
class SampledCurve:
    """Positions of a curve on a strictly increasing parameter grid."""

    spec: CurveSpec
    samples: Tuple[CurveSample, ...]

    def __post_init__(self) -> None:
        for left, right in zip(self.samples, self.samples[1:]):
            if not right.s > left.s:
                raise InvalidParamError(
                    f"Samples must be strictly increasing in s ({left.s}, {right.s})"
                )

    def __len__(self) -> int:
        return len(self.samples)

    def parameters(self) -> np.ndarray:
        return np.array([p.s for p in self.samples])

    def positions(self) -> np.ndarray:
        """Positions as an (n, 3) array."""
        return np.array([[p.pos.x, p.pos.y, p.pos.z] for p in self.samples])

    def errors(self) -> np.ndarray:
        return np.array([p.err for p in self.samples])

    def index_of(self, s: float) -> int:
        """Index of the sample at exactly s."""
        for i, p in enumerate(self.samples):
            if p.s == s:
                return i
        raise InvalidParamError(f"No sample at s={s}")

    def at(self, s: float) -> CurveSample:
        return self.samples[self.index_of(s)]

    def path_length(self) -> float:
        """Euclidean length of the polyline through the samples."""
        pts = self.positions()
        if len(pts) < 2:
            return 0.0
        return float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))


def velocity_from_jet(j: Jet3, epsilon: int) -> Vec3:
    """(epsilon / 2 f') (2 f, f^2 - 1, f^2 + 1)."""
    if j.f1 == 0.0:
        raise DomainError(f"Velocity needs f' != 0, got jet {j}")
    scale = epsilon / (2.0 * j.f1)
    f2 = j.f0 * j.f0
    return Vec3(scale * 2.0 * j.f0, scale * (f2 - 1.0), scale * (f2 + 1.0))


def integrand(gen: Generator, epsilon: int, s: float) -> Vec3:
    """
    Velocity of the curve generated by gen at s.

    At removable points of the span (poles of f, or a zero of f' cancelled
    by the growth of f) the value is the limit from both sides, or the
    extrapolated one-sided limit at an end of the span.

    Raises:
        DomainError: Outside the closed span of gen
    """
    if not gen.span.contains_closed(s):
        raise DomainError(f"s={s} lies outside the span {gen.span} of {gen.label}")
    try:
        return velocity_from_jet(gen.eval(s), epsilon)
    except (DomainError, NonFiniteError) as e:
        delta = REMOVABLE_OFFSET * max(1.0, abs(s))
        logger.debug(f"Removable point of {gen.label} at s={s}: {e}")
        left_ok = gen.span.contains(s - 2.0 * delta)
        right_ok = gen.span.contains(s + 2.0 * delta)
        if left_ok and right_ok:
            below = velocity_from_jet(gen.eval(s - delta), epsilon)
            above = velocity_from_jet(gen.eval(s + delta), epsilon)
            return 0.5 * (below + above)
        step = delta if right_ok else -delta
        near = velocity_from_jet(gen.eval(s + step), epsilon)
        far = velocity_from_jet(gen.eval(s + 2.0 * step), epsilon)
        return 2.0 * near - far


def integrate_interval(
    gen: Generator,
    epsilon: int,
    a: float,
    b: float,
    tol: Optional[float] = None,
    budget: Optional[WorkBudget] = None,
) -> Tuple[Vec3, float]:
    """
    Integral of the velocity from a to b (b < a integrates backward).

    Returns:
        The increment alpha(b) - alpha(a) and its error estimate
    """
    tol = validate_tolerance(tol if tol is not None else default_tolerance())
    epsilon = validate_epsilon(epsilon)
    for s in (a, b):
        if not gen.span.contains_closed(s):
            raise DomainError(
                f"s={s} lies outside the span {gen.span} of {gen.label}"
            )

    def component_values(t: float) -> np.ndarray:
        return integrand(gen, epsilon, t).to_array()

    result = adaptive_gk15(component_values, a, b, tol, budget)
    return Vec3.from_array(result.value), result.error


def synthesize(
    spec: CurveSpec,
    grid: Iterable[float],
    tol: Optional[float] = None,
    budget: Optional[WorkBudget] = None,
) -> SampledCurve:
    """
    Sample the curve of spec on a grid.

    The samples are the grid points together with s0. Each segment between
    neighbouring samples is integrated to tol times (its parameter length,
    plus 1 for the segment touching s0), so the error estimate at s is at
    most tol (1 + |s - s0|).

    The scale is the parameter (pseudo-arc) length, not the Euclidean path
    length, so curves with large |alpha'| get the same absolute tolerance
    per unit of s and a smaller one per unit of distance travelled.

    Args:
        spec: Generator, orientation and anchor
        grid: Strictly increasing parameters inside the closed span
        tol: Absolute tolerance scale (defaults to default_tolerance())
        budget: Subdivision budget shared by all segments

    Returns:
        SampledCurve with accumulated error estimates

    Raises:
        DomainError: If a grid point lies outside the span
        QuadratureFailure: If a segment cannot be resolved
    """
    tol = validate_tolerance(tol if tol is not None else default_tolerance())
    values = validate_grid(grid, min_points=1)
    gen = spec.gen
    for s in values:
        if not gen.span.contains_closed(s):
            raise DomainError(f"Grid point s={s} lies outside the span {gen.span}")
    if budget is None:
        budget = WorkBudget()

    points = sorted(set(values) | {spec.s0})
    i0 = points.index(spec.s0)
    positions: Dict[int, Tuple[Vec3, float]] = {i0: (spec.alpha0, 0.0)}

    for direction in (1, -1):
        pos, err = spec.alpha0, 0.0
        i = i0
        first = True
        while 0 <= i + direction < len(points):
            a, b = points[i], points[i + direction]
            seg_tol = tol * (abs(b - a) + (1.0 if first else 0.0))
            increment, seg_err = integrate_interval(
                gen, spec.epsilon, a, b, seg_tol, budget
            )
            pos = pos + increment
            err += seg_err
            i += direction
            positions[i] = (pos, err)
            first = False
            logger.debug(f"{gen.label}: segment [{a}, {b}] error {seg_err:.3e}")

    samples = tuple(
        CurveSample(s, positions[i][0], positions[i][1]) for i, s in enumerate(points)
    )
    curve = SampledCurve(spec, samples)
    max_err = max(p.err for p in samples)
    logger.info(
        f"Synthesized {gen.label} (epsilon={spec.epsilon:+d}) on {len(samples)} "
        f"samples, max error estimate {max_err:.3e}, {budget.used} subdivisions"
    )
    return curve


def synthesize_many(
    specs: Sequence[CurveSpec],
    grid: Iterable[float],
    tol: Optional[float] = None,
    max_workers: Optional[int] = None,
) -> List[SampledCurve]:
    """
    Synthesize independent curves concurrently.

    Each curve gets its own subdivision budget; results keep the order of
    specs.
    """
    values = list(grid)
    if not specs:
        return []
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = [pool.submit(synthesize, spec, values, tol) for spec in specs]
        return [future.result() for future in futures]
