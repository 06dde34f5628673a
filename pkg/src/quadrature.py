"""
Globally adaptive Gauss-Kronrod (7, 15) quadrature for vector integrands.

The interval with the largest error estimate is bisected until the summed
estimate meets the tolerance. Error estimates use the QUADPACK scaling,
with a floor of 50 u times the absolute integral below which a panel is
treated as resolved to roundoff.
"""

import heapq
import sys
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from .utils.budget import WorkBudget
from .utils.error_handling import QuadratureFailure, validate_tolerance
from .utils.logging import get_logger

logger = get_logger(__name__)

EPS = sys.float_info.epsilon
MAX_DEPTH = 40
ROUNDOFF_FACTOR = 50.0

# Non-negative Kronrod abscissae; odd indices are the 7-point Gauss nodes
XGK = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

# Full 15-node rule on [-1, 1]
_NODES = np.concatenate([-XGK[:-1], XGK[::-1]])
_KRONROD = np.concatenate([WGK[:-1], WGK[::-1]])
_GAUSS = np.zeros(15)
_GAUSS[1:7:2] = WG[:3]
_GAUSS[7] = WG[3]
_GAUSS[9:15:2] = WG[2::-1]

Integrand = Callable[[float], np.ndarray]


@dataclass(frozen=True)
class PanelEstimate:
    """One application of the 15-point rule to [a, b]."""

    a: float
    b: float
    value: np.ndarray
    error: float
    roundoff: float
    depth: int

    @property
    def resolved_to_roundoff(self) -> bool:
        return self.error <= self.roundoff


@dataclass(frozen=True)
class QuadResult:
    value: np.ndarray
    error: float
    panels: int
    evaluations: int
    roundoff_limited: bool


def gk15(func: Integrand, a: float, b: float, depth: int = 0) -> PanelEstimate:
    """
    Apply the Gauss-Kronrod (7, 15) pair to func on [a, b].

    The error estimate is the componentwise maximum of the QUADPACK
    formula resasc * min(1, (200 |K - G| / resasc)^1.5), raised to the
    roundoff floor 50 u resabs.
    """
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    values = np.array(
        [np.asarray(func(center + half * x), dtype=float) for x in _NODES]
    )
    if values.ndim == 1:
        values = values[:, None]
    kronrod = _KRONROD @ values
    gauss = _GAUSS @ values
    mean = 0.5 * kronrod
    resabs = _KRONROD @ np.abs(values) * abs(half)
    resasc = _KRONROD @ np.abs(values - mean) * abs(half)

    raw = np.abs((kronrod - gauss) * half)
    scaled = raw.copy()
    mask = (resasc != 0.0) & (raw != 0.0)
    scaled[mask] = resasc[mask] * np.minimum(
        1.0, (200.0 * raw[mask] / resasc[mask]) ** 1.5
    )
    roundoff = float(np.max(ROUNDOFF_FACTOR * EPS * resabs))
    error = max(float(np.max(scaled)), roundoff)
    return PanelEstimate(a, b, kronrod * half, error, roundoff, depth)


def adaptive_gk15(
    func: Integrand,
    a: float,
    b: float,
    tol: float,
    budget: Optional[WorkBudget] = None,
    max_depth: int = MAX_DEPTH,
) -> QuadResult:
    """
    Integrate a vector-valued function over [a, b] to an absolute tolerance.

    Args:
        func: Integrand returning an array (or scalar)
        a: Lower limit
        b: Upper limit (a > b integrates backward)
        tol: Absolute tolerance on the summed error estimate
        budget: Shared subdivision budget; one unit per bisection
        max_depth: Maximum bisection depth of any panel

    Returns:
        QuadResult with the integral and its error estimate

    Raises:
        QuadratureFailure: If a panel needs more than max_depth bisections
            or the budget runs out
    """
    tol = validate_tolerance(tol)
    if a == b:
        value = np.asarray(func(a), dtype=float)
        return QuadResult(np.zeros_like(value), 0.0, 0, 1, False)

    first = gk15(func, a, b)
    evaluations = 15
    # heap of (-error, counter, panel); the counter keeps ordering total
    heap: List[Tuple[float, int, PanelEstimate]] = [(-first.error, 0, first)]
    done: List[PanelEstimate] = []
    counter = 1
    total_error = first.error

    while heap and total_error > tol:
        _, _, worst = heapq.heappop(heap)
        if worst.resolved_to_roundoff:
            done.append(worst)
            continue
        if worst.depth >= max_depth:
            raise QuadratureFailure(
                f"Panel [{worst.a}, {worst.b}] exceeded bisection depth {max_depth} "
                f"(error {worst.error:.3e}, tolerance {tol:.3e})",
                "MaxDepth",
            )
        if budget is not None and not budget.acquire():
            raise QuadratureFailure(
                f"Subdivision budget of {budget.capacity} exhausted on [{a}, {b}]",
                "BudgetExhausted",
            )
        mid = 0.5 * (worst.a + worst.b)
        total_error -= worst.error
        for lo, hi in ((worst.a, mid), (mid, worst.b)):
            child = gk15(func, lo, hi, worst.depth + 1)
            evaluations += 15
            total_error += child.error
            heapq.heappush(heap, (-child.error, counter, child))
            counter += 1

    panels = done + [p for _, _, p in heap]
    value = sum((p.value for p in panels), np.zeros_like(first.value))
    error = sum(p.error for p in panels)
    roundoff_limited = error > tol
    if roundoff_limited:
        logger.warning(
            f"Quadrature on [{a}, {b}] stopped at the roundoff floor: "
            f"error {error:.3e} > tolerance {tol:.3e}"
        )
    logger.debug(
        f"GK15 on [{a}, {b}]: {len(panels)} panels, {evaluations} evaluations, "
        f"error {error:.3e}"
    )
    if value.shape == (1,):
        value = value.reshape(())
    return QuadResult(value, error, len(panels), evaluations, roundoff_limited)
