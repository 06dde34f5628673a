"""
Central finite-difference stencils.

Tables are keyed by (derivative order, accuracy order) and hold the
offsets, in units of h, together with their weights.
"""

from typing import Callable, Dict, Tuple, TypeVar, Union

import numpy as np

from .utils.error_handling import InsufficientStencilError, InvalidParamError

Stencil = Tuple[np.ndarray, np.ndarray]
T = TypeVar("T", float, np.ndarray)

STENCILS: Dict[Tuple[int, int], Stencil] = {
    (1, 2): (np.arange(-1, 2), np.array([-1 / 2, 0.0, 1 / 2])),
    (1, 4): (np.arange(-2, 3), np.array([1 / 12, -2 / 3, 0.0, 2 / 3, -1 / 12])),
    (1, 6): (
        np.arange(-3, 4),
        np.array([-1 / 60, 3 / 20, -3 / 4, 0.0, 3 / 4, -3 / 20, 1 / 60]),
    ),
    (2, 2): (np.arange(-1, 2), np.array([1.0, -2.0, 1.0])),
    (2, 4): (np.arange(-2, 3), np.array([-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12])),
    (2, 6): (
        np.arange(-3, 4),
        np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90]),
    ),
    (3, 2): (np.arange(-2, 3), np.array([-1 / 2, 1.0, 0.0, -1.0, 1 / 2])),
    (3, 4): (
        np.arange(-3, 4),
        np.array([1 / 8, -1.0, 13 / 8, 0.0, -13 / 8, 1.0, -1 / 8]),
    ),
}


def get_stencil(order: int, accuracy: int) -> Stencil:
    """Look up the central stencil for a derivative order and accuracy."""
    try:
        return STENCILS[(order, accuracy)]
    except KeyError:
        raise InvalidParamError(
            f"No central stencil for derivative {order} at accuracy {accuracy}"
        )


def half_width(order: int, accuracy: int) -> int:
    """Number of samples the stencil needs on each side of the centre."""
    offsets, _ = get_stencil(order, accuracy)
    return int(offsets[-1])


def derivative(
    func: Callable[[float], T],
    x: float,
    h: float,
    order: int = 1,
    accuracy: int = 2,
) -> Union[float, np.ndarray]:
    """
    Differentiate a scalar- or vector-valued function at x.

    Args:
        func: Function of one real variable
        x: Evaluation point
        h: Step size
        order: Derivative order (1, 2 or 3)
        accuracy: Order of the truncation error in h

    Returns:
        The derivative estimate, with the shape of func's output
    """
    if h <= 0.0:
        raise InvalidParamError(f"Step must be positive, got {h}")
    offsets, weights = get_stencil(order, accuracy)
    total: Union[float, np.ndarray] = 0.0
    for k, w in zip(offsets, weights):
        if w == 0.0:
            continue
        total = total + w * np.asarray(func(x + k * h), dtype=float)
    return total / h**order


def derivative_at_index(
    values: np.ndarray,
    index: int,
    h: float,
    order: int,
    accuracy: int,
) -> np.ndarray:
    """
    Apply a central stencil to uniformly spaced samples.

    Args:
        values: Samples, one row per parameter value
        index: Centre row
        h: Sample spacing
        order: Derivative order
        accuracy: Order of the truncation error in h

    Raises:
        InsufficientStencilError: If the stencil runs off either end
    """
    offsets, weights = get_stencil(order, accuracy)
    width = int(offsets[-1])
    if index - width < 0 or index + width >= len(values):
        raise InsufficientStencilError(
            f"Index {index} needs {width} samples on each side "
            f"(have {index} before and {len(values) - index - 1} after)"
        )
    rows = values[index - width : index + width + 1]
    return np.tensordot(weights, rows, axes=1) / h**order
