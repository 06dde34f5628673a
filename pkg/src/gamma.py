"""
Gamma function by the Lanczos approximation (g = 6.0246..., 13 terms).

The rational sum and its coefficients follow the Boost/Cephes
lanczos_sum_expg_scaled form, accurate to about 1e-15 relative for
positive arguments. Negative non-integers go through the reflection
formula.
"""

import math

import numpy as np

from .utils.error_handling import (
    DomainError,
    NullCurveError,
    OverflowRangeError,
    validate_finite,
)

LANCZOS_G = 6.024680040776729583740234375

# Coefficients in decreasing powers of x, as numpy.polyval expects
_EXPG_SCALED_NUM = np.array(
    [
        0.006061842346248906525783753964555936883222,
        0.5098416655656676188125178644804694509993,
        19.51992788247617482847860966235652136208,
        449.9445569063168119446858607650988409623,
        6955.999602515376140356310115515198987526,
        75999.29304014542649875303443598909137092,
        601859.6171681098786670226533699352302507,
        3481712.15498064590882071018964774556468,
        14605578.08768506808414169982791359218571,
        43338889.32467613834773723740590533316085,
        86363131.28813859145546927288977868422342,
        103794043.1163445451906271053616070238554,
        56906521.91347156388090791033559122686859,
    ]
)
# x (x + 1) ... (x + 11)
_EXPG_SCALED_DEN = np.array(
    [
        1.0,
        66.0,
        1925.0,
        32670.0,
        357423.0,
        2637558.0,
        13339535.0,
        45995730.0,
        105258076.0,
        150917976.0,
        120543840.0,
        39916800.0,
        0.0,
    ]
)

# 30-digit decimal values; checked against gamma() below
GAMMA_ONE_THIRD = 2.67893853470774763365569294097
GAMMA_TWO_THIRDS = 1.35411793942640041694528802815

_CONSTANT_TOLERANCE = 1e-13


def lanczos_sum_expg_scaled(x: float) -> float:
    """Lanczos rational sum scaled by exp(-g)."""
    return float(np.polyval(_EXPG_SCALED_NUM, x) / np.polyval(_EXPG_SCALED_DEN, x))


def gamma(x: float) -> float:
    """
    Gamma function for real arguments.

    Raises:
        DomainError: At the poles x = 0, -1, -2, ...
        OverflowRangeError: If the result exceeds double range
    """
    x = validate_finite(x, "x")
    if x <= 0.0 and x == math.floor(x):
        raise DomainError(f"Gamma has a pole at x={x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    zgh = x + LANCZOS_G - 0.5
    try:
        power = (zgh / math.e) ** (x - 0.5)
    except OverflowError:
        raise OverflowRangeError(f"Gamma({x}) overflows double precision")
    result = lanczos_sum_expg_scaled(x) * power
    if not math.isfinite(result):
        raise OverflowRangeError(f"Gamma({x}) overflows double precision")
    return result


def check_constants() -> None:
    """
    Confirm the embedded decimal constants against the implementation.

    Raises:
        NullCurveError: If either constant disagrees beyond 1e-13 relative
    """
    for arg, constant in ((1.0 / 3.0, GAMMA_ONE_THIRD), (2.0 / 3.0, GAMMA_TWO_THIRDS)):
        computed = gamma(arg)
        if abs(computed / constant - 1.0) > _CONSTANT_TOLERANCE:
            raise NullCurveError(
                f"Gamma({arg}) = {computed!r} disagrees with constant {constant!r}",
                "GammaConstant",
            )


check_constants()
