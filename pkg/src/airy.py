"""
Real Airy functions Ai, Bi and the curve family with torsion -2 lam s.

Evaluation uses three regimes:

* |x| <= 2: the Maclaurin series of the two standard solutions of
  y'' = x y, combined with the exact values at the origin.
* 2 < |x| <= 8: exact Taylor re-centering of y'' = x y in steps of length
  at most 1. Negative arguments step outward from the origin (the
  oscillatory side is neutrally stable). Ai on the positive side steps
  backward from its asymptotic value at x = 8, the direction in which it
  is dominant. Bi on the positive side keeps the Maclaurin series, whose
  terms are all positive there.
* |x| > 8: the exponential (x > 8) and trigonometric (x < -8)
  asymptotic expansions, truncated at the smallest term. At |x| = 8 that
  term is below 1e-13 relative.
"""

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, List, Tuple

import numpy as np

from .finite_difference import derivative
from .gamma import GAMMA_ONE_THIRD, GAMMA_TWO_THIRDS
from .minkowski import Vec3
from .utils.error_handling import (
    InvalidParamError,
    OverflowRangeError,
    handle_numeric_errors,
    validate_finite,
)
from .utils.logging import get_logger

if TYPE_CHECKING:
    from .generator import Generator

logger = get_logger(__name__)

EPS = 2.220446049250313e-16
SQRT3 = math.sqrt(3.0)
SQRT_PI = math.sqrt(math.pi)

AI0 = 3.0 ** (-2.0 / 3.0) / GAMMA_TWO_THIRDS
AIP0 = -(3.0 ** (-1.0 / 3.0)) / GAMMA_ONE_THIRD
BI0 = 3.0 ** (-1.0 / 6.0) / GAMMA_TWO_THIRDS
BIP0 = 3.0 ** (1.0 / 6.0) / GAMMA_ONE_THIRD

# Bi(25) ~ e^83; beyond this Bi/Ai and its square leave comfortable range
AIRY_X_MAX = 25.0
SERIES_LIMIT = 2.0
ASYMPTOTIC_LIMIT = 8.0
MAX_STEP = 1.0

# Largest zeros of Ai and Bi (refined by Newton in airy_zero_ai/airy_zero_bi)
AI_FIRST_ZERO = -2.338107410459767
BI_FIRST_ZERO = -1.173713222709128

_MAX_TERMS = 200


@dataclass(frozen=True)
class AiryEval:
    """Ai, Bi and their derivatives at one real argument."""

    ai: float
    bi: float
    aip: float
    bip: float

    def wronskian(self) -> float:
        """Ai Bi' - Ai' Bi, which equals 1/pi."""
        return self.ai * self.bip - self.aip * self.bi


@dataclass(frozen=True)
class AirySpec:
    """Parameters of phi'' - lam s phi = 0 with mu the real cube root of lam."""

    lam: float
    mu: float = 0.0

    def __post_init__(self) -> None:
        lam = validate_finite(self.lam, "lambda")
        if lam == 0.0:
            raise InvalidParamError("lambda must be non-zero", "ZeroLambda")
        mu = math.cbrt(lam)
        # one Newton step tightens mu^3 = lam to a few ulps
        mu -= (mu * mu * mu - lam) / (3.0 * mu * mu)
        object.__setattr__(self, "mu", mu)


def _maclaurin(x: float) -> Tuple[float, float, float, float]:
    """The two power-series solutions f (f(0)=1) and g (g'(0)=1) and slopes."""
    x3 = x * x * x
    f, g = 1.0, x
    fp, gp = 0.0, 1.0
    tf, tg = 1.0, x
    tfp, tgp = x * x / 2.0, 1.0
    fp += tfp
    for k in range(1, _MAX_TERMS):
        tf *= x3 / ((3 * k - 1) * (3 * k))
        tg *= x3 / ((3 * k) * (3 * k + 1))
        if k > 1:
            tfp *= x3 / ((3 * k - 1) * (3 * k - 3))
        tgp *= x3 / ((3 * k) * (3 * k - 2))
        f += tf
        g += tg
        if k > 1:
            fp += tfp
        gp += tgp
        if (
            abs(tf) <= EPS * abs(f)
            and abs(tg) <= EPS * max(abs(g), EPS)
            and abs(tfp) <= EPS * max(abs(fp), EPS)
            and abs(tgp) <= EPS * abs(gp)
        ):
            break
    return f, fp, g, gp


def _series_eval(x: float) -> AiryEval:
    f, fp, g, gp = _maclaurin(x)
    c1, c2 = AI0, -AIP0
    return AiryEval(
        ai=c1 * f - c2 * g,
        bi=SQRT3 * (c1 * f + c2 * g),
        aip=c1 * fp - c2 * gp,
        bip=SQRT3 * (c1 * fp + c2 * gp),
    )


def _taylor_step(
    x0: float, y: np.ndarray, dy: np.ndarray, h: float
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Advance solutions of y'' = x y from x0 to x0 + h.

    The Taylor coefficients about x0 obey
    (n + 1)(n + 2) a[n+2] = x0 a[n] + a[n-1], which is exact for this ODE.
    """
    a_nm1 = y.copy()  # a[n-1]
    a_n = dy.copy()  # a[n]
    a_np1 = x0 * y / 2.0  # a[n+1]
    val = y + dy * h + a_np1 * h * h
    der = dy + 2.0 * a_np1 * h
    hp = h * h  # h^(n+1) for n = 1
    small = 0
    for n in range(1, _MAX_TERMS):
        a_next = (x0 * a_n + a_nm1) / ((n + 1) * (n + 2))
        hp *= h
        term = a_next * hp
        dterm = (n + 2) * a_next * hp / h
        val = val + term
        der = der + dterm
        scale = np.maximum(np.abs(val), np.abs(der * h))
        if np.all(np.abs(term) <= EPS * scale) and np.all(
            np.abs(dterm * h) <= EPS * scale
        ):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        a_nm1, a_n, a_np1 = a_n, a_np1, a_next
    return val, der


def _march(
    x0: float, y: np.ndarray, dy: np.ndarray, x: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Taylor-step from x0 to x in equal steps no longer than MAX_STEP."""
    if x == x0:
        return y, dy
    n = max(1, math.ceil(abs(x - x0) / MAX_STEP))
    h = (x - x0) / n
    for i in range(n):
        y, dy = _taylor_step(x0 + i * h, y, dy, h)
    return y, dy


def _asymptotic_terms(zeta: float) -> List[Tuple[float, float]]:
    """(u_k / zeta^k, v_k / zeta^k) up to the smallest term."""
    terms = [(1.0, 1.0)]
    u = 1.0
    zk = 1.0
    last = math.inf
    for k in range(1, _MAX_TERMS):
        u *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k)
        v = -(6 * k + 1) / (6 * k - 1) * u
        zk *= zeta
        size = max(abs(u), abs(v)) / zk
        if size >= last:
            break
        terms.append((u / zk, v / zk))
        last = size
        if size < EPS * 1e-3:
            break
    return terms


def _asymptotic_positive(x: float) -> AiryEval:
    zeta = 2.0 / 3.0 * x * math.sqrt(x)
    terms = _asymptotic_terms(zeta)
    su_alt = sum((-1) ** k * u for k, (u, _) in enumerate(terms))
    sv_alt = sum((-1) ** k * v for k, (_, v) in enumerate(terms))
    su = sum(u for u, _ in terms)
    sv = sum(v for _, v in terms)
    q = x**0.25
    decay = math.exp(-zeta)
    growth = math.exp(zeta)
    return AiryEval(
        ai=decay / (2.0 * SQRT_PI * q) * su_alt,
        bi=growth / (SQRT_PI * q) * su,
        aip=-q * decay / (2.0 * SQRT_PI) * sv_alt,
        bip=q * growth / SQRT_PI * sv,
    )


def _asymptotic_negative(x: float) -> AiryEval:
    z = -x
    zeta = 2.0 / 3.0 * z * math.sqrt(z)
    terms = _asymptotic_terms(zeta)
    pu = pv = qu = qv = 0.0
    for k, (u, v) in enumerate(terms):
        # terms of index 2m carry (-1)^m, index 2m + 1 likewise
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            pu += sign * u
            pv += sign * v
        else:
            qu += sign * u
            qv += sign * v
    theta = zeta - math.pi / 4.0
    c, s = math.cos(theta), math.sin(theta)
    q = z**0.25
    return AiryEval(
        ai=(c * pu + s * qu) / (SQRT_PI * q),
        bi=(-s * pu + c * qu) / (SQRT_PI * q),
        aip=q * (s * pv - c * qv) / SQRT_PI,
        bip=q * (c * pv + s * qv) / SQRT_PI,
    )


@handle_numeric_errors(logger=logger)
def airy_eval(x: float) -> AiryEval:
    """
    Evaluate Ai, Bi, Ai' and Bi' at a real argument.

    Args:
        x: Finite argument no larger than AIRY_X_MAX

    Returns:
        AiryEval with relative error near 1e-13 on [-8, 8]

    Raises:
        NonFiniteError: For NaN or infinite x
        OverflowRangeError: For x > AIRY_X_MAX
    """
    x = validate_finite(x, "x")
    if x > AIRY_X_MAX:
        raise OverflowRangeError(
            f"Airy argument {x} exceeds the overflow guard {AIRY_X_MAX}", "AiryRange"
        )
    if abs(x) <= SERIES_LIMIT:
        return _series_eval(x)
    if x > ASYMPTOTIC_LIMIT:
        return _asymptotic_positive(x)
    if x < -ASYMPTOTIC_LIMIT:
        return _asymptotic_negative(x)
    if x < 0.0:
        y, dy = _march(0.0, np.array([AI0, BI0]), np.array([AIP0, BIP0]), x)
        return AiryEval(
            ai=float(y[0]), bi=float(y[1]), aip=float(dy[0]), bip=float(dy[1])
        )

    # 2 < x <= 8
    anchor = _asymptotic_positive(ASYMPTOTIC_LIMIT)
    y, dy = _march(ASYMPTOTIC_LIMIT, np.array([anchor.ai]), np.array([anchor.aip]), x)
    f, fp, g, gp = _maclaurin(x)
    return AiryEval(
        ai=float(y[0]),
        bi=SQRT3 * (AI0 * f - AIP0 * g),
        aip=float(dy[0]),
        bip=SQRT3 * (AI0 * fp - AIP0 * gp),
    )


def airy_ode_residual(x: float, h: float = 1e-3, which: str = "ai") -> float:
    """
    Check that Ai (or Bi) solves phi'' = x phi.

    phi'' is the 5-point central difference of the computed phi', so the
    check never uses the ODE itself.

    Args:
        x: Argument; [x - 2h, x + 2h] must be evaluable
        h: Difference step
        which: "ai" or "bi"

    Returns:
        |phi'' - x phi| / max(1, |x phi|)
    """
    if which not in ("ai", "bi"):
        raise InvalidParamError(f"which must be 'ai' or 'bi', got {which!r}")

    def slope(t: float) -> float:
        e = airy_eval(t)
        return e.aip if which == "ai" else e.bip

    phi = getattr(airy_eval(x), which)
    second = float(derivative(slope, x, h, order=1, accuracy=4))
    return abs(second - x * phi) / max(1.0, abs(x * phi))


def airy_table(xs: Iterable[float]) -> List[Tuple[float, AiryEval]]:
    """Tabulate airy_eval over a sequence of arguments."""
    return [(float(x), airy_eval(x)) for x in xs]


def _newton_zero(guess: float, which: str) -> float:
    x = guess
    for _ in range(8):
        e = airy_eval(x)
        value, slope = (e.ai, e.aip) if which == "ai" else (e.bi, e.bip)
        step = value / slope
        x -= step
        if abs(step) <= 4 * EPS * abs(x):
            break
    return x


def _zero_guess(t: float) -> float:
    return -(t ** (2.0 / 3.0)) * (1.0 + 5.0 / 48.0 / t**2 - 5.0 / 36.0 / t**4)


def airy_zero_ai(k: int = 1) -> float:
    """The k-th zero of Ai (counting down from the largest)."""
    if k < 1:
        raise InvalidParamError(f"Zero index must be >= 1, got {k}")
    guess = AI_FIRST_ZERO if k == 1 else _zero_guess(3.0 * math.pi * (4 * k - 1) / 8.0)
    return _newton_zero(guess, "ai")


def airy_zero_bi(k: int = 1) -> float:
    """The k-th zero of Bi (counting down from the largest)."""
    if k < 1:
        raise InvalidParamError(f"Zero index must be >= 1, got {k}")
    guess = BI_FIRST_ZERO if k == 1 else _zero_guess(3.0 * math.pi * (4 * k - 3) / 8.0)
    return _newton_zero(guess, "bi")


def airy_curve_closed_form(spec: AirySpec, s: float) -> Vec3:
    """
    Closed-form null curve with torsion -2 lam s, anchored at s0 = 0.

    Its derivative is the velocity (1/2f')(2f, f^2 - 1, f^2 + 1) of the
    generator f = (pi/mu) Bi(mu s)/Ai(mu s) with epsilon = +1.
    """
    mu = spec.mu
    x = mu * s
    e = airy_eval(x)
    pi2 = math.pi * math.pi
    mu2 = mu * mu
    bi_part = pi2 * (x * e.bi * e.bi - e.bip * e.bip)
    ai_part = mu2 * (x * e.ai * e.ai - e.aip * e.aip)
    return Vec3(
        math.pi / mu2 * (x * e.ai * e.bi - e.aip * e.bip),
        (bi_part - ai_part) / (2.0 * mu2 * mu),
        (bi_part + ai_part) / (2.0 * mu2 * mu),
    )


def airy_initial_point(spec: AirySpec) -> Vec3:
    """alpha(0) written with Gamma(1/3), matching the closed form at s = 0."""
    mu = spec.mu
    pi = math.pi
    scale = 1.0 / (2.0 * 9.0 ** (1.0 / 3.0) * mu**3 * GAMMA_ONE_THIRD**2)
    return Vec3(
        scale * 2.0 * SQRT3 * mu * pi,
        scale * (mu * mu - 3.0 * pi * pi),
        scale * (-mu * mu - 3.0 * pi * pi),
    )


def airy_generator(spec: AirySpec) -> "Generator":
    """
    The generator f = (pi/mu) Bi(mu s)/Ai(mu s), whose Schwarzian is -2 lam s.

    f' = 1/Ai^2 follows from the Wronskian; f'' and f''' come from
    Ai'' = x Ai, so the jet is exact up to the Airy evaluation error.
    """
    from .generator import AiryRatio, make_generator

    gen = make_generator(AiryRatio(spec.lam))
    logger.debug(f"Airy generator mu={spec.mu} on {gen.domain}")
    return gen
