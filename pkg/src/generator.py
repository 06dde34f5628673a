"""
Generator functions f for null curves.

A generator carries f and its first three derivatives on an open interval
where f != 0 and f' != 0. Kinds follow a registry/factory pattern: each
GeneratorKind subclass knows its parameters, its jet and its intervals,
and ``create_kind`` builds one from a name and keyword parameters.
"""

import dataclasses
import math
import sys
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple, Type

import numpy as np

from .finite_difference import derivative
from .schwarzian import Jet3, MobiusMap, mobius_jet
from .utils.error_handling import (
    DomainError,
    EmptyDomainError,
    InvalidParamError,
    NullCurveError,
    handle_numeric_errors,
    validate_finite,
)
from .utils.logging import get_logger

logger = get_logger(__name__)

EPS = sys.float_info.epsilon
DEFAULT_VALIDATION_POINTS = 1024
VALIDATION_TOLERANCE = 1e-12
# Finite stand-in for an infinite end when sampling
DEFAULT_WINDOW = 10.0

JetFunction = Callable[[float], Jet3]


@dataclass(frozen=True)
class Interval:
    """Open interval (lo, hi); either end may be infinite."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise InvalidParamError(
                f"Interval ends must not be NaN: ({self.lo}, {self.hi})"
            )
        if not self.lo < self.hi:
            raise InvalidParamError(
                f"Interval needs lo < hi, got ({self.lo}, {self.hi})", "EmptyInterval"
            )

    @classmethod
    def real_line(cls) -> "Interval":
        return cls(-math.inf, math.inf)

    @classmethod
    def positive(cls) -> "Interval":
        return cls(0.0, math.inf)

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, s: float) -> bool:
        return self.lo < s < self.hi

    def contains_closed(self, s: float) -> bool:
        return self.lo <= s <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        """Overlap of two intervals; EmptyDomainError when they are disjoint."""
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if not lo < hi:
            raise EmptyDomainError(f"Intervals {self} and {other} do not overlap")
        return Interval(lo, hi)

    def shift(self, offset: float) -> "Interval":
        """The interval moved by offset."""
        return Interval(self.lo + offset, self.hi + offset)

    def clipped(self) -> "Interval":
        """Replace infinite ends by a finite window around the finite part."""
        lo, hi = self.lo, self.hi
        if math.isinf(lo) and math.isinf(hi):
            return Interval(-DEFAULT_WINDOW, DEFAULT_WINDOW)
        if math.isinf(lo):
            lo = hi - 2.0 * DEFAULT_WINDOW
        if math.isinf(hi):
            hi = lo + DEFAULT_WINDOW
        return Interval(lo, hi)

    def sample(self, n: int) -> np.ndarray:
        """n interior midpoints, infinite ends clipped first."""
        if n < 1:
            raise InvalidParamError(f"Need at least one sample point, got {n}")
        finite = self.clipped()
        step = finite.length / n
        return finite.lo + (np.arange(n) + 0.5) * step

    def __str__(self) -> str:
        return f"({self.lo:g}, {self.hi:g})"


class GeneratorKind(ABC):
    """Abstract base for generator kinds."""

    name: str = ""
    fd_jet: bool = False
    validated_at_construction: bool = True

    @abstractmethod
    def jet(self, s: float) -> Jet3:
        """f, f', f'', f''' at s."""
        pass

    @abstractmethod
    def domain(self) -> Interval:
        """Open interval on which f != 0 and f' != 0."""
        pass

    def span(self) -> Interval:
        """Interval on which the curve integrand extends finitely."""
        return self.domain()

    def window(self) -> Interval:
        """Finite part of the domain used for sampling."""
        return self.domain().clipped()

    def params(self) -> Dict[str, Any]:
        return {}

    def notes(self) -> Tuple[str, ...]:
        return ()

    def label(self) -> str:
        params = self.params()
        if not params:
            return self.name
        inner = ", ".join(f"{k}={v:g}" for k, v in params.items())
        return f"{self.name}({inner})"

    def to_config(self) -> Dict[str, Any]:
        """The kind in the key=value config vocabulary."""
        return {"kind": self.name, **self.params()}


def _positive_param(value: float, name: str) -> float:
    value = validate_finite(value, name)
    if value <= 0.0:
        raise InvalidParamError(f"Parameter {name} must be > 0, got {value}")
    return value


class Identity(GeneratorKind):
    """f(s) = s."""

    name = "identity"

    def jet(self, s: float) -> Jet3:
        return Jet3(s, 1.0, 0.0, 0.0)

    def domain(self) -> Interval:
        return Interval.positive()

    def span(self) -> Interval:
        return Interval.real_line()


class Cot(GeneratorKind):
    """f(s) = -cot(cs/2)."""

    name = "cot"

    def __init__(self, c: float = 1.0):
        self.c = _positive_param(c, "c")

    def jet(self, s: float) -> Jet3:
        k = 0.5 * self.c
        u = k * s
        sin_u = math.sin(u)
        if sin_u == 0.0:
            raise DomainError(f"-cot(cs/2) has a pole at s={s}", "Pole")
        cot = math.cos(u) / sin_u
        csc2 = 1.0 / (sin_u * sin_u)
        return Jet3(
            -cot,
            k * csc2,
            -2.0 * k * k * csc2 * cot,
            2.0 * k**3 * csc2 * (2.0 * cot * cot + csc2),
        )

    def domain(self) -> Interval:
        return Interval(math.pi / self.c, 2.0 * math.pi / self.c)

    def span(self) -> Interval:
        return Interval.real_line()

    def params(self) -> Dict[str, Any]:
        return {"c": self.c}

    def notes(self) -> Tuple[str, ...]:
        return ("poles of f at s = 2k pi/c are removable for the curve integrand",)


class Exp(GeneratorKind):
    """f(s) = e^(cs)."""

    name = "exp"

    def __init__(self, c: float = 1.0):
        self.c = _positive_param(c, "c")

    def jet(self, s: float) -> Jet3:
        e = math.exp(self.c * s)
        c = self.c
        return Jet3(e, c * e, c * c * e, c**3 * e)

    def domain(self) -> Interval:
        return Interval.real_line()

    def window(self) -> Interval:
        return Interval(-DEFAULT_WINDOW / self.c, DEFAULT_WINDOW / self.c)

    def params(self) -> Dict[str, Any]:
        return {"c": self.c}


class Log(GeneratorKind):
    """f(s) = ln s."""

    name = "log"

    def jet(self, s: float) -> Jet3:
        return Jet3(math.log(s), 1.0 / s, -1.0 / (s * s), 2.0 / s**3)

    def domain(self) -> Interval:
        return Interval(1.0, math.inf)

    def span(self) -> Interval:
        return Interval.positive()

    def notes(self) -> Tuple[str, ...]:
        return ("f(1) = 0 is a removable endpoint for the curve integrand",)


class TanLog(GeneratorKind):
    """f(s) = tan((b/2) ln s)."""

    name = "tanlog"

    def __init__(self, b: float = 1.0):
        self.b = _positive_param(b, "b")

    def jet(self, s: float) -> Jet3:
        if s <= 0.0:
            raise DomainError(f"tan((b/2) ln s) needs s > 0, got {s}")
        w = 0.5 * self.b * math.log(s)
        cos_w = math.cos(w)
        if cos_w == 0.0:
            raise DomainError(f"tan((b/2) ln s) has a pole at s={s}", "Pole")
        tan = math.sin(w) / cos_w
        sec2 = 1.0 / (cos_w * cos_w)
        b = self.b
        # derivatives in t = ln s, then converted to s
        d1 = 0.5 * b * sec2
        d2 = 0.5 * b * b * sec2 * tan
        d3 = 0.25 * b**3 * (2.0 * sec2 * tan * tan + sec2 * sec2)
        return Jet3(
            tan,
            d1 / s,
            (d2 - d1) / (s * s),
            (d3 - 3.0 * d2 + 2.0 * d1) / s**3,
        )

    def domain(self) -> Interval:
        return Interval(1.0, math.exp(math.pi / self.b))

    def span(self) -> Interval:
        return Interval.positive()

    def params(self) -> Dict[str, Any]:
        return {"b": self.b}

    def notes(self) -> Tuple[str, ...]:
        return (
            "f(1) = 0 is a removable endpoint for the curve integrand",
            "the pole of f at s = e^(pi/b) is removable for the curve integrand",
        )


class Power(GeneratorKind):
    """f(s) = s^(-b)."""

    name = "power"

    def __init__(self, b: float = math.sqrt(0.5)):
        self.b = _positive_param(b, "b")
        if self.b == 2.0:
            raise InvalidParamError(
                "Power needs b != 2; use the inverse-square kind for s^-2"
            )

    def jet(self, s: float) -> Jet3:
        b = self.b
        p = s ** (-b)
        return Jet3(
            p,
            -b * p / s,
            b * (b + 1.0) * p / (s * s),
            -b * (b + 1.0) * (b + 2.0) * p / s**3,
        )

    def domain(self) -> Interval:
        return Interval.positive()

    def params(self) -> Dict[str, Any]:
        return {"b": self.b}


class InverseSquare(GeneratorKind):
    """f(s) = 1/s^2."""

    name = "inverse-square"

    def jet(self, s: float) -> Jet3:
        s2 = s * s
        return Jet3(1.0 / s2, -2.0 / (s2 * s), 6.0 / (s2 * s2), -24.0 / (s2 * s2 * s))

    def domain(self) -> Interval:
        return Interval.positive()


class AiryRatio(GeneratorKind):
    """f(s) = (pi/mu) Bi(mu s)/Ai(mu s) with mu^3 = lam."""

    name = "airy"

    def __init__(self, lam: float = 1.0):
        # local import: the airy module builds on this one
        from .airy import AirySpec

        self.spec = AirySpec(lam)

    @property
    def lam(self) -> float:
        return self.spec.lam

    @property
    def mu(self) -> float:
        return self.spec.mu

    def jet(self, s: float) -> Jet3:
        from .airy import airy_eval

        mu = self.mu
        x = mu * s
        e = airy_eval(x)
        ai = e.ai
        if ai == 0.0:
            raise DomainError(f"Ai(mu s) vanishes at s={s}", "Pole")
        ai2 = ai * ai
        return Jet3(
            math.pi / mu * e.bi / ai,
            1.0 / ai2,
            -2.0 * mu * e.aip / (ai2 * ai),
            (6.0 * mu * mu * e.aip * e.aip - 2.0 * mu * mu * x * ai2) / (ai2 * ai2),
        )

    def _x_interval_to_s(self, lo: float, hi: float) -> Interval:
        ends = sorted((lo / self.mu, hi / self.mu))
        return Interval(ends[0], ends[1])

    def domain(self) -> Interval:
        from .airy import AIRY_X_MAX, BI_FIRST_ZERO

        return self._x_interval_to_s(BI_FIRST_ZERO, AIRY_X_MAX)

    def span(self) -> Interval:
        from .airy import AIRY_X_MAX

        return self._x_interval_to_s(-math.inf, AIRY_X_MAX)

    def params(self) -> Dict[str, Any]:
        return {"lam": self.lam}

    def notes(self) -> Tuple[str, ...]:
        return ("zeros of Ai(mu s) are removable poles for the curve integrand",)


class Custom(GeneratorKind):
    """Caller-supplied analytic jet on a caller-supplied domain."""

    name = "custom"
    validated_at_construction = False

    def __init__(
        self,
        jet_fn: JetFunction,
        domain: Interval,
        span: Optional[Interval] = None,
        label: str = "custom",
    ):
        self.jet_fn = jet_fn
        self._domain = domain
        self._span = span or domain
        self._label = label

    def jet(self, s: float) -> Jet3:
        return self.jet_fn(s)

    def domain(self) -> Interval:
        return self._domain

    def span(self) -> Interval:
        return self._span

    def label(self) -> str:
        return self._label


class FiniteDifferenceCustom(Custom):
    """Custom generator from f alone; derivatives by central differences."""

    fd_jet = True

    def __init__(
        self,
        f: Callable[[float], float],
        domain: Interval,
        label: str = "custom-fd",
        h: Optional[float] = None,
    ):
        self.f = f
        self.h = h
        super().__init__(self._fd_jet, domain, label=label)

    def _fd_jet(self, s: float) -> Jet3:
        # third derivative with the 7-point stencil: O(h^4) + O(u/h^3)
        h = self.h if self.h is not None else EPS ** (1.0 / 7.0) * max(1.0, abs(s))
        return Jet3(
            float(self.f(s)),
            float(derivative(self.f, s, h, order=1, accuracy=6)),
            float(derivative(self.f, s, h, order=2, accuracy=6)),
            float(derivative(self.f, s, h, order=3, accuracy=4)),
        )

    def notes(self) -> Tuple[str, ...]:
        return ("fd-jet: derivatives estimated by central differences",)


class Negated(GeneratorKind):
    """-f for a base generator f."""

    name = "negated"

    def __init__(self, base: "Generator"):
        self.base = base
        self.fd_jet = base.fd_jet
        self.validated_at_construction = base.kind.validated_at_construction

    def jet(self, s: float) -> Jet3:
        return self.base.eval(s).negate()

    def domain(self) -> Interval:
        return self.base.domain

    def span(self) -> Interval:
        return self.base.span

    def window(self) -> Interval:
        return self.base.window

    def params(self) -> Dict[str, Any]:
        return {"base": self.base.label}

    def label(self) -> str:
        return f"-{self.base.label}"


class Shifted(GeneratorKind):
    """s -> f(s + shift) for a base generator f."""

    name = "shifted"

    def __init__(self, base: "Generator", shift: float):
        self.base = base
        self.shift = validate_finite(shift, "shift")
        self.fd_jet = base.fd_jet
        self.validated_at_construction = base.kind.validated_at_construction

    def jet(self, s: float) -> Jet3:
        return self.base.eval(s + self.shift)

    def domain(self) -> Interval:
        return self.base.domain.shift(-self.shift)

    def span(self) -> Interval:
        return self.base.span.shift(-self.shift)

    def window(self) -> Interval:
        return self.base.window.shift(-self.shift)

    def params(self) -> Dict[str, Any]:
        return {"base": self.base.label, "shift": self.shift}

    def label(self) -> str:
        return f"{self.base.label}(s{self.shift:+g})"


class MobiusImage(GeneratorKind):
    """T o f on a caller-chosen interval free of the pole of T o f."""

    name = "mobius"

    def __init__(self, base: "Generator", T: MobiusMap, interval: Interval):
        self.base = base
        self.T = T
        self.interval = interval
        self.fd_jet = base.fd_jet

    def jet(self, s: float) -> Jet3:
        return mobius_jet(self.T, self.base.eval(s))

    def domain(self) -> Interval:
        return self.interval

    def params(self) -> Dict[str, Any]:
        return {
            "base": self.base.label,
            "a": self.T.a,
            "b": self.T.b,
            "c": self.T.c,
            "d": self.T.d,
        }

    def label(self) -> str:
        T = self.T
        return f"({T.a:g}f+{T.b:g})/({T.c:g}f+{T.d:g}) o {self.base.label}"


# Mapping of kind names to their classes
GENERATOR_KINDS: Dict[str, Type[GeneratorKind]] = {
    "identity": Identity,
    "cot": Cot,
    "exp": Exp,
    "log": Log,
    "tanlog": TanLog,
    "power": Power,
    "inverse-square": InverseSquare,
    "airy": AiryRatio,
}


def create_kind(name: str, **params: Any) -> GeneratorKind:
    """
    Create a generator kind from its name and parameters.

    Args:
        name: Registered kind name (e.g. 'exp', 'tanlog')
        **params: Kind parameters (e.g. c=1.5)

    Returns:
        An instance of the matching GeneratorKind subclass

    Raises:
        InvalidParamError: For an unknown kind or unexpected parameters
    """
    key = name.strip().lower().replace("_", "-")
    if key not in GENERATOR_KINDS:
        known = ", ".join(sorted(GENERATOR_KINDS))
        raise InvalidParamError(f"Unknown generator kind: {name} (known: {known})")
    try:
        return GENERATOR_KINDS[key](**{k: float(v) for k, v in params.items()})
    except TypeError as e:
        raise InvalidParamError(f"Bad parameters for generator kind {key}: {e}")
    except ValueError as e:
        raise InvalidParamError(f"Non-numeric parameter for generator kind {key}: {e}")


@dataclass(frozen=True)
class Generator:
    """A generator kind bound to its intervals."""

    label: str
    kind: GeneratorKind
    domain: Interval
    span: Interval
    window: Interval
    fd_jet: bool = False
    notes: Tuple[str, ...] = ()

    @property
    def jet_fn(self) -> JetFunction:
        return self.kind.jet

    def eval(self, s: float) -> Jet3:
        """
        Jet of f at s.

        Raises:
            DomainError: If s lies outside the closed span or f is singular
            NonFiniteError: If the jet overflows
        """
        if not self.span.contains_closed(s):
            raise DomainError(
                f"s={s} lies outside the span {self.span} of {self.label}"
            )
        return _evaluate(self.kind, s)

    def f(self, s: float) -> float:
        return self.eval(s).f0

    def restrict(self, interval: Interval) -> "Generator":
        """The same generator on a sub-interval of its domain."""
        domain = self.domain.intersect(interval)
        return dataclasses.replace(
            self, domain=domain, window=domain.clipped()
        )


@handle_numeric_errors(logger=logger, reraise_as=DomainError)
def _evaluate(kind: GeneratorKind, s: float) -> Jet3:
    return kind.jet(s)


@dataclass
class ValidationReport:
    """Admissibility check of a generator on a sample grid."""

    label: str
    passed: bool
    n: int
    min_abs_f: float
    min_abs_fprime: float
    fprime_sign: int
    sign_constant: bool
    fd_jet: bool
    notes: List[str] = field(default_factory=list)

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (
            f"{self.label}: {status} (n={self.n}, min|f|={self.min_abs_f:.3e}, "
            f"min|f'|={self.min_abs_fprime:.3e}, sign(f')={self.fprime_sign:+d})"
        )


def validate_generator(
    g: Generator, n: int = DEFAULT_VALIDATION_POINTS, tol: float = VALIDATION_TOLERANCE
) -> ValidationReport:
    """
    Check f != 0, f' != 0 and constant signs of f and f' on n interior points.

    A sign change of f between samples means a zero or a pole of f inside
    the domain.

    Args:
        g: Generator to check
        n: Number of sample points (>= 2) across the sampling window
        tol: Magnitudes at or below tol count as zero

    Returns:
        ValidationReport; failures are reported, not raised

    Raises:
        InvalidParamError: If n < 2
    """
    if n < 2:
        raise InvalidParamError(f"Validation needs n >= 2, got {n}")
    notes = list(g.notes)
    if g.fd_jet:
        notes.append("fd-jet")
    points = g.domain.intersect(g.window).sample(n)
    min_f = math.inf
    min_fp = math.inf
    signs = set()
    f_signs = set()
    failed_at: Optional[float] = None
    for s in points:
        try:
            j = g.eval(float(s))
        except NullCurveError as e:
            failed_at = float(s)
            notes.append(f"evaluation failed at s={s:g}: {e}")
            break
        min_f = min(min_f, abs(j.f0))
        min_fp = min(min_fp, abs(j.f1))
        signs.add(int(np.sign(j.f1)))
        f_signs.add(int(np.sign(j.f0)))

    sign_constant = failed_at is None and len(signs) == 1 and 0 not in signs
    f_sign_constant = len(f_signs) == 1
    if failed_at is None and not f_sign_constant:
        notes.append("f changes sign inside the domain")
    passed = sign_constant and f_sign_constant and min_f > tol and min_fp > tol
    fprime_sign = signs.pop() if sign_constant else 0
    report = ValidationReport(
        label=g.label,
        passed=passed,
        n=n,
        min_abs_f=min_f,
        min_abs_fprime=min_fp,
        fprime_sign=fprime_sign,
        sign_constant=sign_constant,
        fd_jet=g.fd_jet,
        notes=notes,
    )
    logger.debug(report.summary())
    return report


def build_generator(kind: GeneratorKind) -> Generator:
    """Bind a kind to its intervals without validation."""
    domain = kind.domain()
    span = kind.span()
    if not (span.contains_closed(domain.lo) and span.contains_closed(domain.hi)):
        raise InvalidParamError(f"Span {span} of {kind.label()} must contain {domain}")
    return Generator(
        label=kind.label(),
        kind=kind,
        domain=domain,
        span=span,
        window=domain.intersect(kind.window()),
        fd_jet=kind.fd_jet,
        notes=kind.notes(),
    )


def make_generator(
    kind: GeneratorKind, validate: bool = True, n: int = DEFAULT_VALIDATION_POINTS
) -> Generator:
    """
    Build a generator with its default domain.

    Catalog kinds are validated on an n-point grid.

    Raises:
        EmptyDomainError: If validation finds f = 0 or f' = 0 on the domain
    """
    gen = build_generator(kind)
    if validate and kind.validated_at_construction:
        report = validate_generator(gen, n)
        if not report.passed:
            raise EmptyDomainError(
                f"No admissible domain for {gen.label}: {report.summary()}"
            )
    logger.debug(f"Built generator {gen.label} on {gen.domain}")
    return gen


def custom_generator(
    jet_fn: JetFunction,
    domain: Interval,
    label: str = "custom",
    span: Optional[Interval] = None,
) -> Generator:
    """Generator from an analytic jet function (not validated here)."""
    return make_generator(Custom(jet_fn, domain, span, label))


def custom_from_function(
    f: Callable[[float], float],
    domain: Interval,
    label: str = "custom-fd",
    h: Optional[float] = None,
) -> Generator:
    """Generator from f alone, with derivatives by finite differences."""
    logger.warning(
        f"Generator {label} uses finite-difference jets; torsion checks on it "
        "are limited by FD error"
    )
    return make_generator(FiniteDifferenceCustom(f, domain, label, h))


def negated(g: Generator) -> Generator:
    """The generator -f; its Schwarzian equals that of f."""
    return build_generator(Negated(g))


def shifted(g: Generator, shift: float) -> Generator:
    """The generator s -> f(s + shift)."""
    return build_generator(Shifted(g, shift))


def mobius_generator(T: MobiusMap, g: Generator, interval: Interval) -> Generator:
    """
    The generator T o f on a sub-interval of g's domain.

    The interval is caller-chosen; it must lie in the domain of g and must
    pass validation (no pole of T o f, no zero of T o f or of its slope).

    Raises:
        InvalidParamError: If interval leaves g's domain
        EmptyDomainError: If T o f is not admissible on interval
    """
    if not (
        g.domain.contains_closed(interval.lo) and g.domain.contains_closed(interval.hi)
    ):
        raise InvalidParamError(
            f"Interval {interval} leaves the domain {g.domain} of {g.label}"
        )
    if not interval.is_finite:
        interval = interval.intersect(g.window)
    return make_generator(MobiusImage(g, T, interval))
