"""
Reference null curves with closed forms and their verification.

Entries:

* helix-a: f = s, torsion 0
* helix-b: f = -cot(cs/2), torsion c^2/2
* helix-c: f = e^(cs), torsion -c^2/2
* slant-a: f = ln s, torsion 1/(2 s^2)
* slant-b: f = tan((b/2) ln s), b = sqrt(a - 1), torsion a/(2 s^2), a > 1
* slant-c: f = s^(-b), b = sqrt(1 - a), torsion a/(2 s^2), 0 != a < 1
* slant-d: f = 1/s^2, torsion -3/(2 s^2)
* airy: f = (pi/mu) Bi(mu s)/Ai(mu s), torsion -2 lam s
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .airy import AirySpec, airy_curve_closed_form, airy_generator, airy_initial_point
from .finite_difference import derivative
from .frenet import (
    FrameDiagnostics,
    frame_at,
    frenet_residuals,
    torsion_from_acceleration,
    torsion_schwarzian,
)
from .generator import (
    Cot,
    Exp,
    Generator,
    Identity,
    InverseSquare,
    Log,
    Power,
    TanLog,
    make_generator,
)
from .minkowski import Vec3, det3, mink_inner
from .synthesis import (
    CurveSample,
    CurveSpec,
    SampledCurve,
    integrate_interval,
    synthesize,
)
from .utils.error_handling import (
    DomainError,
    InvalidParamError,
    NullCurveError,
    validate_epsilon,
    validate_finite,
    validate_grid,
)
from .utils.logging import get_logger

logger = get_logger(__name__)

ClosedForm = Callable[[float], Vec3]
TorsionLaw = Callable[[float], float]

MIN_VERIFY_POINTS = 9
# FD step of the closed-form checks, relative to max(|s|, 0.1)
CLOSED_FORM_STEP = 5e-3
# Absolute step of the torsion check on synthesized positions
TORSION_FD_STEP = 1e-2
# Richardson error estimates above this share of the threshold exclude a point
TORSION_FD_EXCLUDE = 0.5
TORSION_FD_MIN_POINTS = 50

DEFAULT_THRESHOLDS: Dict[str, float] = {
    "nullity": 1e-6,
    "pseudo_arc": 1e-5,
    "torsion_law": 1e-9,
    "synthesis": 1e-7,
    "axis": 1e-8,
    "axis_gram": 1e-8,
    "torsion_fd": 1e-3,
    "orientation": 1e-9,
    "gram": 1e-10,
    "frenet": 1e-6,
}

ENTRY_LABELS = (
    "helix-a",
    "helix-b",
    "helix-c",
    "slant-a",
    "slant-b",
    "slant-c",
    "slant-d",
    "airy",
)


@dataclass(frozen=True)
class CatalogEntry:
    """A generator with its anchor, closed-form curve and torsion law."""

    label: str
    gen: Generator
    epsilon: int
    s0: float
    alpha0: Vec3
    closed_form: ClosedForm
    expected_torsion: TorsionLaw
    default_grid: Tuple[float, ...]
    slant_a: Optional[float] = None
    params: Dict[str, float] = field(default_factory=dict)
    # per-entry overrides of DEFAULT_THRESHOLDS
    thresholds: Dict[str, float] = field(default_factory=dict)

    def spec(self, epsilon: Optional[int] = None) -> CurveSpec:
        return CurveSpec(
            self.gen,
            self.epsilon if epsilon is None else epsilon,
            self.s0,
            self.alpha0,
        )


@dataclass
class SampleDiagnostics:
    s: float
    nullity: float
    pseudo_arc: float
    torsion_law: float
    synthesis: float
    orientation: float
    orientation_sign_ok: bool = True
    torsion_fd: Optional[float] = None
    axis: Optional[float] = None
    axis_gram: Optional[float] = None


@dataclass
class VerificationReport:
    """Residuals of one catalog entry over a grid."""

    label: str
    nullity_max: float
    pseudo_arc_max: float
    torsion_law_max: float
    synthesis_vs_closed_max: float
    torsion_fd_max: Optional[float]
    orientation_max: float
    orientation_sign_errors: int
    torsion_fd_checked: int = 0
    torsion_fd_required: int = 0
    skipped_points: List[float] = field(default_factory=list)
    axis_residual: Optional[float] = None
    axis_gram_max: Optional[float] = None
    frame: Optional[FrameDiagnostics] = None
    frame_at_s: Optional[float] = None
    samples: List[SampleDiagnostics] = field(default_factory=list)
    thresholds: Dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_THRESHOLDS)
    )

    def residuals(self) -> Dict[str, Optional[float]]:
        """Residual per threshold name."""
        return {
            "nullity": self.nullity_max,
            "pseudo_arc": self.pseudo_arc_max,
            "torsion_law": self.torsion_law_max,
            "synthesis": self.synthesis_vs_closed_max,
            "axis": self.axis_residual,
            "axis_gram": self.axis_gram_max,
            "torsion_fd": self.torsion_fd_max,
            "orientation": self.orientation_max,
            "gram": self.frame.gram_residual if self.frame else None,
            "frenet": self.frame.worst_equation_residual() if self.frame else None,
        }

    def failures(self) -> List[str]:
        failed = [
            name
            for name, value in self.residuals().items()
            if value is not None and not value <= self.thresholds[name]
        ]
        if self.orientation_sign_errors:
            failed.append("orientation_sign")
        if self.torsion_fd_checked < self.torsion_fd_required:
            failed.append("torsion_fd_coverage")
        if self.skipped_points:
            failed.append("skipped_points")
        return failed

    def passed(self) -> bool:
        return not self.failures()


def _uniform_grid(lo: float, hi: float, n: int) -> Tuple[float, ...]:
    return tuple(float(v) for v in np.linspace(lo, hi, n))


def _positive(value: float, name: str) -> float:
    value = validate_finite(value, name)
    if value <= 0.0:
        raise InvalidParamError(f"{name} must be > 0, got {value}")
    return value


def helix_a() -> CatalogEntry:
    """Null Cartan helix of zero torsion, anchored at the origin."""

    def closed(s: float) -> Vec3:
        return Vec3(3.0 * s * s, s**3 - 3.0 * s, s**3 + 3.0 * s) / 6.0

    return CatalogEntry(
        label="helix-a",
        gen=make_generator(Identity()),
        epsilon=1,
        s0=0.0,
        alpha0=Vec3.zero(),
        closed_form=closed,
        expected_torsion=lambda s: 0.0,
        default_grid=_uniform_grid(-2.0, 2.0, 101),
        thresholds={"torsion_fd": 1e-5},
    )


def helix_b(c: float = 1.0) -> CatalogEntry:
    """Null Cartan helix of torsion c^2/2; s0 = 0 is a removable pole of f."""
    c = _positive(c, "c")

    def closed(s: float) -> Vec3:
        return Vec3(math.cos(c * s), math.sin(c * s), c * s) / (c * c)

    margin = 0.1 / c
    return CatalogEntry(
        label="helix-b",
        gen=make_generator(Cot(c)),
        epsilon=1,
        s0=0.0,
        alpha0=Vec3(1.0 / (c * c), 0.0, 0.0),
        closed_form=closed,
        expected_torsion=lambda s: 0.5 * c * c,
        default_grid=_uniform_grid(
            math.pi / c + margin, 2.0 * math.pi / c - margin, 101
        ),
        params={"c": c},
    )


def helix_c(c: float = 1.0) -> CatalogEntry:
    """Null Cartan helix of torsion -c^2/2."""
    c = _positive(c, "c")

    def closed(s: float) -> Vec3:
        return Vec3(c * s, math.cosh(c * s), math.sinh(c * s)) / (c * c)

    return CatalogEntry(
        label="helix-c",
        gen=make_generator(Exp(c)),
        epsilon=1,
        s0=0.0,
        alpha0=Vec3(0.0, 1.0 / (c * c), 0.0),
        closed_form=closed,
        expected_torsion=lambda s: -0.5 * c * c,
        default_grid=_uniform_grid(-2.0 / c, 2.0 / c, 101),
        params={"c": c},
    )


def _slant_law(a: float) -> TorsionLaw:
    return lambda s: a / (2.0 * s * s)


def slant_a() -> CatalogEntry:
    """Slant helix with a = 1."""

    def closed(s: float) -> Vec3:
        ln = math.log(s)
        q = 2.0 * ln * ln - 2.0 * ln
        return (s * s / 8.0) * Vec3(2.0 * (2.0 * ln - 1.0), q - 1.0, q + 3.0)

    return CatalogEntry(
        label="slant-a",
        gen=make_generator(Log()),
        epsilon=1,
        s0=1.0,
        alpha0=Vec3(-2.0, -1.0, 3.0) / 8.0,
        closed_form=closed,
        expected_torsion=_slant_law(1.0),
        default_grid=_uniform_grid(0.1, 3.0, 51),
        slant_a=1.0,
    )


def slant_b(a: float = 2.0) -> CatalogEntry:
    """Slant helix with a > 1, generated by tan((b/2) ln s), b = sqrt(a - 1)."""
    a = validate_finite(a, "a")
    if not a > 1.0:
        raise InvalidParamError(f"slant-b needs a > 1, got {a}")
    b = math.sqrt(a - 1.0)
    d = b * b + 4.0

    def closed(s: float) -> Vec3:
        theta = b * math.log(s)
        sin, cos = math.sin(theta), math.cos(theta)
        return (s * s / b) * Vec3(
            (2.0 * sin - b * cos) / d, -(2.0 * cos + b * sin) / d, 0.5
        )

    # poles of f at s = e^(+-pi/b) stay outside the grid
    lo = max(0.1, 1.05 * math.exp(-math.pi / b))
    hi = min(3.0, math.exp(math.pi / b) / 1.05)
    return CatalogEntry(
        label="slant-b",
        gen=make_generator(TanLog(b)),
        epsilon=1,
        s0=1.0,
        alpha0=Vec3(-b / d, -2.0 / d, 0.5) / b,
        closed_form=closed,
        expected_torsion=_slant_law(a),
        default_grid=_uniform_grid(lo, hi, 51),
        slant_a=a,
        params={"a": a, "b": b},
    )


def slant_c(a: float = 0.5) -> CatalogEntry:
    """Slant helix with 0 != a < 1, a != -3, generated by s^(-b), b = sqrt(1 - a)."""
    a = validate_finite(a, "a")
    if not a < 1.0 or a == 0.0 or a == -3.0:
        raise InvalidParamError(f"slant-c needs 0 != a < 1 and a != -3, got {a}")
    b = math.sqrt(1.0 - a)

    def closed(s: float) -> Vec3:
        down = s ** (-b) / (b - 2.0)
        up = s**b / (b + 2.0)
        return (s * s / (2.0 * b)) * Vec3(-1.0, down + up, down - up)

    return CatalogEntry(
        label="slant-c",
        gen=make_generator(Power(b)),
        epsilon=1,
        s0=1.0,
        alpha0=Vec3(-1.0, 2.0 * b / (b * b - 4.0), 4.0 / (b * b - 4.0)) / (2.0 * b),
        closed_form=closed,
        expected_torsion=_slant_law(a),
        default_grid=_uniform_grid(0.1, 3.0, 51),
        slant_a=a,
        params={"a": a, "b": b},
    )


def slant_d() -> CatalogEntry:
    """Slant helix with a = -3."""

    def closed(s: float) -> Vec3:
        ln = math.log(s)
        s4 = s**4
        return Vec3(-4.0 * s * s, s4 - 4.0 * ln, -s4 - 4.0 * ln) / 16.0

    return CatalogEntry(
        label="slant-d",
        gen=make_generator(InverseSquare()),
        epsilon=1,
        s0=1.0,
        alpha0=Vec3(-4.0, 1.0, -1.0) / 16.0,
        closed_form=closed,
        expected_torsion=_slant_law(-3.0),
        default_grid=_uniform_grid(0.1, 3.0, 51),
        slant_a=-3.0,
    )


def airy(lam: float = 1.0) -> CatalogEntry:
    """Curve of torsion -2 lam s, anchored at s0 = 0."""
    spec = AirySpec(lam)
    return CatalogEntry(
        label="airy",
        gen=airy_generator(spec),
        epsilon=1,
        s0=0.0,
        alpha0=airy_initial_point(spec),
        closed_form=lambda s: airy_curve_closed_form(spec, s),
        expected_torsion=lambda s: -2.0 * spec.lam * s,
        default_grid=_uniform_grid(0.05, 2.0, 51),
        params={"lam": spec.lam},
    )


# Entry builders keyed by label; keyword names are the entry parameters
ENTRY_BUILDERS: Dict[str, Callable[..., CatalogEntry]] = {
    "helix-a": helix_a,
    "helix-b": helix_b,
    "helix-c": helix_c,
    "slant-a": slant_a,
    "slant-b": slant_b,
    "slant-c": slant_c,
    "slant-d": slant_d,
    "airy": airy,
}


def get_entry(label: str, **params: Any) -> CatalogEntry:
    """
    Build one catalog entry.

    Args:
        label: One of ENTRY_LABELS
        **params: Entry parameters (c for helix-b/c, a for slant-b/c,
            lam for airy)

    Raises:
        InvalidParamError: For an unknown label or bad parameters
    """
    key = label.strip().lower()
    if key not in ENTRY_BUILDERS:
        raise InvalidParamError(
            f"Unknown catalog entry: {label} (known: {', '.join(ENTRY_LABELS)})"
        )
    try:
        return ENTRY_BUILDERS[key](**{k: float(v) for k, v in params.items()})
    except TypeError as e:
        raise InvalidParamError(f"Bad parameters for entry {key}: {e}")


def catalog_entries(
    c: float = 1.0, a_b: float = 2.0, a_c: float = 0.5, lam: float = 1.0
) -> List[CatalogEntry]:
    """All eight entries with the given case parameters."""
    return [
        helix_a(),
        helix_b(c),
        helix_c(c),
        slant_a(),
        slant_b(a_b),
        slant_c(a_c),
        slant_d(),
        airy(lam),
    ]


def slant_axis(gen: Generator, epsilon: int, a: float, s: float) -> Vec3:
    """
    V = -(a/2s) L + s N + W, constant along a curve of torsion a/(2 s^2).

    Raises:
        DomainError: For s <= 0
    """
    if not s > 0.0:
        raise DomainError(f"Slant axis needs s > 0, got {s}")
    frame = frame_at(gen, epsilon, s)
    return (-a / (2.0 * s)) * frame.L + s * frame.N + frame.W


def sample_closed_form(entry: CatalogEntry, grid: Sequence[float]) -> SampledCurve:
    """The closed-form curve on a grid, with zero error estimates."""
    values = validate_grid(grid)
    samples = tuple(CurveSample(s, entry.closed_form(s), 0.0) for s in values)
    return SampledCurve(entry.spec(), samples)


def _fd_step(s: float, scale: float) -> float:
    return scale * max(abs(s), 0.1)


def _max_or_none(values: List[float]) -> Optional[float]:
    return max(values) if values else None


def _stencil_torsion(
    gen: Generator, epsilon: int, center: CurveSample, h: float, tol: Optional[float]
) -> float:
    """torsion_from_acceleration on 7 positions s + kh grown from a synthesized one."""
    samples = [center]
    for k in (-3, -2, -1, 1, 2, 3):
        t = center.s + k * h
        increment, err = integrate_interval(gen, epsilon, center.s, t, tol)
        samples.append(CurveSample(t, center.pos + increment, center.err + err))
    samples.sort(key=lambda p: p.s)
    local = SampledCurve(CurveSpec(gen, epsilon, center.s, center.pos), tuple(samples))
    return torsion_from_acceleration(local, 3)


def _torsion_fd_residual(
    gen: Generator,
    epsilon: int,
    center: CurveSample,
    tau: float,
    bounds: Tuple[float, float],
    threshold: float,
    tol: Optional[float],
) -> Optional[float]:
    """
    |tau_h - tau| at step TORSION_FD_STEP, or None for an excluded point.

    A point is excluded when the 2h stencil leaves the grid, or when the
    Richardson estimate (tau_2h - tau_h)/15 of the O(h^4) truncation error
    is above TORSION_FD_EXCLUDE times the threshold.
    """
    h = TORSION_FD_STEP
    s = center.s
    if s - 6.0 * h < bounds[0] or s + 6.0 * h > bounds[1]:
        return None
    try:
        tau_h = _stencil_torsion(gen, epsilon, center, h, tol)
        tau_2h = _stencil_torsion(gen, epsilon, center, 2.0 * h, tol)
    except NullCurveError as e:
        logger.warning(f"{gen.label}: no torsion stencil at s={s} ({e})")
        return None
    estimate = abs(tau_2h - tau_h) / 15.0
    if estimate > TORSION_FD_EXCLUDE * threshold:
        logger.debug(
            f"{gen.label}: s={s} excluded, truncation estimate {estimate:.3e}"
        )
        return None
    return abs(tau_h - tau)


def verify_entry(
    entry: CatalogEntry,
    grid: Optional[Sequence[float]] = None,
    tol: Optional[float] = None,
    epsilon: Optional[int] = None,
) -> VerificationReport:
    """
    Verify an entry on a grid.

    Per grid point: nullity and unit acceleration of the closed form (7-point
    differences), the torsion law from exact jets, synthesized vs
    closed-form position, det[L, N, W] = epsilon and the sign of
    det(alpha', alpha'', alpha'''). Slant entries add the constancy of the
    axis V and g(W, V) = 1.

    The torsion identity is checked on synthesized positions with
    torsion_from_acceleration at the absolute step TORSION_FD_STEP, against
    the Schwarzian, with an absolute threshold. Points whose stencils leave
    the grid or whose truncation estimate is too large are excluded; fewer
    than min(50, n/2) checked points fails the report as
    "torsion_fd_coverage". Points where the exact jets fail are skipped and
    fail the report as "skipped_points".

    Args:
        entry: Catalog entry
        grid: Strictly increasing grid of at least 9 points (default: the
            entry's default grid)
        tol: Quadrature tolerance for the synthesis check
        epsilon: Orientation override; the closed form then changes sign

    Raises:
        InvalidParamError: For grids shorter than 9 points
        QuadratureFailure: If synthesis fails
    """
    values = validate_grid(grid if grid is not None else entry.default_grid)
    if len(values) < MIN_VERIFY_POINTS:
        raise InvalidParamError(
            f"Verification needs at least {MIN_VERIFY_POINTS} points, got {len(values)}"
        )
    eps = entry.epsilon if epsilon is None else validate_epsilon(epsilon)
    flip = eps * entry.epsilon
    gen = entry.gen
    thresholds = {**DEFAULT_THRESHOLDS, **entry.thresholds}
    bounds = (values[0], values[-1])
    logger.info(f"Verifying {entry.label} on {len(values)} points")

    def closed(t: float) -> np.ndarray:
        # reversing epsilon reflects the curve through alpha0
        base = entry.closed_form(t).to_array()
        if flip == 1:
            return base
        return 2.0 * entry.alpha0.to_array() - base

    curve = synthesize(entry.spec(eps), values, tol)

    axis_mid: Optional[Vec3] = None
    if entry.slant_a is not None:
        axis_mid = slant_axis(gen, eps, entry.slant_a, values[len(values) // 2])

    samples: List[SampleDiagnostics] = []
    skipped: List[float] = []
    for s in values:
        h = _fd_step(s, CLOSED_FORM_STEP)
        v = derivative(closed, s, h, order=1, accuracy=6)
        acc = derivative(closed, s, h, order=2, accuracy=6)
        # sign check only
        hj = TORSION_FD_STEP * min(1.0, max(abs(s), 0.1))
        jerk = derivative(closed, s, hj, order=3, accuracy=4)
        vel = Vec3.from_array(v)
        accel = Vec3.from_array(acc)
        nullity = abs(mink_inner(vel, vel))
        pseudo_arc = abs(mink_inner(accel, accel) - 1.0)

        expected = entry.expected_torsion(s)
        try:
            tau = torsion_schwarzian(gen, s)
            frame = frame_at(gen, eps, s)
        except NullCurveError as e:
            logger.warning(f"{entry.label}: no jet at s={s} ({e}); point skipped")
            skipped.append(s)
            continue
        torsion_law = abs(tau - expected) / (1.0 + abs(expected))

        scale = max(1.0, frame.L.norm() * frame.N.norm() * frame.W.norm())
        orientation = abs(frame.determinant() - eps) / scale
        fd_det = det3(vel, accel, Vec3.from_array(jerk))

        center = curve.at(s)
        synthesis = float(np.max(np.abs(center.pos.to_array() - closed(s))))
        torsion_fd = _torsion_fd_residual(
            gen, eps, center, tau, bounds, thresholds["torsion_fd"], tol
        )

        diag = SampleDiagnostics(
            s=s,
            nullity=nullity,
            pseudo_arc=pseudo_arc,
            torsion_law=torsion_law,
            synthesis=synthesis,
            orientation=orientation,
            orientation_sign_ok=bool(np.sign(fd_det) == eps),
            torsion_fd=torsion_fd,
        )
        if axis_mid is not None and entry.slant_a is not None:
            V = slant_axis(gen, eps, entry.slant_a, s)
            diag.axis = float(np.max(np.abs((V - axis_mid).to_array()))) / max(
                1.0, axis_mid.norm()
            )
            diag.axis_gram = abs(mink_inner(frame.W, V) - 1.0)
        samples.append(diag)

    if not samples:
        raise DomainError(f"No usable grid point for {entry.label}")

    mid = samples[len(samples) // 2].s
    frame_diag: Optional[FrameDiagnostics] = None
    try:
        frame_diag = frenet_residuals(gen, eps, mid)
    except NullCurveError as e:
        logger.warning(f"{entry.label}: no frame diagnostics at s={mid} ({e})")

    torsion_fd = [d.torsion_fd for d in samples if d.torsion_fd is not None]
    report = VerificationReport(
        label=entry.label,
        nullity_max=max(d.nullity for d in samples),
        pseudo_arc_max=max(d.pseudo_arc for d in samples),
        torsion_law_max=max(d.torsion_law for d in samples),
        synthesis_vs_closed_max=max(d.synthesis for d in samples),
        torsion_fd_max=_max_or_none(torsion_fd),
        orientation_max=max(d.orientation for d in samples),
        orientation_sign_errors=sum(1 for d in samples if not d.orientation_sign_ok),
        torsion_fd_checked=len(torsion_fd),
        torsion_fd_required=min(TORSION_FD_MIN_POINTS, len(values) // 2),
        skipped_points=skipped,
        axis_residual=_max_or_none([d.axis for d in samples if d.axis is not None]),
        axis_gram_max=_max_or_none(
            [d.axis_gram for d in samples if d.axis_gram is not None]
        ),
        frame=frame_diag,
        frame_at_s=mid if frame_diag is not None else None,
        samples=samples,
        thresholds=thresholds,
    )
    logger.info(
        f"{entry.label}: torsion identity checked on {report.torsion_fd_checked} "
        f"of {len(values)} points"
    )
    status = "passed" if report.passed() else f"FAILED {report.failures()}"
    logger.info(f"Verification of {entry.label} {status}")
    return report


def verify_all(
    tol: Optional[float] = None,
    max_workers: Optional[int] = None,
    entries: Optional[Sequence[CatalogEntry]] = None,
) -> List[VerificationReport]:
    """Verify every entry (default parameters) concurrently, in catalog order."""
    if entries is None:
        entries = catalog_entries()
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = [pool.submit(verify_entry, entry, None, tol) for entry in entries]
        return [future.result() for future in futures]
