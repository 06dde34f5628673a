"""
Run configuration: grids, vectors, generator specs and key=value files.

A configuration file holds whitespace-separated ``key=value`` tokens with
``#`` comments, for example::

    kind=tanlog b=1
    epsilon=1 s0=1 alpha0=0,0,0
    grid=1:3:51 tol=1e-10
"""

import math
import os
import shlex
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Tuple

import numpy as np

from .utils.error_handling import (
    ConfigError,
    InvalidParamError,
    NullCurveError,
    validate_epsilon,
    validate_grid,
)

if TYPE_CHECKING:
    from .generator import GeneratorKind

TOLERANCE_ENV = "NULLCURVE_TOL"
DEFAULT_TOLERANCE = 1e-10

# Keys that configure the run itself; everything else is a kind parameter
RUN_KEYS = {
    "command",
    "kind",
    "epsilon",
    "s0",
    "alpha0",
    "grid",
    "tol",
    "output",
    "format",
    "entry",
    "all",
    "s",
    "workers",
}
OUTPUT_FORMATS = ("csv", "json")


def default_tolerance() -> float:
    """
    The default quadrature tolerance, overridable through NULLCURVE_TOL.

    Raises:
        ConfigError: If NULLCURVE_TOL is not a positive finite number
    """
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_TOLERANCE
    try:
        tol = float(raw)
    except ValueError:
        raise ConfigError(f"{TOLERANCE_ENV}={raw!r} is not a number", "BadTolerance")
    if not math.isfinite(tol) or tol <= 0.0:
        raise ConfigError(f"{TOLERANCE_ENV}={raw!r} must be positive", "BadTolerance")
    return tol


def _float(text: str, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"Invalid {what}: {text!r}")
    if not math.isfinite(value):
        raise ConfigError(f"Invalid {what}: {text!r} is not finite")
    return value


def parse_grid(text: str) -> List[float]:
    """
    Parse a grid as ``lo:hi:n`` (n equally spaced points, both ends
    included) or as a comma-separated list.

    Raises:
        ConfigError: For malformed or non-increasing grids
    """
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"Grid must look like lo:hi:n, got {text!r}")
        lo = _float(parts[0], "grid start")
        hi = _float(parts[1], "grid end")
        try:
            n = int(parts[2])
        except ValueError:
            raise ConfigError(f"Grid point count must be an integer: {parts[2]!r}")
        if n < 2 or not hi > lo:
            raise ConfigError(f"Grid needs n >= 2 and lo < hi, got {text!r}")
        values = [float(v) for v in np.linspace(lo, hi, n)]
    else:
        values = [_float(v, "grid point") for v in text.split(",") if v.strip()]
    try:
        return validate_grid(values, min_points=1)
    except InvalidParamError as e:
        raise ConfigError(str(e))


def parse_vec3(text: str) -> Tuple[float, float, float]:
    """Parse ``x,y,z``."""
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != 3:
        raise ConfigError(f"Expected three comma-separated numbers, got {text!r}")
    x, y, z = (_float(p, "vector component") for p in parts)
    return (x, y, z)


def tokenize(text: str) -> Dict[str, str]:
    """Split ``key=value`` tokens; later keys override earlier ones."""
    try:
        tokens = shlex.split(text, comments=True)
    except ValueError as e:
        raise ConfigError(f"Unreadable configuration: {e}")
    pairs: Dict[str, str] = {}
    for token in tokens:
        if "=" not in token:
            raise ConfigError(f"Expected key=value, got {token!r}")
        key, value = token.split("=", 1)
        key = key.strip().lower()
        if not key:
            raise ConfigError(f"Empty key in token {token!r}")
        pairs[key] = value.strip()
    return pairs


def parse_generator_spec(text: str) -> "GeneratorKind":
    """
    Build a generator kind from text such as ``kind=exp c=1.5``.

    Raises:
        ConfigError: If the kind is missing, unknown or badly parameterized
    """
    pairs = tokenize(text)
    return generator_kind_from(pairs)


def generator_kind_from(pairs: Dict[str, str]) -> "GeneratorKind":
    from .generator import create_kind

    if "kind" not in pairs:
        raise ConfigError("Generator spec needs kind=...")
    params = {k: v for k, v in pairs.items() if k not in RUN_KEYS}
    try:
        return create_kind(pairs["kind"], **params)
    except NullCurveError as e:
        raise ConfigError(str(e), e.error_code)


@dataclass
class RunConfig:
    """Settings of one CLI run, merged from a config file and flags."""

    command: Optional[str] = None
    kind: Optional[str] = None
    params: Dict[str, str] = field(default_factory=dict)
    epsilon: int = 1
    s0: Optional[float] = None
    alpha0: Optional[Tuple[float, float, float]] = None
    grid: Optional[List[float]] = None
    tol: Optional[float] = None
    output: Optional[Path] = None
    format: str = "csv"
    entry: Optional[str] = None
    all_entries: bool = False
    s: Optional[float] = None
    workers: Optional[int] = None

    @classmethod
    def from_pairs(cls, pairs: Dict[str, str]) -> "RunConfig":
        """Build a configuration from parsed key=value pairs."""
        config = cls()
        config.update(pairs)
        return config

    @classmethod
    def from_file(cls, path: Path) -> "RunConfig":
        """
        Read a key=value configuration file.

        Raises:
            ConfigError: If the file cannot be read or parsed
        """
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"Cannot read config file {path}: {e}", "ConfigRead")
        return cls.from_pairs(tokenize(text))

    def update(self, pairs: Dict[str, Any]) -> None:
        """Apply key=value settings (strings as read from a file or flags)."""
        for key, raw in pairs.items():
            if raw is None:
                continue
            value = str(raw)
            if key == "command":
                self.command = value
            elif key == "kind":
                self.kind = value
            elif key == "epsilon":
                try:
                    self.epsilon = validate_epsilon(int(_float(value, "epsilon")))
                except InvalidParamError as e:
                    raise ConfigError(str(e))
            elif key == "s0":
                self.s0 = _float(value, "s0")
            elif key == "alpha0":
                self.alpha0 = parse_vec3(value)
            elif key == "grid":
                self.grid = parse_grid(value)
            elif key == "tol":
                tol = _float(value, "tol")
                if tol <= 0.0:
                    raise ConfigError(f"tol must be positive, got {value}")
                self.tol = tol
            elif key == "output":
                self.output = Path(value)
            elif key == "format":
                if value not in OUTPUT_FORMATS:
                    raise ConfigError(f"format must be one of {OUTPUT_FORMATS}")
                self.format = value
            elif key == "entry":
                self.entry = value
            elif key == "all":
                self.all_entries = value.lower() in ("1", "true", "yes", "on")
            elif key == "s":
                self.s = _float(value, "s")
            elif key == "workers":
                workers = int(_float(value, "workers"))
                if workers < 1:
                    raise ConfigError(f"workers must be >= 1, got {value}")
                self.workers = workers
            else:
                self.params[key] = value

    def generator_kind(self) -> "GeneratorKind":
        """The generator kind named by kind= and its parameters."""
        if self.kind is None:
            raise ConfigError("No generator kind configured (kind=...)")
        return generator_kind_from({"kind": self.kind, **self.params})

    def effective_tolerance(self) -> float:
        return self.tol if self.tol is not None else default_tolerance()
