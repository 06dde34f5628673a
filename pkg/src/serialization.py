"""
CSV and JSON codecs for sampled curves and verification reports.

CSV columns are ``s,x,y,z,err`` with 17 significant digits. JSON documents
carry ``"schema": 1``; floats are written in their shortest round-trip form,
so reading a curve back gives bit-identical values.
"""

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .catalog import VerificationReport
from .minkowski import Vec3
from .synthesis import CurveSample, SampledCurve
from .utils.error_handling import ConfigError, NullCurveError
from .utils.logging import get_logger

logger = get_logger(__name__)

SCHEMA_VERSION = 1
CSV_HEADER = ("s", "x", "y", "z", "err")

PathLike = Union[str, Path]


class SerializationError(NullCurveError):
    """Raised when a curve or report file cannot be written or parsed."""

    pass


@dataclass
class CurveDocument:
    """A curve as read back from JSON."""

    generator: Dict[str, Any]
    epsilon: int
    s0: float
    alpha0: Vec3
    samples: Tuple[CurveSample, ...]
    tol: Optional[float] = None
    meta: Dict[str, Any] = field(default_factory=dict)

    def parameters(self) -> List[float]:
        return [p.s for p in self.samples]


def _fmt(value: float) -> str:
    return format(value, ".17g")


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    # JSON has no inf/nan
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def atomic_write(path: PathLike, text: str) -> Path:
    """
    Write text to path through a temporary file in the same directory and
    a rename, so readers never see a partial file.

    Raises:
        SerializationError: If the file cannot be written
    """
    target = Path(path)
    directory = target.parent if str(target.parent) else Path(".")
    tmp_name = None
    try:
        directory.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(
            prefix=f".{target.name}.", suffix=".tmp", dir=directory
        )
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, target)
    except OSError as e:
        if tmp_name is not None and os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise SerializationError(f"Cannot write {target}: {e}", "WriteFailed")
    logger.debug(f"Wrote {target} ({len(text)} characters)")
    return target


def curve_to_csv(curve: SampledCurve) -> str:
    """CSV text with header s,x,y,z,err."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for p in curve.samples:
        writer.writerow(
            [_fmt(p.s), _fmt(p.pos.x), _fmt(p.pos.y), _fmt(p.pos.z), _fmt(p.err)]
        )
    return buffer.getvalue()


def read_curve_csv(text: str) -> Tuple[CurveSample, ...]:
    """
    Parse CSV text written by curve_to_csv.

    Raises:
        SerializationError: For a wrong header or malformed rows
    """
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(h.strip() for h in rows[0]) != CSV_HEADER:
        raise SerializationError(
            f"CSV header must be {','.join(CSV_HEADER)}", "BadHeader"
        )
    samples = []
    for number, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            s, x, y, z, err = (float(v) for v in row)
        except ValueError:
            raise SerializationError(f"Malformed CSV row {number}: {row}", "BadRow")
        samples.append(CurveSample(s, Vec3(x, y, z), err))
    return tuple(samples)


def curve_to_dict(
    curve: SampledCurve, tol: Optional[float] = None, **meta: Any
) -> Dict[str, Any]:
    spec = curve.spec
    document: Dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "generator": {"label": spec.gen.label, **spec.gen.kind.to_config()},
        "epsilon": spec.epsilon,
        "s0": spec.s0,
        "alpha0": list(spec.alpha0),
        "tol": tol,
        "samples": [
            {"s": p.s, "pos": list(p.pos), "err": p.err} for p in curve.samples
        ],
    }
    if meta:
        document["meta"] = meta
    return document


def curve_to_json(curve: SampledCurve, tol: Optional[float] = None, **meta: Any) -> str:
    return json.dumps(curve_to_dict(curve, tol, **meta), indent=2) + "\n"


def _check_schema(document: Any) -> Dict[str, Any]:
    if not isinstance(document, dict):
        raise SerializationError("JSON document must be an object", "BadDocument")
    version = document.get("schema")
    if version != SCHEMA_VERSION:
        raise SerializationError(
            f"Unsupported schema version {version!r} (expected {SCHEMA_VERSION})",
            "BadSchema",
        )
    return document


def read_curve_json(text: str) -> CurveDocument:
    """
    Parse a curve document.

    Raises:
        SerializationError: For invalid JSON, a wrong schema version or
            missing fields
    """
    try:
        document = _check_schema(json.loads(text))
        samples = tuple(
            CurveSample(float(p["s"]), Vec3.from_array(p["pos"]), float(p["err"]))
            for p in document["samples"]
        )
        return CurveDocument(
            generator=dict(document["generator"]),
            epsilon=int(document["epsilon"]),
            s0=float(document["s0"]),
            alpha0=Vec3.from_array(document["alpha0"]),
            samples=samples,
            tol=document.get("tol"),
            meta=dict(document.get("meta", {})),
        )
    except json.JSONDecodeError as e:
        raise SerializationError(f"Invalid JSON: {e}", "BadJson")
    except (KeyError, TypeError, ValueError) as e:
        raise SerializationError(f"Malformed curve document: {e}", "BadDocument")


def report_to_dict(report: VerificationReport) -> Dict[str, Any]:
    residuals = {k: _finite_or_none(v) for k, v in report.residuals().items()}
    document: Dict[str, Any] = {
        "label": report.label,
        "passed": report.passed(),
        "failures": report.failures(),
        "residuals": residuals,
        "thresholds": dict(report.thresholds),
        "orientation_sign_errors": report.orientation_sign_errors,
        "torsion_fd_checked": report.torsion_fd_checked,
        "torsion_fd_required": report.torsion_fd_required,
        "skipped_points": list(report.skipped_points),
        "frame": None,
        "samples": [
            {k: _finite_or_none(v) if isinstance(v, float) else v for k, v in d.items()}
            for d in (asdict(sample) for sample in report.samples)
        ],
    }
    if report.frame is not None:
        document["frame"] = {
            "s": report.frame_at_s,
            **{k: _finite_or_none(v) for k, v in asdict(report.frame).items()},
        }
    return document


def reports_to_json(reports: Sequence[VerificationReport]) -> str:
    document = {
        "schema": SCHEMA_VERSION,
        "passed": all(r.passed() for r in reports),
        "reports": [report_to_dict(r) for r in reports],
    }
    return json.dumps(document, indent=2) + "\n"


def read_reports_json(text: str) -> List[Dict[str, Any]]:
    """The report objects of a verification document."""
    try:
        document = _check_schema(json.loads(text))
        return list(document["reports"])
    except json.JSONDecodeError as e:
        raise SerializationError(f"Invalid JSON: {e}", "BadJson")
    except (KeyError, TypeError) as e:
        raise SerializationError(f"Malformed report document: {e}", "BadDocument")


def _cell(value: Optional[float], threshold: Optional[float]) -> str:
    if value is None:
        return "-"
    mark = "" if threshold is None or value <= threshold else " !"
    return f"{value:.2e}{mark}"


def render_report_table(reports: Sequence[VerificationReport]) -> str:
    """Human-readable summary: one row per entry, one column per residual."""
    if not reports:
        return "(no reports)\n"
    columns = list(reports[0].residuals().keys())
    header = ["entry"] + columns + ["status"]
    rows = [header]
    for report in reports:
        residuals = report.residuals()
        rows.append(
            [report.label]
            + [_cell(residuals[c], report.thresholds.get(c)) for c in columns]
            + ["PASS" if report.passed() else "FAIL"]
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)) for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def write_curve(
    curve: SampledCurve,
    path: Optional[PathLike],
    fmt: str = "csv",
    tol: Optional[float] = None,
) -> str:
    """
    Encode a curve and write it atomically (or only return the text when
    path is None).

    Raises:
        ConfigError: For an unknown format
    """
    if fmt == "csv":
        text = curve_to_csv(curve)
    elif fmt == "json":
        text = curve_to_json(curve, tol)
    else:
        raise ConfigError(f"Unknown output format: {fmt}")
    if path is not None:
        atomic_write(path, text)
        logger.info(f"Wrote {len(curve)} samples to {path}")
    return text
