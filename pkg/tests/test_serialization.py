"""Tests for curve and report serialization."""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from src.catalog import DEFAULT_THRESHOLDS, VerificationReport
from src.generator import Exp, make_generator
from src.minkowski import Vec3
from src.serialization import (
    CSV_HEADER,
    SCHEMA_VERSION,
    SerializationError,
    atomic_write,
    curve_to_csv,
    curve_to_json,
    read_curve_csv,
    read_curve_json,
    read_reports_json,
    render_report_table,
    report_to_dict,
    reports_to_json,
    write_curve,
)
from src.synthesis import CurveSpec, SampledCurve, synthesize
from src.utils.error_handling import ConfigError


@pytest.fixture(scope="module")
def helix() -> SampledCurve:
    spec = CurveSpec(make_generator(Exp(1.0)), 1, 0.0, Vec3(0.0, 1.0, 0.0))
    return synthesize(spec, np.linspace(-1.0, 1.0, 9), tol=1e-12)


def _report(label: str = "helix-a", nullity: float = 1e-12) -> VerificationReport:
    return VerificationReport(
        label=label,
        nullity_max=nullity,
        pseudo_arc_max=1e-10,
        torsion_law_max=0.0,
        synthesis_vs_closed_max=1e-11,
        torsion_fd_max=1e-6,
        orientation_max=1e-15,
        orientation_sign_errors=0,
    )


class TestAtomicWrite:
    """Test atomic_write function."""

    def test_write_and_replace(self, tmp_path: Path) -> None:
        """Test the file is written, replaced and no temporary file is left."""
        target = tmp_path / "out" / "curve.csv"
        atomic_write(target, "first\n")
        atomic_write(target, "second\n")
        assert target.read_text(encoding="utf-8") == "second\n"
        assert [p.name for p in target.parent.iterdir()] == ["curve.csv"]

    def test_unwritable(self, tmp_path: Path) -> None:
        """Test a parent that is a file raises SerializationError."""
        blocker = tmp_path / "blocker"
        blocker.write_text("x", encoding="utf-8")
        with pytest.raises(SerializationError) as info:
            atomic_write(blocker / "curve.csv", "data")
        assert info.value.error_code == "WriteFailed"


class TestCsv:
    """Test the CSV codec."""

    def test_header_and_rows(self, helix: SampledCurve) -> None:
        """Test one header line and one row per sample."""
        lines = curve_to_csv(helix).splitlines()
        assert lines[0] == ",".join(CSV_HEADER)
        assert len(lines) == len(helix) + 1

    def test_read_back(self, helix: SampledCurve) -> None:
        """Test 17 significant digits reproduce the samples exactly."""
        samples = read_curve_csv(curve_to_csv(helix))
        assert samples == helix.samples

    def test_bad_header(self) -> None:
        """Test a foreign header is rejected."""
        with pytest.raises(SerializationError) as info:
            read_curve_csv("t,x,y,z\n0,0,0,0\n")
        assert info.value.error_code == "BadHeader"

    def test_bad_row(self) -> None:
        """Test a short row is rejected."""
        with pytest.raises(SerializationError, match="row 3") as info:
            read_curve_csv("s,x,y,z,err\n0,0,0,0,0\n1,2,3\n")
        assert info.value.error_code == "BadRow"


class TestJson:
    """Test the JSON curve document."""

    def test_document(self, helix: SampledCurve) -> None:
        """Test the schema, generator description and anchor."""
        document = json.loads(curve_to_json(helix, tol=1e-12, command="synthesize"))
        assert document["schema"] == SCHEMA_VERSION
        assert document["generator"] == {"label": "exp(c=1)", "kind": "exp", "c": 1.0}
        assert document["epsilon"] == 1
        assert document["alpha0"] == [0.0, 1.0, 0.0]
        assert document["tol"] == 1e-12
        assert document["meta"] == {"command": "synthesize"}
        assert len(document["samples"]) == len(helix)

    def test_read_back(self, helix: SampledCurve) -> None:
        """Test reading a document gives the same samples."""
        document = read_curve_json(curve_to_json(helix))
        assert document.samples == helix.samples
        assert document.parameters() == list(helix.parameters())
        assert document.alpha0 == Vec3(0.0, 1.0, 0.0)
        assert document.tol is None

    @pytest.mark.parametrize(
        "text, code",
        [
            ("{not json", "BadJson"),
            ('{"schema": 2, "samples": []}', "BadSchema"),
            ("[1, 2]", "BadDocument"),
            ('{"schema": 1, "samples": []}', "BadDocument"),
        ],
    )
    def test_bad_documents(self, text: str, code: str) -> None:
        """Test invalid JSON, schema versions and missing fields."""
        with pytest.raises(SerializationError) as info:
            read_curve_json(text)
        assert info.value.error_code == code


class TestWriteCurve:
    """Test write_curve function."""

    def test_formats(self, helix: SampledCurve, tmp_path: Path) -> None:
        """Test the returned text matches the file."""
        path = tmp_path / "helix.json"
        text = write_curve(helix, path, "json")
        assert path.read_text(encoding="utf-8") == text
        assert write_curve(helix, None, "csv") == curve_to_csv(helix)

    def test_unknown_format(self, helix: SampledCurve) -> None:
        """Test unknown formats raise ConfigError."""
        with pytest.raises(ConfigError, match="format"):
            write_curve(helix, None, "xml")


class TestReports:
    """Test report encoding and the summary table."""

    def test_report_dict(self) -> None:
        """Test residuals, thresholds and non-finite values."""
        document = report_to_dict(_report(nullity=math.inf))
        assert document["passed"] is False
        assert document["failures"] == ["nullity"]
        assert document["residuals"]["nullity"] is None
        assert document["residuals"]["axis"] is None
        assert document["thresholds"] == DEFAULT_THRESHOLDS
        assert document["frame"] is None

    def test_coverage_fields(self) -> None:
        """Test torsion coverage and skipped points are written and fail the report."""
        report = _report()
        report.torsion_fd_checked = 3
        report.torsion_fd_required = 5
        report.skipped_points = [0.5]
        document = report_to_dict(report)
        assert document["failures"] == ["torsion_fd_coverage", "skipped_points"]
        assert document["torsion_fd_checked"] == 3
        assert document["torsion_fd_required"] == 5
        assert document["skipped_points"] == [0.5]

    def test_reports_json(self) -> None:
        """Test the document-level pass flag and reading it back."""
        text = reports_to_json([_report("helix-a"), _report("helix-c")])
        assert json.loads(text)["passed"] is True
        reports = read_reports_json(text)
        assert [r["label"] for r in reports] == ["helix-a", "helix-c"]

    def test_reports_json_bad_schema(self) -> None:
        """Test the schema version is checked."""
        with pytest.raises(SerializationError):
            read_reports_json('{"schema": 0, "reports": []}')

    def test_table(self) -> None:
        """Test rows, status and the over-threshold marker."""
        table = render_report_table([_report("helix-a"), _report("slant-d", 1e-3)])
        lines = table.splitlines()
        assert lines[0].split()[0] == "entry"
        assert lines[0].split()[-1] == "status"
        assert lines[2].startswith("helix-a") and lines[2].endswith("PASS")
        assert lines[3].startswith("slant-d") and lines[3].endswith("FAIL")
        assert "1.00e-03 !" in lines[3]
        assert "!" not in lines[2]

    def test_empty_table(self) -> None:
        """Test an empty report list."""
        assert render_report_table([]) == "(no reports)\n"
