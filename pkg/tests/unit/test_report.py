"""Unit tests for wavecascade.harness.report."""

import math

import pytest
from pydantic import ValidationError

from wavecascade.harness.report import (
    REPORT_CSV,
    REPORT_META,
    ConvergenceReport,
    PointResult,
    header_lines,
    read_meta,
    write_meta,
    write_report,
)


def _report(**kwargs):
    points = kwargs.pop("points", None) or [
        PointResult(param=0.1, values={"err": 1e-2}, dt=0.01),
        PointResult(param=0.05, values={"err": 2.5e-3}, dt=0.01),
        PointResult(param=0.025, values={"err": 6.25e-4}, dt=0.01),
    ]
    base = dict(
        kind="compare",
        preset="green_naghdi",
        model="green_naghdi",
        columns=["err"],
        points=points,
        fit_column="err",
        expected_slope=2.0,
        slope=2.0,
        intercept=0.0,
        residual=0.0,
        meta={"build_id": "abc123def456"},
    )
    base.update(kwargs)
    return ConvergenceReport(**base)


class TestPointResult:
    def test_negative_values_rejected(self):
        with pytest.raises(ValidationError, match="must be non-negative"):
            PointResult(param=0.1, values={"err": -1.0})

    def test_nan_allowed(self):
        assert math.isnan(PointResult(param=0.1, values={"err": math.nan}).values["err"])

    def test_failed(self):
        pt = PointResult(param=0.1, failure={"status": "failed", "kind": "blow_up", "detail": "x"})
        assert pt.failed
        assert not PointResult(param=0.1).failed


class TestVerdict:
    def test_slope_in_bracket(self):
        assert _report().passes() is True
        assert _report(slope=2.4).passes() is False

    def test_no_claim(self):
        assert _report(expected_slope=None).passes() is None

    def test_missing_fit_fails(self):
        assert _report(slope=None, no_fit_reason="need at least 3").passes() is False

    def test_failures_fail(self):
        points = [
            PointResult(param=0.1, values={"err": 1e-2}),
            PointResult(param=0.05, failure={"status": "failed", "kind": "blow_up", "detail": "t=0.3"}),
        ]
        report = _report(points=points)
        assert report.failed_params == [0.05]
        assert report.passes() is False

    def test_decrease_ordered_by_parameter(self):
        points = [
            PointResult(param=0.02, values={"err": 1e-3}),
            PointResult(param=0.08, values={"err": 1e-2}),
            PointResult(param=0.04, values={"err": 4e-3}),
        ]
        report = _report(points=points, expected_slope=None, slope=None, require_decrease=True)
        assert report.passes() is True
        points[0] = PointResult(param=0.02, values={"err": 5e-3})
        assert _report(points=points, expected_slope=None, require_decrease=True).passes() is False


class TestWriters:
    def test_header(self):
        lines = header_lines(_report())
        assert lines[:4] == ["kind=compare", "preset=green_naghdi", "model=green_naghdi", "build_id=abc123def456"]
        assert "slope=2.0" in lines
        assert "expected_slope=2.0" in lines

    def test_failure_lines(self):
        points = [
            PointResult(param=0.1, values={"err": 1e-2}),
            PointResult(param=0.05, failure={"status": "failed", "kind": "solver_failure", "detail": "no convergence"}),
        ]
        lines = header_lines(_report(points=points))
        assert "failed=0.05" in lines
        assert "failure 0.05: solver_failure: no convergence" in lines

    def test_write_report(self, tmp_path):
        csv_path, meta_path = write_report(_report(), tmp_path / "out")
        assert csv_path.name == REPORT_CSV
        assert meta_path.name == REPORT_META
        body = [line for line in csv_path.read_text().splitlines() if not line.startswith("#")]
        assert body[0] == "param,err,slope"
        assert body[1] == "0.1,0.01,2.0"
        assert len(body) == 4
        assert read_meta(meta_path) == {"build_id": "abc123def456"}

    def test_meta_sorted_and_formatted(self, tmp_path):
        path = write_meta(tmp_path / "report.meta", {"threads": 2, "dealias": True, "cg_tol": 1e-10, "note": None})
        assert path.read_text().splitlines() == ["cg_tol=1e-10", "dealias=true", "note=", "threads=2"]

    def test_running_slope_column(self, tmp_path):
        report = _report(columns=["error_hs"], fit_column="error_hs", running_slope=True, points=[
            PointResult(param=0.1, values={"error_hs": 1e-2}),
            PointResult(param=0.05, values={"error_hs": 2.5e-3}),
            PointResult(param=0.025, values={"error_hs": 1e-3}),
        ])
        csv_path, _ = write_report(report, tmp_path)
        body = [line.split(",") for line in csv_path.read_text().splitlines() if not line.startswith("#")]
        assert body[0] == ["param", "error_hs", "slope_running"]
        assert body[1][2] == "nan"
        assert float(body[2][2]) == pytest.approx(2.0)
        assert float(body[3][2]) == pytest.approx(math.log(0.4) / math.log(0.5))
        # the global fit stays in the header
        assert "slope=2.0" in csv_path.read_text()

    def test_running_slope_through_failed_point(self):
        points = [
            PointResult(param=0.1, values={"error_hs": 1e-2}),
            PointResult(param=0.05, failure={"status": "failed", "kind": "blow_up", "detail": "t=0.3"}),
            PointResult(param=0.025, values={"error_hs": 1e-3}),
        ]
        slopes = _report(columns=["error_hs"], fit_column="error_hs", running_slope=True, points=points).slope_running()
        assert len(slopes) == 3
        assert all(math.isnan(s) for s in slopes)
