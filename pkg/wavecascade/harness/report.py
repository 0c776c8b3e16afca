"""Report models and the report.csv / report.meta writers."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Any, Optional, Union

from pydantic import BaseModel, Field, field_validator

from wavecascade.harness.rates import SLOPE_BRACKET, running_slopes, strictly_decreasing
from wavecascade.snapshot import fmt_float, write_table

REPORT_CSV = "report.csv"
REPORT_META = "report.meta"


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


class PointResult(BaseModel):
    param: float
    values: dict[str, float] = Field(default_factory=dict)
    dt: Optional[float] = None
    failure: Optional[dict[str, Any]] = None

    @field_validator("values")
    @classmethod
    def _nonnegative(cls, values: dict[str, float]) -> dict[str, float]:
        for key, value in values.items():
            if not math.isnan(value) and value < 0:
                raise ValueError(f"{key} must be non-negative, got {value!r}")
        return values

    @property
    def failed(self) -> bool:
        return self.failure is not None


class ConvergenceReport(BaseModel):
    kind: str
    preset: str
    model: str
    columns: list[str]
    points: list[PointResult]
    fit_column: Optional[str] = None
    expected_slope: Optional[float] = None
    slope: Optional[float] = None
    intercept: Optional[float] = None
    residual: Optional[float] = None
    excluded: list[int] = Field(default_factory=list)
    no_fit_reason: Optional[str] = None
    require_decrease: bool = False
    # per-row slope_running against the previous point instead of the global slope
    running_slope: bool = False
    meta: dict[str, str] = Field(default_factory=dict)

    @property
    def params(self) -> list[float]:
        return [pt.param for pt in self.points]

    @property
    def failed_params(self) -> list[float]:
        return [pt.param for pt in self.points if pt.failed]

    def series(self, column: str) -> list[float]:
        return [pt.values.get(column, math.nan) for pt in self.points]

    def slope_running(self) -> list[float]:
        """Local slope of the fit column against the previous row; nan on the first row."""
        if self.fit_column is None:
            return [math.nan] * len(self.points)
        return [math.nan, *running_slopes(self.params, self.series(self.fit_column))][: len(self.points)]

    def passes(self) -> Optional[bool]:
        """Slope inside the bracket, or errors strictly decreasing; None when nothing is claimed."""
        if self.failed_params:
            return False
        if self.require_decrease and self.fit_column:
            ordered = sorted(zip(self.params, self.series(self.fit_column)), reverse=True)
            return strictly_decreasing([e for _, e in ordered])
        if self.expected_slope is None:
            return None
        if self.slope is None:
            return False
        return abs(self.slope - self.expected_slope) <= SLOPE_BRACKET


# ---------------------------------------------------------------------------
# Writers
# ---------------------------------------------------------------------------


def _fmt_meta(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return fmt_float(value)
    if value is None:
        return ""
    return str(value)


def report_rows(report: ConvergenceReport) -> list[list[object]]:
    with_slope = report.fit_column is not None
    local = report.slope_running() if report.running_slope and with_slope else None
    rows: list[list[object]] = []
    for i, pt in enumerate(report.points):
        row: list[object] = [float(pt.param)]
        row += [float(pt.values.get(c, math.nan)) for c in report.columns]
        if local is not None:
            row.append(float(local[i]))
        elif with_slope:
            row.append(float(report.slope) if report.slope is not None else math.nan)
        rows.append(row)
    return rows


def header_lines(report: ConvergenceReport) -> list[str]:
    lines = [
        f"kind={report.kind}",
        f"preset={report.preset}",
        f"model={report.model}",
        f"build_id={report.meta.get('build_id', '')}",
    ]
    if report.fit_column is not None:
        lines.append(f"fit_column={report.fit_column}")
        lines.append(f"slope={_fmt_meta(report.slope)}")
        lines.append(f"residual={_fmt_meta(report.residual)}")
        if report.expected_slope is not None:
            lines.append(f"expected_slope={_fmt_meta(report.expected_slope)}")
        if report.no_fit_reason:
            lines.append(f"no_fit={report.no_fit_reason}")
    if report.failed_params:
        lines.append("failed=" + ";".join(fmt_float(p) for p in report.failed_params))
        for pt in report.points:
            if pt.failed:
                lines.append(f"failure {fmt_float(pt.param)}: {pt.failure['kind']}: {pt.failure['detail']}")
    return lines


def write_report(report: ConvergenceReport, out_dir: Union[str, Path]) -> tuple[Path, Path]:
    """Write report.csv and report.meta into out_dir; returns both paths."""
    out_dir = Path(out_dir)
    columns = ["param", *report.columns]
    if report.fit_column is not None:
        columns.append("slope_running" if report.running_slope else "slope")
    csv_path = write_table(out_dir / REPORT_CSV, columns, report_rows(report), header_lines(report))
    meta_path = write_meta(out_dir / REPORT_META, report.meta)
    return csv_path, meta_path


def write_meta(path: Union[str, Path], meta: dict[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        for key in sorted(meta):
            f.write(f"{key}={_fmt_meta(meta[key])}\n")
    return path


def read_meta(path: Union[str, Path]) -> dict[str, str]:
    meta: dict[str, str] = {}
    for line in Path(path).read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        meta[key] = value
    return meta
