from __future__ import annotations

import math
import sys
from pathlib import Path
from typing import Optional

from wavecascade.build_info import build_id
from wavecascade.config import load_experiment, resolve_threads
from wavecascade.errors import ConfigError
from wavecascade.harness.report import ConvergenceReport
from wavecascade.schema import ExperimentConfig

SEED_LIMIT = 2 ** 64


def get_version() -> str:
    # Prefer pyproject.toml so editable installs always reflect the latest version
    try:
        try:
            import tomllib
        except ImportError:
            import tomli as tomllib  # type: ignore[no-redef]
        pyproject = Path(__file__).resolve().parent.parent.parent / "pyproject.toml"
        with open(pyproject, "rb") as f:
            return tomllib.load(f)["project"]["version"]
    except Exception:
        pass
    try:
        from importlib.metadata import version
        return version("wavecascade")
    except Exception:
        return "unknown"


def print_run_info(kind: str, out_dir: Path, threads: int, seed: int) -> None:
    """Version, build id and run settings to stderr (TTY only)."""
    if sys.stderr.isatty():
        print(f"wavecascade {get_version()} (build {build_id()})", file=sys.stderr)
        print(f"  {kind} → {out_dir}  threads={threads} seed={seed}", file=sys.stderr)


def load_for(args, kind: str) -> tuple[ExperimentConfig, Path, int, int]:
    """(config with `kind` forced, output directory, thread count, seed) from parsed CLI args."""
    cfg = load_experiment(args.config)
    if cfg.experiment.kind != kind:
        cfg = cfg.model_copy(update={"experiment": cfg.experiment.model_copy(update={"kind": kind})})
    threads = resolve_threads(getattr(args, "threads", None))
    seed = getattr(args, "seed", None)
    seed = 0 if seed is None else seed
    if not (0 <= seed < SEED_LIMIT):
        raise ConfigError(f"--seed must be an unsigned 64-bit integer, got {seed!r}")
    out_dir = Path(getattr(args, "out", None) or cfg.experiment.out_dir)
    return cfg, out_dir, threads, seed


def _fmt(value: Optional[float]) -> str:
    if value is None or math.isnan(value):
        return "-"
    return f"{value:.3e}"


def _print_table(
    headers: list[str], rows: list[list[str]], right_align: set[int] | None = None
) -> None:
    right_align = right_align or set()
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))

    def _cell(cell: str, i: int, is_header: bool = False) -> str:
        if i in right_align and not is_header:
            return cell.rjust(widths[i])
        return cell.ljust(widths[i])

    print("  ".join(_cell(headers[i], i, is_header=True) for i in range(len(headers))))
    print("  ".join("-" * widths[i] for i in range(len(headers))))
    for row in rows:
        print("  ".join(_cell(row[i], i) for i in range(len(headers))))


def print_report(report: ConvergenceReport) -> None:
    headers = ["param", *report.columns]
    rows = [
        [f"{pt.param:g}", *(_fmt(pt.values.get(c)) for c in report.columns)]
        for pt in report.points
    ]
    _print_table(headers, rows, right_align=set(range(1, len(headers))))
    if report.fit_column is not None:
        print()
        if report.slope is None:
            print(f"no fit: {report.no_fit_reason}")
        else:
            expected = "" if report.expected_slope is None else f" (expected {report.expected_slope:g})"
            print(f"slope={report.slope:.3f}{expected} residual={report.residual:.3g}")
    verdict = report.passes()
    if verdict is not None:
        print(f"passes={'true' if verdict else 'false'}")
    if report.failed_params:
        print("failed: " + ", ".join(f"{p:g}" for p in report.failed_params))
