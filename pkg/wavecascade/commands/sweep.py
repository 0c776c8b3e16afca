"""wavecascade sweep - reference solver self-check over the parameter list."""

from __future__ import annotations

import logging

from wavecascade.commands import load_for, print_report, print_run_info
from wavecascade.harness.comparison import run_sweep
from wavecascade.harness.report import write_report

logger = logging.getLogger("wavecascade.commands.sweep")


def cmd_sweep(args) -> int:
    cfg, out_dir, threads, seed = load_for(args, "sweep")
    print_run_info("sweep", out_dir, threads, seed)
    report = run_sweep(cfg, threads=threads, seed=seed)
    csv_path, meta_path = write_report(report, out_dir)
    logger.info("wrote %s and %s", csv_path, meta_path)
    print_report(report)
    return 2 if report.failed_params else 0
