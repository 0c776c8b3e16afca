"""wavecascade compare - asymptotic model against the water-waves reference."""

from __future__ import annotations

import logging

from wavecascade.commands import load_for, print_report, print_run_info
from wavecascade.harness.comparison import run_comparison
from wavecascade.harness.report import write_report

logger = logging.getLogger("wavecascade.commands.compare")


def cmd_compare(args) -> int:
    cfg, out_dir, threads, seed = load_for(args, "compare")
    print_run_info("compare", out_dir, threads, seed)
    report = run_comparison(cfg, threads=threads, seed=seed)
    csv_path, meta_path = write_report(report, out_dir)
    logger.info("wrote %s and %s", csv_path, meta_path)
    print_report(report)
    return 2 if report.failed_params else 0
