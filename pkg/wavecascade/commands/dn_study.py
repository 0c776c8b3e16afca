"""wavecascade dn-study - DN expansion remainders against the elliptic solve."""

from __future__ import annotations

import logging

from wavecascade.commands import load_for, print_report, print_run_info
from wavecascade.harness.comparison import run_dn_study
from wavecascade.harness.report import write_report

logger = logging.getLogger("wavecascade.commands.dn_study")


def cmd_dn_study(args) -> int:
    cfg, out_dir, threads, seed = load_for(args, "dn_study")
    print_run_info("dn-study", out_dir, threads, seed)
    report = run_dn_study(cfg, threads=threads, seed=seed)
    csv_path, meta_path = write_report(report, out_dir)
    logger.info("wrote %s and %s", csv_path, meta_path)
    print_report(report)
    return 2 if report.failed_params else 0
