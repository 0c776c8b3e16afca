"""wavecascade taylor-check - Taylor sign condition of the configured data."""

from __future__ import annotations

from wavecascade.commands import load_for
from wavecascade.harness.simulation import run_taylor_check
from wavecascade.snapshot import fmt_float


def cmd_taylor_check(args) -> int:
    cfg, _, _, seed = load_for(args, "taylor_check")
    outcome = run_taylor_check(cfg, seed=seed)
    report = outcome.report
    print(f"hessian_margin={fmt_float(report.hessian_margin)} passes={'true' if report.passes else 'false'}")
    print(f"depth_margin={fmt_float(report.depth_margin)}")
    if outcome.threshold is not None:
        print(f"threshold_amplitude={fmt_float(outcome.threshold)}")
    return 0
