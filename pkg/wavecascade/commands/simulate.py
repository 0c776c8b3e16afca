"""wavecascade simulate - one run with diagnostics and field snapshots."""

from __future__ import annotations

from wavecascade.commands import load_for, print_run_info
from wavecascade.harness.simulation import simulate


def cmd_simulate(args) -> int:
    cfg, out_dir, threads, seed = load_for(args, "simulate")
    print_run_info("simulate", out_dir, threads, seed)
    result = simulate(cfg, out_dir, seed=seed, threads=threads)
    print(f"model={result.model} snapshots={result.snapshots} t={result.final_time!r} dt={result.dt!r}")
    print(f"diagnostics: {result.diagnostics_path}")
    return 0
