"""Single runs: `simulate` with diagnostics and field snapshots, and the Taylor sign check."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from wavecascade.harness.comparison import (
    PointSetup,
    base_meta,
    check_model_preset,
    model_time_step,
    regime_horizon,
    run_model,
    setup_point,
)
from wavecascade.harness.report import write_meta
from wavecascade.params import RegimeParams, effective_nu, preset_sweep
from wavecascade.schema import ExperimentConfig
from wavecascade.snapshot import DiagnosticsWriter, write_field
from wavecascade.spectral import ScalarField, integral
from wavecascade.strip import StripGeometry
from wavecascade.taylor import TaylorReport, taylor_check, taylor_threshold
from wavecascade.waterwaves import (
    IntegratorConfig,
    SurfaceState,
    hamiltonian,
    integrate,
    mass,
    min_depth,
    suggest_dt,
)

logger = logging.getLogger("wavecascade.simulation")

DIAGNOSTICS_CSV = "diagnostics.csv"
SNAPSHOT_DIR = "snapshots"


@dataclass(frozen=True)
class SimulationResult:
    model: str
    snapshots: int
    final_time: float
    dt: float
    diagnostics_path: Path
    snapshot_dir: Path


def first_point(cfg: ExperimentConfig, seed: int) -> PointSetup:
    e = cfg.experiment
    p: RegimeParams = preset_sweep(e.preset, e.values[:1], e.fixed_mu)[0]
    return setup_point(cfg, e.values[0], p, seed)


def _snapshot_name(kind: str, index: int) -> str:
    return f"{kind}_{index:04d}.f64"


def simulate(cfg: ExperimentConfig, out_dir: Union[str, Path], seed: int = 0, threads: int = 1) -> SimulationResult:
    """Integrate the configured model at the first parameter value and write its artifacts."""
    e = cfg.experiment
    out_dir = Path(out_dir)
    snap_dir = out_dir / SNAPSHOT_DIR
    snap_dir.mkdir(parents=True, exist_ok=True)
    point = first_point(cfg, seed)
    p = point.p
    stride = cfg.integrator.snapshot_stride
    diagnostics_path = out_dir / DIAGNOSTICS_CSV

    if e.model == "water_waves":
        t_end = e.horizon
        dt = cfg.integrator.dt or suggest_dt(point.zeta0.grid, p, cfg.depth_scaling, cfg.integrator.cfl)
        backend = cfg.integrator.dn_backend()
        geom = StripGeometry(point.zeta0, point.b, p, e.h0)
        icfg = IntegratorConfig(
            dt=dt,
            t_end=t_end,
            dn_backend=backend,
            dealias=cfg.integrator.dealias,
            snapshot_stride=stride,
            depth_scaling=cfg.depth_scaling,
            filter=cfg.integrator.filter,
            filter_order=cfg.integrator.filter_order,
        )
        states = integrate(SurfaceState(point.zeta0, point.psi0), icfg, geom, taylor=taylor_check(geom, point.psi0, backend))
        nu = effective_nu(p, cfg.depth_scaling)
        with open(diagnostics_path, "w", newline="") as f:
            writer = DiagnosticsWriter(f, e.model)
            for i, s in enumerate(states):
                writer.write(s.time, mass(s), hamiltonian(s, geom, backend, nu), s.zeta.max_abs(), min_depth(s, geom))
                write_field(snap_dir / _snapshot_name("zeta", i), s.zeta)
                write_field(snap_dir / _snapshot_name("psi", i), s.psi)
        final_time, count = states[-1].time, len(states)
    else:
        check_model_preset(e.model, e.preset)
        t_end = regime_horizon(e.model, e.preset, p, e.horizon)
        dt = cfg.integrator.dt or model_time_step(cfg, e.model, point)
        snapshots = run_model(cfg, e.model, point, t_end, dt, snapshot_stride=stride)
        with open(diagnostics_path, "w", newline="") as f:
            writer = DiagnosticsWriter(f, e.model)
            for i, s in enumerate(snapshots):
                depth: ScalarField = 1.0 + p.epsilon * s.zeta - p.beta * point.b
                writer.write(s.time, integral(s.zeta), None, s.zeta.max_abs(), depth.min())
                write_field(snap_dir / _snapshot_name("zeta", i), s.zeta)
                write_field(snap_dir / _snapshot_name("vx", i), s.velocity.x)
                write_field(snap_dir / _snapshot_name("vy", i), s.velocity.y)
        final_time, count = snapshots[-1].time, len(snapshots)

    meta = base_meta(cfg, threads, seed)
    meta.update(dt_used=repr(float(dt)), t_end=repr(float(t_end)), snapshots=str(count))
    write_meta(out_dir / "report.meta", meta)
    logger.info("simulate %s: %s snapshots to t=%.6g in %s", e.model, count, final_time, out_dir)
    return SimulationResult(e.model, count, final_time, dt, diagnostics_path, snap_dir)


@dataclass(frozen=True)
class TaylorOutcome:
    report: TaylorReport
    threshold: Optional[float] = None


def run_taylor_check(cfg: ExperimentConfig, seed: int = 0) -> TaylorOutcome:
    """Check the configured data; with `[taylor] bisect`, also locate the critical bottom amplitude.

    The bisection scales the configured bottom by A between amplitude_low
    and amplitude_high.
    """
    point = first_point(cfg, seed)
    h0 = cfg.experiment.h0
    backend = cfg.integrator.dn_backend()
    geom = StripGeometry(point.zeta0, point.b, point.p, h0)
    report = taylor_check(geom, point.psi0, backend)
    threshold = None
    t = cfg.taylor
    if t.bisect:
        threshold = taylor_threshold(
            lambda amplitude: StripGeometry(point.zeta0, point.b * amplitude, point.p, h0),
            point.psi0,
            t.amplitude_low,
            t.amplitude_high,
            t.tolerance,
            backend,
        )
        logger.info("taylor threshold amplitude %.6g", threshold)
    return TaylorOutcome(report, threshold)
