"""Regime sweeps: model against water-waves reference, reference self-checks, DN expansion remainders.

Every parameter value is an independent point. Points run on a bounded
thread pool and are aggregated in parameter order, so the report does not
depend on the thread count.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

from wavecascade.asymptotics.boussinesq import (
    boussinesq_frequency,
    boussinesq_initial,
    boussinesq_integrate,
    boussinesq_reconstruct,
)
from wavecascade.asymptotics.common import HyperbolicState, suggest_model_dt
from wavecascade.asymptotics.full_dispersion import fd_frequency, fd_initial, fd_integrate, fd_reconstruct
from wavecascade.asymptotics.green_naghdi import gn_frequency, gn_initial_velocity, gn_integrate, gn_reconstruct
from wavecascade.asymptotics.kp import kp_initial, kp_integrate, kp_reconstruct, kp_suggest_dt, kp_velocity
from wavecascade.asymptotics.shallow_water import sw_advective_speed, sw_frequency, sw_initial, sw_integrate
from wavecascade.build_info import build_id
from wavecascade.dnop import DnBackend, dn_apply
from wavecascade.errors import ConfigError, NoFitError, WaveCascadeError
from wavecascade.harness.initial_data import make_bottom, make_initial_data
from wavecascade.harness.rates import SLOPE_BRACKET, fit_rate
from wavecascade.harness.report import ConvergenceReport, PointResult
from wavecascade.params import DepthScaling, RegimeParams, RegimePreset, effective_nu, preset_sweep
from wavecascade.schema import ExperimentConfig
from wavecascade.spectral import ScalarField, VectorField, grad, sobolev_norm
from wavecascade.strip import StripGeometry
from wavecascade.taylor import taylor_check
from wavecascade.timestepping import step_count
from wavecascade.waterwaves import (
    IntegratorConfig,
    SurfaceState,
    hamiltonian,
    integrate,
    mass,
    suggest_dt,
)

logger = logging.getLogger("wavecascade.comparison")

COMPARE_COLUMNS = ["err_linf_zeta", "err_linf_v", "err_hs"]
SWEEP_COLUMNS = ["self_error_linf", "mass_drift", "hamiltonian_drift"]
DN_STUDY_COLUMNS = ["error_hs"]

# model -> presets it can be compared under
MODEL_PRESETS: dict[str, tuple[RegimePreset, ...]] = {
    "shallow_water": (RegimePreset.SHALLOW_WATER, RegimePreset.GREEN_NAGHDI, RegimePreset.SERRE),
    "green_naghdi": (RegimePreset.SHALLOW_WATER, RegimePreset.GREEN_NAGHDI, RegimePreset.SERRE),
    "boussinesq": (RegimePreset.BOUSSINESQ_LONG_WAVE,),
    "kp": (RegimePreset.KP_WEAKLY_TRANSVERSE,),
    "full_dispersion": (RegimePreset.FULL_DISPERSION,),
}


# ---------------------------------------------------------------------------
# Regime bookkeeping
# ---------------------------------------------------------------------------


def check_model_preset(model: str, preset: RegimePreset) -> None:
    allowed = MODEL_PRESETS.get(model)
    if allowed is None:
        raise ConfigError(f"experiment.model {model!r} is not an asymptotic model")
    if preset not in allowed:
        names = ", ".join(p.value for p in allowed)
        raise ConfigError(f"model {model!r} cannot be compared under preset {preset.value!r} (use {names})")


def regime_horizon(model: str, preset: RegimePreset, p: RegimeParams, horizon: float) -> float:
    """Final time of a comparison: T, T/sqrt(mu) (Serre), T/eps (KP) or T/steepness (full dispersion)."""
    if model == "kp":
        return horizon / p.epsilon
    if model == "full_dispersion":
        return horizon / p.steepness
    if preset is RegimePreset.SERRE:
        return horizon / math.sqrt(p.mu)
    return horizon


def expected_compare_slope(model: str, preset: RegimePreset) -> Optional[float]:
    """Rate in the preset's small parameter; None for KP, which only claims convergence."""
    serre = preset is RegimePreset.SERRE
    if model == "shallow_water":
        return 0.5 if serre else 1.0
    if model == "green_naghdi":
        return 1.5 if serre else 2.0
    if model == "boussinesq":
        return 2.0
    if model == "full_dispersion":
        return 1.0
    return None


def expected_dn_slope(expansion: str, order: int, vary: str) -> Optional[float]:
    if expansion == "shallow1" and vary == "mu":
        return 2.0
    if expansion == "shallow2" and vary == "mu":
        return 3.0
    if expansion == "small_amplitude" and vary == "epsilon":
        return float(order + 1)
    return None


# ---------------------------------------------------------------------------
# Per-point building blocks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointSetup:
    """Everything one sweep point owns."""

    value: float
    p: RegimeParams
    zeta0: ScalarField
    psi0: ScalarField
    b: ScalarField


def setup_point(cfg: ExperimentConfig, value: float, p: RegimeParams, seed: int) -> PointSetup:
    grid = cfg.grid.build()
    zeta0, psi0 = make_initial_data(cfg.initial, grid, p, cfg.experiment.h0, seed)
    return PointSetup(value, p, zeta0, psi0, make_bottom(cfg.initial, grid))


@dataclass(frozen=True)
class ModelSnapshot:
    time: float
    zeta: ScalarField
    velocity: VectorField
    x_only: bool = False


def _speed(v: VectorField) -> float:
    return math.sqrt(v.norm_squared().max_abs())


def reference_dt(cfg: ExperimentConfig, p: RegimeParams, scaling: DepthScaling) -> float:
    if cfg.integrator.dt > 0:
        return cfg.integrator.dt
    return suggest_dt(cfg.grid.build(), p, scaling, cfg.integrator.cfl)


def run_reference(
    cfg: ExperimentConfig,
    point: PointSetup,
    t_end: float,
    dt: float,
    backend: Optional[DnBackend] = None,
    snapshot_stride: Optional[int] = None,
) -> list[SurfaceState]:
    """Water-waves run of one point; only the endpoints are kept unless a stride is given."""
    backend = backend or cfg.reference.dn_backend(cfg.integrator)
    geom = StripGeometry(point.zeta0, point.b, point.p, cfg.experiment.h0)
    report = taylor_check(geom, point.psi0, backend)
    stride = snapshot_stride or max(1, step_count(0.0, t_end, dt))
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
    return integrate(SurfaceState(point.zeta0, point.psi0), icfg, geom, taylor=report)


def model_time_step(cfg: ExperimentConfig, model: str, point: PointSetup) -> float:
    """CFL step of the model in water-waves time units."""
    grid = point.zeta0.grid
    p, cfl = point.p, cfg.integrator.cfl
    if model == "shallow_water":
        state = HyperbolicState(point.zeta0, sw_initial(point.psi0))
        return suggest_model_dt(grid, sw_frequency(grid), sw_advective_speed(state, point.b, p), cfl)
    if model == "green_naghdi":
        v0 = gn_initial_velocity(point.zeta0, point.psi0, point.b, p)
        return suggest_model_dt(grid, gn_frequency(grid, p.mu), p.epsilon * _speed(v0), cfl)
    if model == "boussinesq":
        coeffs = cfg.boussinesq.coeffs()
        state = boussinesq_initial(point.zeta0, point.psi0, point.b, p.epsilon, coeffs.theta)
        omega = boussinesq_frequency(grid, p.epsilon, coeffs)
        return suggest_model_dt(grid, omega, p.epsilon * _speed(state.v), cfl)
    if model == "full_dispersion":
        state = fd_initial(point.zeta0, point.psi0, p)
        return suggest_model_dt(grid, fd_frequency(grid, p.mu), p.steepness * _speed(state.v), cfl)
    if model == "kp":
        return kp_suggest_dt(kp_initial(point.zeta0, point.psi0), cfl) / p.epsilon
    raise ConfigError(f"no time step rule for model {model!r}")


def run_model(
    cfg: ExperimentConfig,
    model: str,
    point: PointSetup,
    t_end: float,
    dt: float,
    snapshot_stride: Optional[int] = None,
) -> list[ModelSnapshot]:
    """Integrate an asymptotic model and map every kept state back to (zeta, grad psi)."""
    p, b = point.p, point.b
    dealias_products = cfg.integrator.dealias
    stride = snapshot_stride or max(1, step_count(0.0, t_end, dt))

    if model == "kp":
        pair0 = kp_initial(point.zeta0, point.psi0)
        pairs = kp_integrate(pair0, p.epsilon * t_end, p.epsilon * dt, dealias_products, stride)
        out = []
        for pair in pairs:
            t = pair.tau / p.epsilon
            velocity = VectorField(kp_velocity(pair, p, t), point.zeta0.grid.zeros())
            out.append(ModelSnapshot(t, kp_reconstruct(pair, p, t), velocity, x_only=True))
        return out

    reconstruct: Callable[[HyperbolicState], tuple[ScalarField, VectorField]]
    if model == "shallow_water":
        state0 = HyperbolicState(point.zeta0, sw_initial(point.psi0))
        states = sw_integrate(state0, b, t_end, dt, p, dealias_products, stride)
        reconstruct = lambda s: (s.zeta, s.v)  # noqa: E731
    elif model == "green_naghdi":
        state0 = HyperbolicState(point.zeta0, gn_initial_velocity(point.zeta0, point.psi0, b, p))
        states = gn_integrate(
            state0, b, p, t_end, dt, dealias_products, stride,
            tol=cfg.integrator.cg_tol, maxiter=cfg.integrator.cg_maxiter,
        )
        reconstruct = lambda s: (s.zeta, gn_reconstruct(s, b, p))  # noqa: E731
    elif model == "boussinesq":
        coeffs = cfg.boussinesq.coeffs()
        state0 = boussinesq_initial(point.zeta0, point.psi0, b, p.epsilon, coeffs.theta)
        states = boussinesq_integrate(state0, b, coeffs, p.epsilon, t_end, dt, dealias_products, stride)
        reconstruct = lambda s: boussinesq_reconstruct(s, b, p.epsilon, coeffs.theta)  # noqa: E731
    elif model == "full_dispersion":
        state0 = fd_initial(point.zeta0, point.psi0, p)
        states = fd_integrate(state0, p, t_end, dt, dealias_products, stride)
        reconstruct = lambda s: (s.zeta, fd_reconstruct(s, p))  # noqa: E731
    else:
        raise ConfigError(f"unknown model {model!r}")
    snapshots = []
    for s in states:
        zeta, velocity = reconstruct(s)
        snapshots.append(ModelSnapshot(s.time, zeta, velocity))
    return snapshots


def mismatch(reference: SurfaceState, approx: ModelSnapshot, s: float) -> dict[str, float]:
    """L-infinity and H^s surface errors plus the L-infinity velocity error at one time."""
    d_zeta = reference.zeta - approx.zeta
    grad_psi = grad(reference.psi)
    err_x = (grad_psi.x - approx.velocity.x).max_abs()
    err_v = err_x if approx.x_only else max(err_x, (grad_psi.y - approx.velocity.y).max_abs())
    return {
        "err_linf_zeta": d_zeta.max_abs(),
        "err_linf_v": err_v,
        "err_hs": sobolev_norm(d_zeta, s),
    }


# ---------------------------------------------------------------------------
# Point runners
# ---------------------------------------------------------------------------


def _guarded(value: float, body: Callable[[], PointResult]) -> PointResult:
    try:
        return body()
    except WaveCascadeError as e:
        logger.warning("point %s failed: %s", value, e)
        return PointResult(param=value, failure=e.to_dict())


def compare_point(cfg: ExperimentConfig, value: float, p: RegimeParams, seed: int) -> PointResult:
    model = cfg.experiment.model

    def body() -> PointResult:
        logger.info("compare %s: value=%s start", model, value)
        point = setup_point(cfg, value, p, seed)
        t_end = regime_horizon(model, cfg.experiment.preset, p, cfg.experiment.horizon)
        dt = cfg.integrator.dt or min(reference_dt(cfg, p, cfg.depth_scaling), model_time_step(cfg, model, point))
        approx = run_model(cfg, model, point, t_end, dt)[-1]
        reference = run_reference(cfg, point, t_end, dt / cfg.reference.dt_factor)[-1]
        errors = mismatch(reference, approx, cfg.experiment.sobolev_index)
        logger.info("compare %s: value=%s err_linf_zeta=%.4g", model, value, errors["err_linf_zeta"])
        return PointResult(param=value, values=errors, dt=dt)

    return _guarded(value, body)


def sweep_point(cfg: ExperimentConfig, value: float, p: RegimeParams, seed: int) -> PointResult:
    """Reference at dt and dt/2: self error, mass and Hamiltonian drift."""

    def body() -> PointResult:
        logger.info("sweep: value=%s start", value)
        point = setup_point(cfg, value, p, seed)
        t_end = cfg.experiment.horizon
        dt = reference_dt(cfg, p, cfg.depth_scaling) / cfg.reference.dt_factor
        backend = cfg.reference.dn_backend(cfg.integrator)
        coarse = run_reference(cfg, point, t_end, dt, backend)
        values = {"self_error_linf": math.nan}
        if cfg.reference.self_check:
            fine = run_reference(cfg, point, t_end, 0.5 * dt, backend)
            values["self_error_linf"] = (coarse[-1].zeta - fine[-1].zeta).max_abs()
        geom = StripGeometry(point.zeta0, point.b, p, cfg.experiment.h0)
        nu = effective_nu(p, cfg.depth_scaling)
        h_start = hamiltonian(coarse[0], geom, backend, nu)
        h_end = hamiltonian(coarse[-1], geom, backend, nu)
        values["mass_drift"] = abs(mass(coarse[-1]) - mass(coarse[0]))
        values["hamiltonian_drift"] = abs(h_end - h_start)
        return PointResult(param=value, values=values, dt=dt)

    return _guarded(value, body)


def dn_study_params(cfg: ExperimentConfig, value: float) -> RegimeParams:
    settings = cfg.dn_study
    has_bottom = cfg.initial.has_bottom
    if settings.vary == "mu":
        return RegimeParams(epsilon=settings.epsilon, mu=value, gamma=1.0, beta=1.0 if has_bottom else 0.0)
    return RegimeParams(epsilon=value, mu=settings.mu, gamma=1.0, beta=value if has_bottom else 0.0)


def dn_study_point(cfg: ExperimentConfig, value: float, p: RegimeParams, seed: int) -> PointResult:
    """H^s norm of the expansion minus the elliptic DN image, on the initial data of one point."""

    def body() -> PointResult:
        point = setup_point(cfg, value, p, seed)
        geom = StripGeometry(point.zeta0, point.b, p, cfg.experiment.h0)
        exact = dn_apply(geom, point.psi0, cfg.reference.dn_backend(cfg.integrator))
        settings = cfg.dn_study
        expansion = DnBackend(settings.expansion, nz=cfg.reference.nz, order=settings.order)
        remainder = dn_apply(geom, point.psi0, expansion) - exact
        error = sobolev_norm(remainder, cfg.experiment.sobolev_index)
        logger.info("dn-study %s: value=%s error_hs=%.4g max=%.4g", settings.expansion, value, error, remainder.max_abs())
        return PointResult(param=value, values={"error_hs": error})

    return _guarded(value, body)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


def run_points(
    cfg: ExperimentConfig,
    params: list[RegimeParams],
    runner: Callable[[ExperimentConfig, float, RegimeParams, int], PointResult],
    threads: int,
    seed: int,
) -> list[PointResult]:
    """Run every point on a pool of `threads` workers; results come back in parameter order."""
    values = cfg.experiment.values
    if threads <= 1 or len(values) <= 1:
        return [runner(cfg, v, p, seed) for v, p in zip(values, params)]
    with ThreadPoolExecutor(max_workers=threads, thread_name_prefix="wavecascade-point") as pool:
        return list(pool.map(lambda vp: runner(cfg, vp[0], vp[1], seed), zip(values, params)))


def base_meta(cfg: ExperimentConfig, threads: int, seed: int) -> dict[str, str]:
    """Every tolerance and default in effect, as report.meta strings."""
    e, g, i, r = cfg.experiment, cfg.grid, cfg.integrator, cfg.reference
    raw: dict[str, object] = {
        "kind": e.kind,
        "preset": e.preset.value,
        "model": e.model,
        "values": ";".join(repr(float(v)) for v in e.values),
        "horizon": float(e.horizon),
        "fixed_mu": float(e.fixed_mu),
        "sobolev_index": float(e.sobolev_index),
        "h0": float(e.h0),
        "depth_scaling": cfg.depth_scaling.value,
        "grid": f"{g.nx}x{g.ny}",
        "lx": float(g.lx),
        "ly": float(g.ly),
        "dt": float(i.dt),
        "cfl": float(i.cfl),
        "dealias": i.dealias,
        "dealias_fraction": "2/3",
        "filter": i.filter,
        "filter_order": i.filter_order,
        "backend": i.dn_backend().describe(),
        "nz": i.nz,
        "cg_tol": float(i.cg_tol),
        "cg_maxiter": i.cg_maxiter,
        "reference_backend": r.dn_backend(i).describe(),
        "reference_nz": r.nz,
        "reference_dt_factor": r.dt_factor,
        "reference_self_check": r.self_check,
        "slope_bracket": SLOPE_BRACKET,
        "build_id": build_id(),
        "threads": threads,
        "seed": seed,
    }
    if e.model == "boussinesq":
        coeffs = cfg.boussinesq.coeffs()
        raw["boussinesq_theta"] = float(coeffs.theta)
        raw["boussinesq_a"] = ";".join(repr(float(a)) for a in coeffs.as_tuple())
    if e.kind == "dn_study":
        d = cfg.dn_study
        raw.update(dn_expansion=d.expansion, dn_order=d.order, dn_vary=d.vary, dn_mu=d.mu, dn_epsilon=d.epsilon)
    return {k: _meta_text(v) for k, v in raw.items()}


def _meta_text(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _fit(report: ConvergenceReport) -> ConvergenceReport:
    if report.fit_column is None:
        return report
    good = [i for i, pt in enumerate(report.points) if not pt.failed]
    errors = report.series(report.fit_column)
    try:
        fit = fit_rate([report.points[i].param for i in good], [errors[i] for i in good])
    except NoFitError as e:
        logger.warning("no rate fit: %s", e)
        return report.model_copy(update={"no_fit_reason": str(e)})
    if report.expected_slope is not None and not fit.within(report.expected_slope):
        logger.warning("fitted slope %.3f outside %.1f +- %.1f", fit.slope, report.expected_slope, SLOPE_BRACKET)
    return report.model_copy(
        update={
            "slope": fit.slope,
            "intercept": fit.intercept,
            "residual": fit.residual,
            "excluded": [good[i] for i in fit.excluded],
        }
    )


def _with_dt(meta: dict[str, str], points: list[PointResult]) -> dict[str, str]:
    meta = dict(meta)
    meta["dt_used"] = ";".join("nan" if pt.dt is None else repr(float(pt.dt)) for pt in points)
    return meta


def run_comparison(cfg: ExperimentConfig, threads: int = 1, seed: int = 0) -> ConvergenceReport:
    """Model against the water-waves reference over the configured parameter list."""
    e = cfg.experiment
    check_model_preset(e.model, e.preset)
    params = preset_sweep(e.preset, e.values, e.fixed_mu)
    points = run_points(cfg, params, compare_point, threads, seed)
    meta = _with_dt(base_meta(cfg, threads, seed), points)
    expected = expected_compare_slope(e.model, e.preset)
    if cfg.reference.self_check:
        meta["reference_self_error"] = repr(float(_reference_self_error(cfg, params, seed)))
    report = ConvergenceReport(
        kind="compare",
        preset=e.preset.value,
        model=e.model,
        columns=list(COMPARE_COLUMNS),
        points=points,
        fit_column="err_linf_zeta",
        expected_slope=expected,
        require_decrease=expected is None,
        meta=meta,
    )
    return _fit(report)


def _reference_self_error(cfg: ExperimentConfig, params: list[RegimeParams], seed: int) -> float:
    """dt-halving check of the reference on the last (smallest) parameter; nan when it fails."""
    value, p = cfg.experiment.values[-1], params[-1]
    try:
        point = setup_point(cfg, value, p, seed)
        t_end = regime_horizon(cfg.experiment.model, cfg.experiment.preset, p, cfg.experiment.horizon)
        dt = reference_dt(cfg, p, cfg.depth_scaling) / cfg.reference.dt_factor
        coarse = run_reference(cfg, point, t_end, dt)[-1]
        fine = run_reference(cfg, point, t_end, 0.5 * dt)[-1]
    except WaveCascadeError as e:
        logger.warning("reference self-check failed: %s", e)
        return math.nan
    error = (coarse.zeta - fine.zeta).max_abs()
    logger.info("reference self-check at value=%s: %.3g", value, error)
    return error


def run_sweep(cfg: ExperimentConfig, threads: int = 1, seed: int = 0) -> ConvergenceReport:
    e = cfg.experiment
    params = preset_sweep(e.preset, e.values, e.fixed_mu)
    points = run_points(cfg, params, sweep_point, threads, seed)
    return ConvergenceReport(
        kind="sweep",
        preset=e.preset.value,
        model="water_waves",
        columns=list(SWEEP_COLUMNS),
        points=points,
        meta=_with_dt(base_meta(cfg, threads, seed), points),
    )


def run_dn_study(cfg: ExperimentConfig, threads: int = 1, seed: int = 0) -> ConvergenceReport:
    e, d = cfg.experiment, cfg.dn_study
    params = [dn_study_params(cfg, v) for v in e.values]
    points = run_points(cfg, params, dn_study_point, threads, seed)
    report = ConvergenceReport(
        kind="dn_study",
        preset=e.preset.value,
        model=d.expansion,
        columns=list(DN_STUDY_COLUMNS),
        points=points,
        fit_column="error_hs",
        expected_slope=expected_dn_slope(d.expansion, d.order, d.vary),
        running_slope=True,
        meta=base_meta(cfg, threads, seed),
    )
    return _fit(report)
