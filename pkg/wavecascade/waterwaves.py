"""Time integration of the nondimensionalized Zakharov/Craig-Sulem system."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from wavecascade.dnop import DnBackend, dn_apply
from wavecascade.errors import DegenerateGeometryError, InvalidInputError
from wavecascade.params import DepthScaling, RegimeParams, effective_nu
from wavecascade.spectral import (
    PeriodicGrid,
    ScalarField,
    dealias,
    exponential_filter,
    g0_symbol,
    grad_gamma,
    inner,
    integral,
    lambda_s,
    project_zero_mean,
    sobolev_norm,
)
from wavecascade.strip import StripGeometry
from wavecascade.taylor import TaylorReport
from wavecascade.timestepping import integrate_rk4

logger = logging.getLogger("wavecascade.waterwaves")


@dataclass(frozen=True)
class SurfaceState:
    zeta: ScalarField
    psi: ScalarField
    time: float = 0.0

    @classmethod
    def rest(cls, grid: PeriodicGrid, time: float = 0.0) -> "SurfaceState":
        return cls(grid.zeros(), grid.zeros(), time)


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    t_end: float
    dn_backend: DnBackend = field(default_factory=DnBackend)
    dealias: bool = True
    snapshot_stride: int = 1
    depth_scaling: DepthScaling = DepthScaling.GENERAL
    filter: bool = False
    filter_order: int = 36

    def __post_init__(self) -> None:
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise InvalidInputError(f"dt must be positive, got {self.dt!r}")
        if not (self.t_end >= 0 and math.isfinite(self.t_end)):
            raise InvalidInputError(f"t_end must be non-negative, got {self.t_end!r}")
        if self.snapshot_stride < 1:
            raise InvalidInputError(f"snapshot_stride must be >= 1, got {self.snapshot_stride!r}")


def _nu(p: RegimeParams, nu: Optional[float]) -> float:
    return p.nu if nu is None else nu


def ww_rhs(
    state: SurfaceState,
    geom: StripGeometry,
    backend: DnBackend,
    dealias_products: bool = True,
    nu: Optional[float] = None,
) -> tuple[ScalarField, ScalarField]:
    """(d zeta/dt, d psi/dt); `geom` supplies b, the parameters and h0."""
    p = geom.p
    nu = _nu(p, nu)
    eps, mu, gamma = p.epsilon, p.mu, p.gamma
    surface = geom.with_surface(state.zeta)
    dn = dn_apply(surface, state.psi, backend)
    grad_zeta = grad_gamma(state.zeta, gamma)
    grad_psi = grad_gamma(state.psi, gamma)
    kinetic = grad_psi.norm_squared()
    vertical = dn / mu + eps * grad_zeta.dot(grad_psi)
    vertical_term = (vertical * vertical) / (2.0 * (1.0 + eps * eps * mu * grad_zeta.norm_squared()))
    if dealias_products:
        kinetic = dealias(kinetic)
        vertical_term = dealias(vertical_term)
    d_zeta = dn / (mu * nu)
    d_psi = -state.zeta - (eps / (2.0 * nu)) * kinetic + (eps * mu / nu) * vertical_term
    return d_zeta, d_psi


def integrate(
    state0: SurfaceState,
    cfg: IntegratorConfig,
    geom: StripGeometry,
    reverse: bool = False,
    taylor: Optional[TaylorReport] = None,
) -> list[SurfaceState]:
    """RK4 trajectory from state0 over cfg.t_end (backwards in time when `reverse`)."""
    if taylor is None:
        logger.warning("integrating without a prior Taylor sign check")
    elif not taylor.passes:
        logger.warning(
            "Taylor sign check failed (depth_margin=%.4g, hessian_margin=%.4g)",
            taylor.depth_margin, taylor.hessian_margin,
        )
    grid = state0.zeta.grid
    p = geom.p
    nu = effective_nu(p, cfg.depth_scaling)

    last_accepted = state0.time

    def rhs(t: float, y):
        try:
            d_zeta, d_psi = ww_rhs(
                SurfaceState(ScalarField(grid, y[0]), ScalarField(grid, y[1]), t),
                geom, cfg.dn_backend, cfg.dealias, nu,
            )
        except DegenerateGeometryError as e:
            # an RK stage left the admissible set; report the last accepted step
            raise DegenerateGeometryError(
                f"depth {e.min_depth:.6g} fell below h0={e.h0:g} in a stage after t={last_accepted:.6g}",
                min_depth=e.min_depth, h0=e.h0, time=last_accepted,
            ) from e
        return (d_zeta.values, d_psi.values)

    def accept(t_prev: float, t_new: float, y) -> None:
        nonlocal last_accepted
        min_depth = float(np.min(1.0 + p.epsilon * y[0] - p.beta * geom.b.values))
        if min_depth < geom.h0:
            raise DegenerateGeometryError(
                f"depth {min_depth:.6g} fell below h0={geom.h0:g} after t={t_prev:.6g}",
                min_depth=min_depth, h0=geom.h0, time=t_prev,
            )
        last_accepted = t_new

    post_step = None
    if cfg.filter:
        def post_step(y):
            return tuple(exponential_filter(ScalarField(grid, c), cfg.filter_order).values for c in y)

    t0 = state0.time
    t_end = t0 - cfg.t_end if reverse else t0 + cfg.t_end
    snapshots = integrate_rk4(
        rhs,
        (state0.zeta.values, state0.psi.values),
        t0,
        t_end,
        cfg.dt,
        snapshot_stride=cfg.snapshot_stride,
        accept=accept,
        post_step=post_step,
    )
    return [
        SurfaceState(ScalarField(grid, s.state[0]), ScalarField(grid, s.state[1]), s.time)
        for s in snapshots
    ]


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------


def mass(state: SurfaceState) -> float:
    return integral(state.zeta)


def hamiltonian(
    state: SurfaceState, geom: StripGeometry, dn_backend: DnBackend, nu: Optional[float] = None
) -> float:
    """1/2 <zeta, zeta> + 1/2 <psi, (mu nu)^-1 G[eps zeta, beta b] psi>."""
    p = geom.p
    nu = _nu(p, nu)
    dn = dn_apply(geom.with_surface(state.zeta), state.psi, dn_backend)
    return 0.5 * inner(state.zeta, state.zeta) + 0.5 * inner(state.psi, dn) / (p.mu * nu)


def diagnostic_energy(
    state: SurfaceState,
    geom: StripGeometry,
    dn_backend: DnBackend,
    s: float,
    nu: Optional[float] = None,
) -> float:
    """|Lambda^s zeta|^2 + (eps/nu)^2 |psi|_{H^s}^2 + <Lambda^s psi, (mu nu)^-1 G Lambda^s psi>."""
    p = geom.p
    nu = _nu(p, nu)
    psi = project_zero_mean(state.psi)
    lifted = lambda_s(psi, s)
    dn = dn_apply(geom.with_surface(state.zeta), lifted, dn_backend)
    return (
        sobolev_norm(state.zeta, s) ** 2
        + (p.epsilon / nu) ** 2 * sobolev_norm(psi, s) ** 2
        + inner(lifted, dn) / (p.mu * nu)
    )


def min_depth(state: SurfaceState, geom: StripGeometry) -> float:
    return float(np.min(1.0 + geom.p.epsilon * state.zeta.values - geom.p.beta * geom.b.values))


def linear_frequency(grid: PeriodicGrid, p: RegimeParams, nu: Optional[float] = None) -> np.ndarray:
    """omega(xi) of the linearization about rest: omega^2 = G0-symbol / (mu nu)."""
    nu = _nu(p, nu)
    return np.sqrt(g0_symbol(grid, p.mu, p.gamma) / (p.mu * nu))


def suggest_dt(
    grid: PeriodicGrid,
    p: RegimeParams,
    scaling: Union[DepthScaling, str] = DepthScaling.GENERAL,
    cfl: float = 0.5,
) -> float:
    """cfl * min(dx, dy) / c_max with c_max the fastest linear phase speed on the grid."""
    omega = linear_frequency(grid, p, effective_nu(p, scaling))
    xi = grid.abs_xi(1.0)
    speeds = np.where(xi > 0, omega / np.where(xi > 0, xi, 1.0), 0.0)
    c_max = float(np.max(speeds))
    return cfl * min(grid.dx, grid.dy) / c_max
