"""Nonlinear shallow-water equations.

    d_t V + grad zeta + (eps/2) grad |V|^2 = 0
    d_t zeta + div((1 + eps zeta - beta b) V) = 0

eps = beta = 1 gives the classical form used in the shallow-water regime.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from wavecascade.asymptotics.common import HyperbolicState, maybe_dealias, run_hyperbolic
from wavecascade.errors import DegenerateGeometryError
from wavecascade.params import RegimeParams
from wavecascade.spectral import PeriodicGrid, ScalarField, VectorField, div, grad


def _amplitudes(p: Optional[RegimeParams]) -> tuple[float, float]:
    if p is None:
        return 1.0, 1.0
    return p.epsilon, p.beta


def sw_depth(zeta: ScalarField, b: ScalarField, p: Optional[RegimeParams] = None) -> ScalarField:
    eps, beta = _amplitudes(p)
    return 1.0 + eps * zeta - beta * b


def sw_rhs(
    state: HyperbolicState,
    b: ScalarField,
    p: Optional[RegimeParams] = None,
    dealias_products: bool = True,
) -> tuple[ScalarField, VectorField]:
    eps, _ = _amplitudes(p)
    h = sw_depth(state.zeta, b, p)
    flux = state.v * h
    flux = VectorField(maybe_dealias(flux.x, dealias_products), maybe_dealias(flux.y, dealias_products))
    kinetic = maybe_dealias(state.v.norm_squared(), dealias_products)
    d_zeta = -div(flux)
    d_v = -(grad(state.zeta) + grad(kinetic) * (0.5 * eps))
    return d_zeta, d_v


def sw_initial(psi0: ScalarField) -> VectorField:
    return grad(psi0)


def sw_integrate(
    state0: HyperbolicState,
    b: ScalarField,
    t_end: float,
    dt: float,
    p: Optional[RegimeParams] = None,
    dealias_products: bool = True,
    snapshot_stride: int = 1,
) -> list[HyperbolicState]:
    h_initial = sw_depth(state0.zeta, b, p)
    if h_initial.min() <= 0.0:
        raise DegenerateGeometryError(
            "shallow-water data need 1 + zeta - b > 0",
            min_depth=h_initial.min(), h0=0.0, time=state0.time,
        )
    eps, beta = _amplitudes(p)
    return run_hyperbolic(
        state0,
        lambda s: sw_rhs(s, b, p, dealias_products),
        t_end,
        dt,
        snapshot_stride=snapshot_stride,
        depth=lambda zeta: 1.0 + eps * zeta - beta * b.values,
    )


def sw_frequency(grid: PeriodicGrid) -> np.ndarray:
    """omega = |k| of the linearization about rest."""
    return grid.abs_xi(1.0)


def sw_advective_speed(state: HyperbolicState, b: ScalarField, p: Optional[RegimeParams] = None) -> float:
    eps, _ = _amplitudes(p)
    h_max = sw_depth(state.zeta, b, p).max_abs()
    return eps * math.sqrt(state.v.norm_squared().max_abs()) + max(0.0, math.sqrt(h_max) - 1.0)
