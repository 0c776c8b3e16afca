"""Full-dispersion (Matsuno) model for deep water, flat bottom.

With eps~ = eps sqrt(mu) the steepness and T_mu V = -tanh(sqrt(mu)|D|)/|D| div V:

    d_t zeta = T_mu V - eps~ (T_mu(zeta grad T_mu V) + div(zeta V))
    d_t V    = -grad zeta - eps~ (1/2 grad|V|^2 - (T_mu grad zeta) grad zeta)
"""

from __future__ import annotations

import numpy as np

from wavecascade.asymptotics.common import HyperbolicState, maybe_dealias, run_hyperbolic
from wavecascade.errors import UnsupportedRegimeError
from wavecascade.params import RegimeParams
from wavecascade.spectral import PeriodicGrid, ScalarField, VectorField, div, grad, t_mu


def _require_deep(p: RegimeParams) -> None:
    problems = []
    if p.beta != 0.0:
        problems.append(f"flat bottom (beta=0), got beta={p.beta!r}")
    if p.gamma != 1.0:
        problems.append(f"gamma=1, got {p.gamma!r}")
    if p.mu < 1.0:
        problems.append(f"mu >= 1, got {p.mu!r}")
    if problems:
        raise UnsupportedRegimeError("full-dispersion model requires " + "; ".join(problems))


def fd_rhs(
    state: HyperbolicState, p: RegimeParams, dealias_products: bool = True
) -> tuple[ScalarField, VectorField]:
    steep = p.steepness
    mu = p.mu
    zeta, v = state.zeta, state.v

    def d(u: ScalarField) -> ScalarField:
        return maybe_dealias(u, dealias_products)

    tv = t_mu(v, mu)
    grad_tv = grad(tv)
    flux = v * zeta
    d_zeta = tv - (
        t_mu(VectorField(d(zeta * grad_tv.x), d(zeta * grad_tv.y)), mu)
        + div(VectorField(d(flux.x), d(flux.y)))
    ) * steep
    grad_zeta = grad(zeta)
    t_grad_zeta = t_mu(grad_zeta, mu)
    d_v = -(grad_zeta + (
        grad(d(v.norm_squared())) * 0.5
        - VectorField(d(t_grad_zeta * grad_zeta.x), d(t_grad_zeta * grad_zeta.y))
    ) * steep)
    return d_zeta, d_v


def fd_integrate(
    state0: HyperbolicState,
    p: RegimeParams,
    t_end: float,
    dt: float,
    dealias_products: bool = True,
    snapshot_stride: int = 1,
) -> list[HyperbolicState]:
    _require_deep(p)
    return run_hyperbolic(
        state0, lambda s: fd_rhs(s, p, dealias_products), t_end, dt, snapshot_stride=snapshot_stride
    )


def fd_initial(zeta0: ScalarField, psi0: ScalarField, p: RegimeParams) -> HyperbolicState:
    """(zeta0, grad psi0 - eps~ (T_mu grad psi0) grad zeta0)"""
    _require_deep(p)
    grad_psi = grad(psi0)
    v0 = grad_psi - grad(zeta0) * (p.steepness * t_mu(grad_psi, p.mu))
    return HyperbolicState(zeta0, v0, 0.0)


def fd_reconstruct(state: HyperbolicState, p: RegimeParams) -> VectorField:
    """Approximation of grad psi: V + eps~ (T_mu V) grad zeta."""
    return state.v + grad(state.zeta) * (p.steepness * t_mu(state.v, p.mu))


def fd_frequency(grid: PeriodicGrid, mu: float) -> np.ndarray:
    """omega with omega^2 = |k| tanh(sqrt(mu) |k|)"""
    k = grid.abs_xi(1.0)
    return np.sqrt(k * np.tanh(np.sqrt(mu) * k))
