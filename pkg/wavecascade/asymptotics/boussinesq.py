"""Symmetric Boussinesq systems of the long-wave regime (mu = eps, gamma = 1).

    (1 - eps a2 Lap) d_t V + grad zeta + eps (1/4 grad|V|^2 + 1/2 (V.grad)V + 1/2 V div V
                                              + 1/4 grad zeta^2 - 1/2 b grad zeta + a1 Lap grad zeta) = 0
    (1 - eps a4 Lap) d_t zeta + div V + eps/2 div((zeta - b) V) + eps a3 Lap div V = 0

The a3 term carries eps, so that the linear dispersion reproduces
omega^2 = k^2 (1 - eps k^2 / 3) through a1 + a2 + a3 + a4 = 1/3.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from wavecascade.asymptotics.common import HyperbolicState, maybe_dealias, run_hyperbolic
from wavecascade.errors import InvalidInputError
from wavecascade.spectral import (
    PeriodicGrid,
    ScalarField,
    VectorField,
    apply_multiplier,
    div,
    grad,
    laplacian,
)

logger = logging.getLogger("wavecascade.boussinesq")


def boussinesq_coefficients(theta: float, p1: float, p2: float) -> tuple[float, float, float, float]:
    low = theta ** 2 / 2.0 - 1.0 / 6.0
    high = (1.0 - theta ** 2) / 2.0
    return (low * p1, low * (1.0 - p1), high * p2, high * (1.0 - p2))


@dataclass(frozen=True)
class BoussinesqCoeffs:
    theta: float = 1.0
    p1: float = 0.0
    p2: float = 0.0
    a1: float = field(init=False)
    a2: float = field(init=False)
    a3: float = field(init=False)
    a4: float = field(init=False)

    def __post_init__(self) -> None:
        if not (0.0 <= self.theta <= 1.0):
            raise InvalidInputError(f"theta must lie in [0, 1], got {self.theta!r}")
        for name in ("p1", "p2"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"{name} must be finite")
        a1, a2, a3, a4 = boussinesq_coefficients(self.theta, self.p1, self.p2)
        if a2 < 0.0 or a4 < 0.0:
            raise InvalidInputError(
                f"Boussinesq system needs a2 >= 0 and a4 >= 0, got a2={a2:.6g}, a4={a4:.6g}"
            )
        for name, value in zip(("a1", "a2", "a3", "a4"), (a1, a2, a3, a4)):
            object.__setattr__(self, name, value)

    @property
    def is_symmetric(self) -> bool:
        return math.isclose(self.a1, self.a3, abs_tol=1e-15)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a1, self.a2, self.a3, self.a4)


def _smoothing_symbol(grid: PeriodicGrid, coefficient: float) -> np.ndarray:
    """Symbol of (1 - coefficient Lap)^-1."""
    return 1.0 / (1.0 + coefficient * grid.abs_xi(1.0) ** 2)


def boussinesq_rhs(
    state: HyperbolicState,
    b: ScalarField,
    coeffs: BoussinesqCoeffs,
    eps: float,
    dealias_products: bool = True,
) -> tuple[ScalarField, VectorField]:
    zeta, v = state.zeta, state.v
    grid = state.grid

    def d(u: ScalarField) -> ScalarField:
        return maybe_dealias(u, dealias_products)

    div_v = div(v)
    grad_zeta = grad(zeta)
    nonlinear = (
        grad(d(v.norm_squared())) * 0.25
        + VectorField(d(v.dot(grad(v.x))), d(v.dot(grad(v.y)))) * 0.5
        + VectorField(d(v.x * div_v), d(v.y * div_v)) * 0.5
        + grad(d(zeta * zeta)) * 0.25
        - VectorField(d(b * grad_zeta.x), d(b * grad_zeta.y)) * 0.5
        + grad(laplacian(zeta)) * coeffs.a1
    )
    forcing_v = grad_zeta + nonlinear * eps
    depth_flux = v * (zeta - b)
    forcing_zeta = (
        div_v
        + div(VectorField(d(depth_flux.x), d(depth_flux.y))) * (0.5 * eps)
        + laplacian(div_v) * (eps * coeffs.a3)
    )
    smooth_v = _smoothing_symbol(grid, eps * coeffs.a2)
    smooth_zeta = _smoothing_symbol(grid, eps * coeffs.a4)
    d_v = -forcing_v.map(lambda c: apply_multiplier(c, smooth_v))
    d_zeta = -apply_multiplier(forcing_zeta, smooth_zeta)
    return d_zeta, d_v


def boussinesq_integrate(
    state0: HyperbolicState,
    b: ScalarField,
    coeffs: BoussinesqCoeffs,
    eps: float,
    t_end: float,
    dt: float,
    dealias_products: bool = True,
    snapshot_stride: int = 1,
) -> list[HyperbolicState]:
    if coeffs.a2 == 0.0 or coeffs.a4 == 0.0:
        logger.warning(
            "Boussinesq system with a2=%.4g, a4=%.4g has no smoothing on one equation; "
            "the time step must resolve third-order dispersion",
            coeffs.a2, coeffs.a4,
        )
    growth = boussinesq_growth_rate(state0.grid, eps, coeffs)
    if growth > 0.0:
        logger.warning(
            "Boussinesq system is linearly unstable on this grid (growth rate %.3g over t_end=%.3g)",
            growth, t_end,
        )
    return run_hyperbolic(
        state0,
        lambda s: boussinesq_rhs(s, b, coeffs, eps, dealias_products),
        t_end,
        dt,
        snapshot_stride=snapshot_stride,
        depth=lambda zeta: 1.0 + eps * (zeta - b.values),
    )


def _velocity_multiplier(grid: PeriodicGrid, eps: float, theta: float) -> np.ndarray:
    """Symbol of 1 - (eps/2)(1 - theta^2) Lap."""
    if not (0.0 <= theta <= 1.0):
        raise InvalidInputError(f"theta must lie in [0, 1], got {theta!r}")
    return 1.0 + 0.5 * eps * (1.0 - theta ** 2) * grid.abs_xi(1.0) ** 2


def boussinesq_initial(
    zeta0: ScalarField, psi0: ScalarField, b: ScalarField, eps: float, theta: float
) -> HyperbolicState:
    grid = zeta0.grid
    symbol = _velocity_multiplier(grid, eps, theta)
    smoothed = grad(psi0).map(lambda c: apply_multiplier(c, 1.0 / symbol))
    return HyperbolicState(zeta0, smoothed * (1.0 + 0.5 * eps * (zeta0 - b)), 0.0)


def boussinesq_reconstruct(
    state: HyperbolicState, b: ScalarField, eps: float, theta: float
) -> tuple[ScalarField, VectorField]:
    """(zeta_app, V_app) with V_app = (1 - (eps/2)(1-theta^2) Lap)[(1 - (eps/2)(zeta - b)) V]."""
    symbol = _velocity_multiplier(state.grid, eps, theta)
    damped = state.v * (1.0 - 0.5 * eps * (state.zeta - b))
    return state.zeta, damped.map(lambda c: apply_multiplier(c, symbol))


def boussinesq_frequency(grid: PeriodicGrid, eps: float, coeffs: BoussinesqCoeffs) -> np.ndarray:
    k2 = grid.abs_xi(1.0) ** 2
    numerator = k2 * (1.0 - eps * coeffs.a1 * k2) * (1.0 - eps * coeffs.a3 * k2)
    denominator = (1.0 + eps * coeffs.a2 * k2) * (1.0 + eps * coeffs.a4 * k2)
    return np.sqrt(np.abs(numerator) / denominator)


def boussinesq_growth_rate(grid: PeriodicGrid, eps: float, coeffs: BoussinesqCoeffs) -> float:
    """Largest linear growth rate on the grid; 0 when every mode oscillates."""
    k2 = grid.abs_xi(1.0) ** 2
    numerator = k2 * (1.0 - eps * coeffs.a1 * k2) * (1.0 - eps * coeffs.a3 * k2)
    denominator = (1.0 + eps * coeffs.a2 * k2) * (1.0 + eps * coeffs.a4 * k2)
    unstable = np.minimum(numerator, 0.0) / denominator
    return float(np.sqrt(-np.min(unstable)))
