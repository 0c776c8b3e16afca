"""Counter-propagating KP pair for weakly transverse long waves.

    d_tau zeta_pm +- 1/2 d_X^-1 d_Y^2 zeta_pm +- 1/6 d_X^3 zeta_pm +- 3/2 zeta_pm d_X zeta_pm = 0

Each field lives on the water-waves grid with X the x coordinate and Y the y
coordinate; the transverse scaling is carried by gamma = sqrt(eps) in the
water-waves gradient, so no extra stretching of y is applied. The linear
part is integrated exactly (integrating factor) and the quadratic term by
RK4 in the interaction picture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from wavecascade.asymptotics.common import check_time_args
from wavecascade.errors import InvalidInputError
from wavecascade.params import RegimeParams
from wavecascade.spectral import PeriodicGrid, ScalarField, forward, grad, inverse, shift_x
from wavecascade.timestepping import ArrayState, integrate_rk4

ZERO_MASS_TOL = 1e-10


def zero_mass_mask(grid: PeriodicGrid) -> np.ndarray:
    """1 except on the kx = 0 row, where d_X^-1 is undefined."""
    mask = np.ones(grid.spectral_shape)
    mask[0, :] = 0.0
    return mask


def project_zero_mass(u: ScalarField) -> ScalarField:
    """Remove the x-mean of every y-line."""
    return ScalarField(u.grid, u.values - np.mean(u.values, axis=0, keepdims=True))


def _line_mean_defect(u: ScalarField) -> float:
    scale = max(1.0, u.max_abs())
    return float(np.max(np.abs(np.mean(u.values, axis=0)))) / scale


@dataclass(frozen=True)
class KpPairState:
    zeta_plus: ScalarField
    zeta_minus: ScalarField
    tau: float = 0.0

    def __post_init__(self) -> None:
        for name in ("zeta_plus", "zeta_minus"):
            defect = _line_mean_defect(getattr(self, name))
            if defect > ZERO_MASS_TOL:
                raise InvalidInputError(
                    f"{name} violates the zero-mass condition (x-mean {defect:.3e} on some y-line)"
                )

    @property
    def grid(self) -> PeriodicGrid:
        return self.zeta_plus.grid


def kp_initial(zeta0: ScalarField, psi0: ScalarField) -> KpPairState:
    """zeta_pm = (zeta0 +- d_x psi0) / 2, projected onto zero x-mean."""
    dx_psi = grad(psi0).x
    return KpPairState(
        project_zero_mass((zeta0 + dx_psi) * 0.5),
        project_zero_mass((zeta0 - dx_psi) * 0.5),
        0.0,
    )


def kp_linear_symbol(grid: PeriodicGrid) -> np.ndarray:
    """Symbol of the '+' linear operator: i (kx^3/6 - ky^2 / (2 kx)), 0 on the kx = 0 row."""
    kx = grid.kx_d
    ky2 = grid.ky ** 2
    safe = np.where(kx != 0.0, kx, 1.0)
    symbol = 1j * (kx ** 3 / 6.0 - np.where(kx != 0.0, ky2 / (2.0 * safe), 0.0))
    return symbol * zero_mass_mask(grid)


class _KpStepper:
    """Integrating-factor RK4 for both members of the pair in Fourier space."""

    def __init__(self, grid: PeriodicGrid, dealias_products: bool) -> None:
        self.grid = grid
        self._symbol = kp_linear_symbol(grid)
        self._mask = zero_mass_mask(grid)
        if dealias_products:
            self._mask = self._mask * grid.dealias_mask
        self._cached_dt: float = math.nan
        self._factors: tuple[np.ndarray, ...] = ()

    def _exponentials(self, dt: float) -> tuple[np.ndarray, ...]:
        if dt != self._cached_dt:
            full = np.exp(self._symbol * dt)
            half = np.exp(self._symbol * 0.5 * dt)
            # '-' member: conjugate propagator
            self._factors = (full, half, np.conj(full), np.conj(half))
            self._cached_dt = dt
        return self._factors

    def _nonlinear(self, hat: np.ndarray, sign: float) -> np.ndarray:
        u = inverse(hat, self.grid)
        return -sign * 0.75 * 1j * self.grid.kx_d * forward(u * u) * self._mask

    def _advance(self, hat: np.ndarray, sign: float, dt: float, full: np.ndarray, half: np.ndarray) -> np.ndarray:
        a = self._nonlinear(hat, sign)
        b = self._nonlinear(half * (hat + 0.5 * dt * a), sign)
        c = self._nonlinear(half * hat + 0.5 * dt * b, sign)
        d = self._nonlinear(full * hat + dt * half * c, sign)
        return full * hat + (dt / 6.0) * (full * a + 2.0 * half * (b + c) + d)

    def __call__(self, t: float, y: ArrayState, dt: float) -> ArrayState:
        full_p, half_p, full_m, half_m = self._exponentials(dt)
        zero_row = zero_mass_mask(self.grid)
        plus = self._advance(forward(y[0]), 1.0, dt, full_p, half_p) * zero_row
        minus = self._advance(forward(y[1]), -1.0, dt, full_m, half_m) * zero_row
        return (inverse(plus, self.grid), inverse(minus, self.grid))


def kp_integrate(
    pair0: KpPairState,
    t_end_tau: float,
    dt: float,
    dealias_products: bool = True,
    snapshot_stride: int = 1,
) -> list[KpPairState]:
    check_time_args(t_end_tau, dt)
    grid = pair0.grid
    stepper = _KpStepper(grid, dealias_products)
    snapshots = integrate_rk4(
        lambda t, y: y,
        (pair0.zeta_plus.values, pair0.zeta_minus.values),
        pair0.tau,
        pair0.tau + t_end_tau,
        dt,
        snapshot_stride=snapshot_stride,
        stepper=stepper,
    )
    return [
        KpPairState(
            project_zero_mass(ScalarField(grid, s.state[0])),
            project_zero_mass(ScalarField(grid, s.state[1])),
            s.time,
        )
        for s in snapshots
    ]


def _check_time(pair: KpPairState, p: RegimeParams, t: float) -> None:
    expected = p.epsilon * t
    if abs(pair.tau - expected) > 1e-9 * max(1.0, abs(expected)):
        raise InvalidInputError(f"KP pair is at tau={pair.tau!r}, expected eps*t={expected!r}")


def kp_reconstruct(pair: KpPairState, p: RegimeParams, t: float) -> ScalarField:
    """zeta_KP(t, x, y) = zeta_+(eps t, y, x - t) + zeta_-(eps t, y, x + t).

    The halves of the data are carried by zeta_pm themselves (see kp_initial),
    so the sum reproduces zeta0 at t = 0.
    """
    _check_time(pair, p, t)
    return shift_x(pair.zeta_plus, t) + shift_x(pair.zeta_minus, -t)


def kp_velocity(pair: KpPairState, p: RegimeParams, t: float) -> ScalarField:
    """Approximation of d_x psi: zeta_+(x - t) - zeta_-(x + t)."""
    _check_time(pair, p, t)
    return shift_x(pair.zeta_plus, t) - shift_x(pair.zeta_minus, -t)


def kdv_soliton(grid: PeriodicGrid, amplitude: float, center: float, tau: float = 0.0) -> ScalarField:
    """Zero-mean solitary wave of d_tau u + 1/6 u_XXX + 3/2 u u_X = 0 on the periodic grid.

    The profile A sech^2(kappa (X - c tau)), c = A/2, kappa = sqrt(3A)/2, minus
    its grid mean m; removing the mean slows the wave by 3m/2.
    """
    if amplitude <= 0:
        raise InvalidInputError(f"soliton amplitude must be positive, got {amplitude!r}")
    kappa = 0.5 * math.sqrt(3.0 * amplitude)

    def profile(shift: float) -> np.ndarray:
        offset = np.mod(grid.x - center - shift + 0.5 * grid.lx, grid.lx) - 0.5 * grid.lx
        return amplitude / np.cosh(kappa * offset) ** 2

    m = float(np.mean(profile(0.0)))
    speed = 0.5 * amplitude - 1.5 * m
    return ScalarField(grid, profile(speed * tau) - m)


def kp_suggest_dt(pair: KpPairState, cfl: float = 0.5) -> float:
    """Advective limit of the quadratic term; the linear part is exact."""
    peak = max(pair.zeta_plus.max_abs(), pair.zeta_minus.max_abs(), 1e-12)
    return cfl * pair.grid.dx / (1.5 * peak)
