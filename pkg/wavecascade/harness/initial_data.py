"""Initial surface, potential and bottom from an InitialDataSpec."""

from __future__ import annotations

import logging
import math
from typing import Iterable, Sequence

import numpy as np
import scipy.fft

from wavecascade.errors import DegenerateGeometryError
from wavecascade.params import RegimeParams
from wavecascade.schema import InitialDataSpec
from wavecascade.spectral import PeriodicGrid, ScalarField, forward, inverse, project_zero_mean

logger = logging.getLogger("wavecascade.initial_data")

NOISE_MAX_INDEX = 4
UNDERRESOLVED_FRACTION = 1e-12


def _periodic_offset(coord: np.ndarray, center: float, period: float) -> np.ndarray:
    """Minimum-image distance on a circle of length `period`."""
    return np.mod(coord - center + 0.5 * period, period) - 0.5 * period


def gaussian_bumps(grid: PeriodicGrid, bumps: Iterable[Sequence[float]]) -> ScalarField:
    values = np.zeros(grid.shape)
    for amplitude, x0, y0, width in bumps:
        dx = _periodic_offset(grid.x, x0, grid.lx)
        dy = _periodic_offset(grid.y, y0, grid.ly)
        values += amplitude * np.exp(-(dx ** 2 + dy ** 2) / width ** 2)
    return ScalarField(grid, values)


def cosine_modes(grid: PeriodicGrid, modes: Iterable[Sequence[float]]) -> ScalarField:
    values = np.zeros(grid.shape)
    for amplitude, kx, ky in modes:
        phase = 2.0 * math.pi * (int(kx) * grid.x / grid.lx + int(ky) * grid.y / grid.ly)
        values += amplitude * np.cos(phase)
    return ScalarField(grid, values)


def smooth_noise(grid: PeriodicGrid, amplitude: float, seed: int) -> ScalarField:
    """Seeded random field on the lowest Fourier modes, scaled to max |.| = amplitude."""
    if amplitude == 0.0:
        return grid.zeros()
    rng = np.random.default_rng(seed)
    hat = rng.standard_normal(grid.spectral_shape) + 1j * rng.standard_normal(grid.spectral_shape)
    ix = np.abs(scipy.fft.fftfreq(grid.nx, 1.0 / grid.nx))[:, None]
    iy = np.arange(grid.ny // 2 + 1)[None, :]
    hat = hat * ((ix <= NOISE_MAX_INDEX) & (iy <= NOISE_MAX_INDEX))
    hat[0, 0] = 0.0
    values = inverse(hat, grid)
    peak = float(np.max(np.abs(values)))
    if peak == 0.0:
        return grid.zeros()
    return ScalarField(grid, values * (amplitude / peak))


def make_bottom(spec: InitialDataSpec, grid: PeriodicGrid) -> ScalarField:
    return gaussian_bumps(grid, spec.bottom_bumps) + cosine_modes(grid, spec.bottom_modes)


def make_initial_data(
    spec: InitialDataSpec,
    grid: PeriodicGrid,
    p: RegimeParams,
    h0: float = 0.1,
    seed: int = 0,
) -> tuple[ScalarField, ScalarField]:
    """(zeta0, psi0) with psi0 of zero mean; rejects data whose depth falls below h0."""
    zeta0 = gaussian_bumps(grid, spec.zeta_bumps) + cosine_modes(grid, spec.zeta_modes)
    psi0 = gaussian_bumps(grid, spec.psi_bumps) + cosine_modes(grid, spec.psi_modes)
    psi0 = project_zero_mean(psi0 + smooth_noise(grid, spec.noise, seed))
    b = make_bottom(spec, grid)
    depth = 1.0 + p.epsilon * zeta0 - p.beta * b
    min_depth = depth.min()
    if min_depth < h0:
        raise DegenerateGeometryError(
            f"initial depth {min_depth:.6g} below h0={h0:g}", min_depth=min_depth, h0=h0, time=0.0
        )
    for name, field in (("zeta0", zeta0), ("psi0", psi0), ("bottom", b)):
        if spectral_smoothness(field) > UNDERRESOLVED_FRACTION:
            logger.warning("%s carries energy beyond the dealiasing band; refine the grid", name)
    logger.debug("initial data: max|zeta|=%.4g max|psi|=%.4g min depth=%.4g", zeta0.max_abs(), psi0.max_abs(), min_depth)
    return zeta0, psi0


def spectral_smoothness(u: ScalarField) -> float:
    """Fraction of the spectral energy outside the 2/3 band; small for resolved data."""
    hat = np.abs(forward(u.values)) ** 2
    total = float(np.sum(hat))
    if total == 0.0:
        return 0.0
    return float(np.sum(hat * (1.0 - u.grid.dealias_mask))) / total
