"""Periodic grids, nodal fields and FFT-backed Fourier multipliers.

All transforms are real-to-complex over the last two axes (x then y), so a
batch of fields stacked along leading axes is transformed in one call.
Derivative symbols have their Nyquist entry zeroed; even symbols (|xi|,
Laplacian, Lambda^s) keep it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Union

import numpy as np
import scipy.fft

from wavecascade.errors import InvalidInputError
from wavecascade.params import RegimeParams

Number = Union[int, float]


def forward(values: np.ndarray) -> np.ndarray:
    return scipy.fft.rfft2(values, axes=(-2, -1))


def inverse(hat: np.ndarray, grid: "PeriodicGrid") -> np.ndarray:
    return scipy.fft.irfft2(hat, s=(grid.nx, grid.ny), axes=(-2, -1))


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class PeriodicGrid:
    nx: int
    ny: int
    lx: float = 2.0 * math.pi
    ly: float = 2.0 * math.pi

    def __post_init__(self) -> None:
        for name in ("nx", "ny"):
            n = getattr(self, name)
            if not isinstance(n, (int, np.integer)) or n < 8 or not _is_power_of_two(int(n)):
                raise InvalidInputError(f"{name} must be a power of two >= 8, got {n!r}")
        for name in ("lx", "ly"):
            length = getattr(self, name)
            if not math.isfinite(length) or length <= 0:
                raise InvalidInputError(f"{name} must be a positive period, got {length!r}")

    @property
    def dx(self) -> float:
        return self.lx / self.nx

    @property
    def dy(self) -> float:
        return self.ly / self.ny

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    @property
    def spectral_shape(self) -> tuple[int, int]:
        return (self.nx, self.ny // 2 + 1)

    @cached_property
    def x(self) -> np.ndarray:
        return (np.arange(self.nx) * self.dx)[:, None] * np.ones((1, self.ny))

    @cached_property
    def y(self) -> np.ndarray:
        return np.ones((self.nx, 1)) * (np.arange(self.ny) * self.dy)[None, :]

    @cached_property
    def kx(self) -> np.ndarray:
        return (2.0 * math.pi / self.lx) * scipy.fft.fftfreq(self.nx, 1.0 / self.nx)[:, None]

    @cached_property
    def ky(self) -> np.ndarray:
        return (2.0 * math.pi / self.ly) * scipy.fft.rfftfreq(self.ny, 1.0 / self.ny)[None, :]

    @cached_property
    def kx_d(self) -> np.ndarray:
        k = self.kx.copy()
        k[self.nx // 2, 0] = 0.0
        return k

    @cached_property
    def ky_d(self) -> np.ndarray:
        k = self.ky.copy()
        k[0, self.ny // 2] = 0.0
        return k

    @property
    def kx_max(self) -> float:
        return math.pi * self.nx / self.lx

    @property
    def ky_max(self) -> float:
        return math.pi * self.ny / self.ly

    def abs_xi(self, gamma: float = 1.0) -> np.ndarray:
        """|xi^gamma| on the rfft layout."""
        return np.sqrt(self.kx ** 2 + gamma ** 2 * self.ky ** 2)

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        keep_x = np.abs(self.kx) <= (2.0 / 3.0) * self.kx_max
        keep_y = np.abs(self.ky) <= (2.0 / 3.0) * self.ky_max
        return (keep_x & keep_y).astype(float)

    def zeros(self) -> "ScalarField":
        return ScalarField(self, np.zeros(self.shape))

    def field(self, fn: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> "ScalarField":
        """Sample fn(x, y) on the nodes."""
        return ScalarField(self, np.broadcast_to(fn(self.x, self.y), self.shape).astype(float))


def _coerce(other: Union["ScalarField", Number]):
    return other.values if isinstance(other, ScalarField) else other


class ScalarField:
    """Real nodal values on a PeriodicGrid, indexed [ix, iy]."""

    __slots__ = ("grid", "values")
    __array_ufunc__ = None

    def __init__(self, grid: PeriodicGrid, values: np.ndarray) -> None:
        values = np.asarray(values, dtype=float)
        if values.shape != grid.shape:
            raise InvalidInputError(f"field shape {values.shape} does not match grid {grid.shape}")
        self.grid = grid
        self.values = values

    def __repr__(self) -> str:
        return f"ScalarField(nx={self.grid.nx}, ny={self.grid.ny}, max={self.max_abs():.3g})"

    def __add__(self, other):
        if isinstance(other, VectorField):
            return NotImplemented
        return ScalarField(self.grid, self.values + _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ScalarField(self.grid, self.values - _coerce(other))

    def __rsub__(self, other):
        return ScalarField(self.grid, _coerce(other) - self.values)

    def __mul__(self, other):
        if isinstance(other, VectorField):
            return other * self
        return ScalarField(self.grid, self.values * _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return ScalarField(self.grid, self.values / _coerce(other))

    def __rtruediv__(self, other):
        return ScalarField(self.grid, _coerce(other) / self.values)

    def __neg__(self):
        return ScalarField(self.grid, -self.values)

    def __pow__(self, exponent: Number):
        return ScalarField(self.grid, self.values ** exponent)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def min(self) -> float:
        return float(np.min(self.values))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def copy(self) -> "ScalarField":
        return ScalarField(self.grid, self.values.copy())


class VectorField:
    """Two ScalarField components on a shared grid."""

    __slots__ = ("x", "y")
    __array_ufunc__ = None

    def __init__(self, x: ScalarField, y: ScalarField) -> None:
        if x.grid != y.grid:
            raise InvalidInputError("vector components must share a grid")
        self.x = x
        self.y = y

    @property
    def grid(self) -> PeriodicGrid:
        return self.x.grid

    @classmethod
    def zeros(cls, grid: PeriodicGrid) -> "VectorField":
        return cls(grid.zeros(), grid.zeros())

    def __repr__(self) -> str:
        return f"VectorField(nx={self.grid.nx}, ny={self.grid.ny}, max={self.max_abs():.3g})"

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.x - other.x, self.y - other.y)

    def __mul__(self, other: Union[ScalarField, Number]) -> "VectorField":
        return VectorField(self.x * other, self.y * other)

    __rmul__ = __mul__

    def __truediv__(self, other: Union[ScalarField, Number]) -> "VectorField":
        return VectorField(self.x / other, self.y / other)

    def __neg__(self) -> "VectorField":
        return VectorField(-self.x, -self.y)

    def dot(self, other: "VectorField") -> ScalarField:
        return self.x * other.x + self.y * other.y

    def norm_squared(self) -> ScalarField:
        return self.dot(self)

    def max_abs(self) -> float:
        return float(np.max(np.sqrt(self.x.values ** 2 + self.y.values ** 2)))

    def is_finite(self) -> bool:
        return self.x.is_finite() and self.y.is_finite()

    def map(self, op: Callable[[ScalarField], ScalarField]) -> "VectorField":
        return VectorField(op(self.x), op(self.y))


# ---------------------------------------------------------------------------
# Multipliers
# ---------------------------------------------------------------------------


def apply_multiplier(u: ScalarField, symbol: np.ndarray) -> ScalarField:
    return ScalarField(u.grid, inverse(symbol * forward(u.values), u.grid))


def grad_gamma(u: ScalarField, gamma: float = 1.0) -> VectorField:
    grid = u.grid
    hat = forward(u.values)
    return VectorField(
        ScalarField(grid, inverse(1j * grid.kx_d * hat, grid)),
        ScalarField(grid, inverse(1j * gamma * grid.ky_d * hat, grid)),
    )


def div_gamma(v: VectorField, gamma: float = 1.0) -> ScalarField:
    grid = v.grid
    hat = 1j * grid.kx_d * forward(v.x.values) + 1j * gamma * grid.ky_d * forward(v.y.values)
    return ScalarField(grid, inverse(hat, grid))


def grad(u: ScalarField) -> VectorField:
    return grad_gamma(u, 1.0)


def div(v: VectorField) -> ScalarField:
    return div_gamma(v, 1.0)


def laplacian(u: ScalarField, gamma: float = 1.0) -> ScalarField:
    return apply_multiplier(u, -u.grid.abs_xi(gamma) ** 2)


def dgamma_abs(u: ScalarField, mu: float = 1.0, gamma: float = 1.0) -> ScalarField:
    """|D^gamma| u with symbol sqrt(xi_1^2 + gamma^2 xi_2^2).

    Unlike g0 and T_mu, the symbol carries no sqrt(mu) factor; callers in
    shallow-water variables scale by sqrt(mu) themselves. mu is only checked
    for positivity.
    """
    if not mu > 0:
        raise InvalidInputError(f"mu must be positive, got {mu!r}")
    return apply_multiplier(u, u.grid.abs_xi(gamma))


def frak_p_symbol(grid: PeriodicGrid, p: RegimeParams) -> np.ndarray:
    xi = grid.abs_xi(p.gamma)
    return xi / np.sqrt(p.nu * (1.0 + math.sqrt(p.mu) * xi))


def frak_p(u: ScalarField, p: RegimeParams) -> ScalarField:
    return apply_multiplier(u, frak_p_symbol(u.grid, p))


def g0_symbol(grid: PeriodicGrid, mu: float, gamma: float = 1.0) -> np.ndarray:
    """Flat-strip Dirichlet-Neumann symbol sqrt(mu)|xi^gamma| tanh(sqrt(mu)|xi^gamma|)."""
    s = math.sqrt(mu) * grid.abs_xi(gamma)
    return s * np.tanh(s)


def g0(psi: ScalarField, p: RegimeParams) -> ScalarField:
    return apply_multiplier(psi, g0_symbol(psi.grid, p.mu, p.gamma))


def t_mu(v: VectorField, mu: float) -> ScalarField:
    """-tanh(sqrt(mu)|xi|)/|xi| (i xi . v_hat); the zero mode maps to 0."""
    grid = v.grid
    xi = grid.abs_xi(1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = np.where(xi > 0, -np.tanh(math.sqrt(mu) * xi) / np.where(xi > 0, xi, 1.0), 0.0)
    hat = 1j * grid.kx_d * forward(v.x.values) + 1j * grid.ky_d * forward(v.y.values)
    return ScalarField(grid, inverse(factor * hat, grid))


def lambda_s(u: ScalarField, s: float) -> ScalarField:
    return apply_multiplier(u, (1.0 + u.grid.abs_xi(1.0) ** 2) ** (s / 2.0))


def dealias(u: ScalarField) -> ScalarField:
    return apply_multiplier(u, u.grid.dealias_mask)


def exponential_filter(u: ScalarField, order: int = 36, strength: float = 36.0) -> ScalarField:
    grid = u.grid
    symbol = np.exp(
        -strength * (np.abs(grid.kx) / grid.kx_max) ** order
        - strength * (np.abs(grid.ky) / grid.ky_max) ** order
    )
    return apply_multiplier(u, symbol)


def shift_x(u: ScalarField, a: float) -> ScalarField:
    """Translate in x: returns u(x - a, y)."""
    return apply_multiplier(u, np.exp(-1j * u.grid.kx_d * a))


# ---------------------------------------------------------------------------
# Quadrature and norms
# ---------------------------------------------------------------------------


def inner(u: ScalarField, v: ScalarField) -> float:
    return float(np.sum(u.values * v.values) * u.grid.cell_area)


def vector_inner(u: VectorField, v: VectorField) -> float:
    return inner(u.x, v.x) + inner(u.y, v.y)


def mean(u: ScalarField) -> float:
    return float(np.mean(u.values))


def integral(u: ScalarField) -> float:
    return float(np.sum(u.values) * u.grid.cell_area)


def project_zero_mean(u: ScalarField) -> ScalarField:
    return ScalarField(u.grid, u.values - np.mean(u.values))


def l2_norm(u: ScalarField) -> float:
    return math.sqrt(inner(u, u))


def sobolev_norm(u: ScalarField, s: float) -> float:
    if not (0.0 <= s <= 10.0):
        raise InvalidInputError(f"Sobolev index must lie in [0, 10], got {s!r}")
    if s == 0.0:
        return l2_norm(u)
    return l2_norm(lambda_s(u, s))


def xtilde_seminorm(zeta: ScalarField, psi: ScalarField, p: RegimeParams, s: float) -> float:
    return sobolev_norm(zeta, s) + sobolev_norm(frak_p(psi, p), s)
