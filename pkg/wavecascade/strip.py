"""Straightened fluid strip: sigma map, the Q[sigma] matrix and vertical levels.

The fluid domain {-1 + beta*b < z < eps*zeta} is mapped onto the flat strip
-1 < z < 0 by z -> z + sigma(X, z). The vertical direction is discretized on
Legendre-Gauss-Lobatto levels, whose quadrature is exact for the degree
2(nz-1)-1 products met in the Galerkin form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.polynomial import legendre

from wavecascade.errors import DegenerateGeometryError, InvalidInputError
from wavecascade.params import RegimeParams
from wavecascade.spectral import PeriodicGrid, ScalarField, grad

DEFAULT_H0 = 0.1


@dataclass(frozen=True)
class VerticalGrid:
    """nz Legendre-Gauss-Lobatto levels on [-1, 0], bottom first."""

    nz: int

    def __post_init__(self) -> None:
        if self.nz < 8:
            raise InvalidInputError(f"nz must be at least 8, got {self.nz!r}")

    @cached_property
    def _reference(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.nz - 1
        p_n = legendre.Legendre.basis(n)
        interior = np.sort(np.real(p_n.deriv().roots()))
        x = np.concatenate(([-1.0], interior, [1.0]))
        w = 2.0 / (n * (n + 1) * p_n(x) ** 2)
        return x, w

    @cached_property
    def z(self) -> np.ndarray:
        return (self._reference[0] - 1.0) / 2.0

    @cached_property
    def weights(self) -> np.ndarray:
        return self._reference[1] / 2.0

    @cached_property
    def diff(self) -> np.ndarray:
        """d/dz on the levels (barycentric form, diagonal by negative row sum)."""
        x = self._reference[0]
        dx = x[:, None] - x[None, :]
        np.fill_diagonal(dx, 1.0)
        bary = 1.0 / np.prod(dx, axis=1)
        d = (bary[None, :] / bary[:, None]) / dx
        np.fill_diagonal(d, 0.0)
        np.fill_diagonal(d, -d.sum(axis=1))
        return 2.0 * d


@dataclass(frozen=True)
class StripField:
    """Values of a function on the flat strip, indexed [level, ix, iy]."""

    grid: PeriodicGrid
    vertical: VerticalGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        expected = (self.vertical.nz, self.grid.nx, self.grid.ny)
        if self.values.shape != expected:
            raise InvalidInputError(f"strip field shape {self.values.shape}, expected {expected}")

    @property
    def nz(self) -> int:
        return self.vertical.nz

    def level(self, j: int) -> ScalarField:
        return ScalarField(self.grid, self.values[j])

    def surface(self) -> ScalarField:
        return self.level(self.nz - 1)

    def bottom(self) -> ScalarField:
        return self.level(0)


@dataclass(frozen=True)
class StripGeometry:
    zeta: ScalarField
    b: ScalarField
    p: RegimeParams
    h0: float = DEFAULT_H0
    depth: ScalarField = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.zeta.grid != self.b.grid:
            raise InvalidInputError("zeta and b must live on the same grid")
        if self.h0 <= 0:
            raise InvalidInputError(f"h0 must be positive, got {self.h0!r}")
        depth = 1.0 + self.p.epsilon * self.zeta - self.p.beta * self.b
        min_depth = depth.min()
        if not math.isfinite(min_depth) or min_depth < self.h0:
            raise DegenerateGeometryError(
                f"minimal depth {min_depth:.6g} below h0={self.h0:g}", min_depth=min_depth, h0=self.h0
            )
        object.__setattr__(self, "depth", depth)

    @classmethod
    def flat(cls, grid: PeriodicGrid, p: RegimeParams, h0: float = DEFAULT_H0) -> "StripGeometry":
        return cls(grid.zeros(), grid.zeros(), p, h0)

    @property
    def grid(self) -> PeriodicGrid:
        return self.zeta.grid

    @property
    def depth_margin(self) -> float:
        return self.depth.min() - self.h0

    @property
    def is_flat(self) -> bool:
        return (
            not np.any(self.zeta.values) or self.p.epsilon == 0.0
        ) and (not np.any(self.b.values) or self.p.beta == 0.0)

    @property
    def has_flat_bottom(self) -> bool:
        return self.p.beta == 0.0 or not np.any(self.b.values)

    def with_surface(self, zeta: ScalarField) -> "StripGeometry":
        return StripGeometry(zeta, self.b, self.p, self.h0)

    @cached_property
    def _surface_gradient(self) -> tuple[np.ndarray, np.ndarray]:
        g = grad(self.zeta)
        return g.x.values, g.y.values

    @cached_property
    def _bottom_gradient(self) -> tuple[np.ndarray, np.ndarray]:
        g = grad(self.b)
        return g.x.values, g.y.values

    def sigma_z(self) -> np.ndarray:
        """d(sigma)/dz = eps*zeta - beta*b, independent of z."""
        return self.depth.values - 1.0

    def sigma_gradient(self, z) -> tuple[np.ndarray, np.ndarray]:
        """(d/dx, d/dy) of sigma at level(s) z; z may be an array of levels."""
        eps, beta = self.p.epsilon, self.p.beta
        z = np.asarray(z, dtype=float)[..., None, None]
        zx, zy = self._surface_gradient
        bx, by = self._bottom_gradient
        return (
            -beta * z * bx + eps * (z + 1.0) * zx,
            -beta * z * by + eps * (z + 1.0) * zy,
        )


def sigma_map(geom: StripGeometry, z: float) -> ScalarField:
    if not (-1.0 <= z <= 0.0):
        raise InvalidInputError(f"z must lie in [-1, 0], got {z!r}")
    return -geom.p.beta * z * geom.b + geom.p.epsilon * (z + 1.0) * geom.zeta


def metric_terms(geom: StripGeometry, z) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(1 + d_z sigma, sqrt(mu) d_x sigma, gamma sqrt(mu) d_y sigma) at level(s) z."""
    root = math.sqrt(geom.p.mu)
    sx, sy = geom.sigma_gradient(z)
    return geom.depth.values, root * sx, geom.p.gamma * root * sy


def q_matrix(geom: StripGeometry, z: float) -> np.ndarray:
    """Q[sigma] at level z as an (nx, ny, 3, 3) symmetric matrix field."""
    h, sx, sy = metric_terms(geom, z)
    if np.any(h <= 0):
        raise DegenerateGeometryError(
            "1 + d_z sigma must stay positive", min_depth=float(np.min(h)), h0=geom.h0
        )
    dz = h - 1.0
    q = np.zeros(h.shape + (3, 3))
    q[..., 0, 0] = dz
    q[..., 1, 1] = dz
    q[..., 0, 2] = q[..., 2, 0] = -sx
    q[..., 1, 2] = q[..., 2, 1] = -sy
    q[..., 2, 2] = (-dz + sx ** 2 + sy ** 2) / h
    return q


def coercivity_constant(geom: StripGeometry) -> float:
    """k[sigma] with |Theta|^2 <= k (1+Q[sigma]) Theta . Theta."""
    p = geom.p
    root = math.sqrt(p.mu)
    zeta_x, zeta_y = geom._surface_gradient
    b_x, b_y = geom._bottom_gradient
    # grad^gamma sigma is affine in z, so its sup is reached at z=0 or z=-1
    top = np.sqrt(zeta_x ** 2 + p.gamma ** 2 * zeta_y ** 2) * p.epsilon
    bottom = np.sqrt(b_x ** 2 + p.gamma ** 2 * b_y ** 2) * p.beta
    grad_sup = float(max(np.max(top), np.max(bottom)))
    return 1.0 + float(np.max(np.abs(geom.sigma_z()))) + (1.0 + root * grad_sup) ** 2 / geom.h0
