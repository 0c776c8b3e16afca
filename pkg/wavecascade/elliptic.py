"""Variable-coefficient elliptic solve on the flat strip.

The harmonic extension of psi is sought in the Galerkin form

    a(u, v) = sum_X sum_j w_j (1 + Q[sigma]) grad u . grad v,

with grad = (sqrt(mu) d_x, gamma sqrt(mu) d_y, d_z): Fourier collocation in X,
Legendre-Gauss-Lobatto levels in z, Dirichlet data at the surface level and
the bottom condition natural in the weak form. The interior unknowns are
found by conjugate gradient preconditioned with the flat-strip (Q = 0)
operator, which is diagonal in Fourier and solved exactly level-wise. The
Dirichlet-Neumann image is the weak flux (A phi) on the surface rows, i.e.
the Schur complement of the discrete operator: symmetric and nonnegative.
"""

from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np
from scipy.sparse.linalg import LinearOperator, cg

from wavecascade.errors import InvalidInputError, SolverFailureError
from wavecascade.spectral import ScalarField, VectorField, forward, inverse
from wavecascade.strip import StripField, StripGeometry, VerticalGrid, metric_terms

logger = logging.getLogger("wavecascade.elliptic")

DEFAULT_NZ = 24
DEFAULT_CG_TOL = 1e-10
DEFAULT_CG_MAXITER = 500


class StripSolver:
    def __init__(
        self,
        geom: StripGeometry,
        nz: int = DEFAULT_NZ,
        cg_tol: float = DEFAULT_CG_TOL,
        cg_maxiter: int = DEFAULT_CG_MAXITER,
    ) -> None:
        if not (0.0 < cg_tol <= 1e-4):
            raise InvalidInputError(f"cg_tol must lie in (0, 1e-4], got {cg_tol!r}")
        if cg_maxiter <= 0:
            raise InvalidInputError(f"cg_maxiter must be positive, got {cg_maxiter!r}")
        self.geom = geom
        self.grid = geom.grid
        self.vertical = VerticalGrid(nz)
        self.cg_tol = cg_tol
        self.cg_maxiter = cg_maxiter
        self.last_iterations = 0

        p = geom.p
        grid = self.grid
        self._dx = 1j * math.sqrt(p.mu) * grid.kx_d
        self._dy = 1j * p.gamma * math.sqrt(p.mu) * grid.ky_d

        h, sx, sy = metric_terms(geom, self.vertical.z)
        self._h = h[None, :, :]
        self._sx = sx
        self._sy = sy
        self._c = (1.0 + sx ** 2 + sy ** 2) / self._h
        self._w = self.vertical.weights[:, None, None]
        self._d = self.vertical.diff

        # Flat operator restricted to the interior levels:
        # K + lam(k) W with K = D^T W D, solved through W^{-1/2} K W^{-1/2} = V diag(theta) V^T.
        w = self.vertical.weights
        stiffness = self._d.T @ np.diag(w) @ self._d
        root_w = np.sqrt(w[:-1])
        theta, vecs = np.linalg.eigh(stiffness[:-1, :-1] / np.outer(root_w, root_w))
        self._theta = theta[:, None, None]
        self._vecs = vecs
        self._root_w = root_w[:, None, None]
        self._coupling = stiffness[:-1, -1][:, None, None]
        self._lam = (p.mu * (grid.kx_d ** 2 + p.gamma ** 2 * grid.ky_d ** 2))[None, :, :]

    # ------------------------------------------------------------------
    # Operators
    # ------------------------------------------------------------------

    def _fluxes(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        hat = forward(u)
        gx = inverse(self._dx * hat, self.grid)
        gy = inverse(self._dy * hat, self.grid)
        gz = np.tensordot(self._d, u, axes=(1, 0))
        fx = self._h * gx - self._sx * gz
        fy = self._h * gy - self._sy * gz
        fz = -self._sx * gx - self._sy * gy + self._c * gz
        return fx, fy, fz

    def apply_operator(self, u: np.ndarray) -> np.ndarray:
        """A u for a full strip array (all levels, surface included)."""
        fx, fy, fz = self._fluxes(u)
        divergence = inverse(self._dx * forward(fx) + self._dy * forward(fy), self.grid)
        return -self._w * divergence + np.tensordot(self._d.T, self._w * fz, axes=(1, 0))

    def energy(self, u: np.ndarray) -> float:
        """a(u, u) = sum_X sum_j w_j (1+Q) grad u . grad u."""
        return float(np.sum(u * self.apply_operator(u)))

    def _flat_inverse_hat(self, r_hat: np.ndarray) -> np.ndarray:
        y = r_hat / self._root_w
        y = np.einsum("ji,jxy->ixy", self._vecs, y)
        y = y / (self._theta + self._lam)
        y = np.einsum("ij,jxy->ixy", self._vecs, y)
        return y / self._root_w

    def _flat_inverse(self, r: np.ndarray) -> np.ndarray:
        return inverse(self._flat_inverse_hat(forward(r)), self.grid)

    def flat_lift(self, psi: ScalarField) -> np.ndarray:
        """Discrete harmonic extension of psi in the flat strip (all levels)."""
        psi_hat = forward(psi.values)
        interior = inverse(-self._flat_inverse_hat(self._coupling * psi_hat[None, :, :]), self.grid)
        return np.concatenate([interior, psi.values[None, :, :]], axis=0)

    # ------------------------------------------------------------------
    # Solves
    # ------------------------------------------------------------------

    def solve(self, psi: ScalarField, source: Optional[np.ndarray] = None) -> StripField:
        """Strip solution with surface trace psi and interior load `source`.

        `source` holds the right-hand side on the nz-1 interior levels; the
        homogeneous problem (source None) is the harmonic extension.
        """
        nz = self.vertical.nz
        interior_shape = (nz - 1, self.grid.nx, self.grid.ny)
        lift = self.flat_lift(psi)
        applied = self.apply_operator(lift)
        rhs = -applied[:-1]
        if source is not None:
            rhs = rhs + source
        size = rhs.size

        def matvec(v: np.ndarray) -> np.ndarray:
            full = np.zeros((nz,) + self.grid.shape)
            full[:-1] = v.reshape(interior_shape)
            return self.apply_operator(full)[:-1].ravel()

        def precondition(r: np.ndarray) -> np.ndarray:
            return self._flat_inverse(r.reshape(interior_shape)).ravel()

        operator = LinearOperator((size, size), matvec=matvec, dtype=float)
        preconditioner = LinearOperator((size, size), matvec=precondition, dtype=float)
        scale = max(float(np.linalg.norm(applied)), float(np.linalg.norm(rhs)))
        iterations = 0

        def count(_xk: np.ndarray) -> None:
            nonlocal iterations
            iterations += 1

        correction, info = cg(
            operator,
            rhs.ravel(),
            rtol=self.cg_tol,
            atol=self.cg_tol * scale,
            maxiter=self.cg_maxiter,
            M=preconditioner,
            callback=count,
        )
        self.last_iterations = iterations
        if info != 0:
            residual = float(np.linalg.norm(rhs.ravel() - matvec(correction)))
            relative = residual / scale if scale > 0 else residual
            raise SolverFailureError(
                f"strip CG did not converge in {iterations} iterations "
                f"(relative residual {relative:.3e}, tol {self.cg_tol:g})",
                residual=relative,
                iterations=iterations,
            )
        logger.debug("strip CG converged in %s iterations", iterations)
        values = lift.copy()
        values[:-1] += correction.reshape(interior_shape)
        return StripField(self.grid, self.vertical, values)

    def dirichlet_neumann(self, psi: ScalarField) -> ScalarField:
        psi = ScalarField(psi.grid, psi.values - np.mean(psi.values))
        phi = self.solve(psi)
        flux = self.apply_operator(phi.values)[-1]
        # exact DN images have zero mean; the CG residual on interior rows is the only source of drift
        return ScalarField(self.grid, flux - np.mean(flux))

    def solve_residual(self, source: np.ndarray) -> float:
        """Relative interior residual |A u - source| / |source| of the solve with zero surface data."""
        phi = self.solve(self.grid.zeros(), source)
        residual = self.apply_operator(phi.values)[:-1] - source
        norm = float(np.linalg.norm(source))
        return float(np.linalg.norm(residual)) / norm if norm > 0 else float(np.linalg.norm(residual))

    def bottom_velocity(self, psi: ScalarField) -> VectorField:
        """Horizontal gradient of the physical potential at the bottom."""
        psi = ScalarField(psi.grid, psi.values - np.mean(psi.values))
        phi = self.solve(psi).values
        grid = self.grid
        p = self.geom.p
        hat = forward(phi[0])
        phi_x = inverse(1j * grid.kx_d * hat, grid)
        phi_y = inverse(1j * grid.ky_d * hat, grid)
        phi_z = (self._d @ phi.reshape(self.vertical.nz, -1))[0].reshape(grid.shape)
        sigma_x, sigma_y = self.geom.sigma_gradient(-1.0)
        h = self.geom.depth.values
        return VectorField(
            ScalarField(grid, phi_x - sigma_x * phi_z / h),
            ScalarField(grid, phi_y - sigma_y * phi_z / h),
        )
