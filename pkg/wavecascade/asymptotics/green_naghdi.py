"""Green-Naghdi (eps = 1) and Serre (eps = sqrt(mu)) equations.

    (h + mu T[h, beta b]) d_t V = -(h grad zeta + eps h (V.grad)V
                                    + mu eps [1/3 grad(h^3 D_V div V) + Q[h, beta b](V)])
    d_t zeta + div(h V) = 0,        h = 1 + eps zeta - beta b

The velocity update inverts h + mu T by conjugate gradient, preconditioned
with the flat operator 1 - (mu/3) grad div, warm-started from the previous
stage.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np
from scipy.sparse.linalg import LinearOperator, cg

from wavecascade.asymptotics.common import HyperbolicState, maybe_dealias, run_hyperbolic
from wavecascade.dnop import t_operator
from wavecascade.errors import DegenerateGeometryError, InvalidInputError, SolverFailureError
from wavecascade.params import RegimeParams
from wavecascade.spectral import (
    PeriodicGrid,
    ScalarField,
    VectorField,
    div,
    forward,
    grad,
    inverse,
)

logger = logging.getLogger("wavecascade.green_naghdi")

DEFAULT_GN_TOL = 1e-10
DEFAULT_GN_MAXITER = 400


def gn_depth(zeta: ScalarField, b: ScalarField, p: RegimeParams) -> ScalarField:
    return 1.0 + p.epsilon * zeta - p.beta * b


def advect(v: VectorField, u: ScalarField) -> ScalarField:
    """V . grad u"""
    return v.dot(grad(u))


def d_operator(v: VectorField, f: ScalarField) -> ScalarField:
    """D_V f = -(V . grad) f + f div V"""
    return -advect(v, f) + f * div(v)


def q_form(h: ScalarField, b: ScalarField, v: VectorField) -> VectorField:
    """Q[h, b](V) = 1/2 grad(h^2 (V.grad)^2 b) + h (h/2 D_V div V + (V.grad)^2 b) grad b."""
    second = advect(v, advect(v, b))
    d_div = d_operator(v, div(v))
    return grad(h * h * second) * 0.5 + grad(b) * (h * (0.5 * h * d_div + second))


class GreenNaghdiOperator:
    """h + mu T[h, b] acting on velocity fields, with its flat-bottom preconditioner."""

    def __init__(
        self,
        h: ScalarField,
        b: ScalarField,
        mu: float,
        tol: float = DEFAULT_GN_TOL,
        maxiter: int = DEFAULT_GN_MAXITER,
    ) -> None:
        if h.min() <= 0.0:
            raise DegenerateGeometryError(
                "Green-Naghdi operator needs positive depth", min_depth=h.min(), h0=0.0
            )
        self.h = h
        self.b = b
        self.mu = mu
        self.tol = tol
        self.maxiter = maxiter
        self.grid: PeriodicGrid = h.grid
        grid = self.grid
        self._size = 2 * grid.nx * grid.ny
        self._kx = grid.kx_d
        self._ky = grid.ky_d
        self._denominator = 1.0 + (mu / 3.0) * (self._kx ** 2 + self._ky ** 2)
        self.last_iterations = 0

    def apply(self, v: VectorField) -> VectorField:
        return v * self.h + t_operator(self.h, self.b, v) * self.mu

    def _unpack(self, flat: np.ndarray) -> VectorField:
        pair = flat.reshape((2,) + self.grid.shape)
        return VectorField(ScalarField(self.grid, pair[0]), ScalarField(self.grid, pair[1]))

    @staticmethod
    def _pack(v: VectorField) -> np.ndarray:
        return np.concatenate([v.x.values.ravel(), v.y.values.ravel()])

    def _matvec(self, flat: np.ndarray) -> np.ndarray:
        return self._pack(self.apply(self._unpack(flat)))

    def _precondition(self, flat: np.ndarray) -> np.ndarray:
        pair = flat.reshape((2,) + self.grid.shape)
        vx = forward(pair[0])
        vy = forward(pair[1])
        projected = (self._kx * vx + self._ky * vy) * (self.mu / 3.0) / self._denominator
        out_x = inverse(vx - self._kx * projected, self.grid)
        out_y = inverse(vy - self._ky * projected, self.grid)
        return np.concatenate([out_x.ravel(), out_y.ravel()])

    def energy(self, v: VectorField) -> float:
        """<(h + mu T) V, V> in the grid inner product."""
        return float(np.dot(self._pack(v), self._matvec(self._pack(v))) * self.grid.cell_area)

    def solve(self, rhs: VectorField, guess: Optional[VectorField] = None) -> VectorField:
        size = self._size
        operator = LinearOperator((size, size), matvec=self._matvec, dtype=float)
        preconditioner = LinearOperator((size, size), matvec=self._precondition, dtype=float)
        iterations = 0

        def count(_xk: np.ndarray) -> None:
            nonlocal iterations
            iterations += 1

        b_flat = self._pack(rhs)
        x0 = None if guess is None else self._pack(guess)
        solution, info = cg(
            operator, b_flat, x0=x0, rtol=self.tol, atol=0.0,
            maxiter=self.maxiter, M=preconditioner, callback=count,
        )
        self.last_iterations = iterations
        if info != 0:
            norm = float(np.linalg.norm(b_flat)) or 1.0
            residual = float(np.linalg.norm(b_flat - self._matvec(solution))) / norm
            raise SolverFailureError(
                f"Green-Naghdi CG did not converge in {iterations} iterations "
                f"(relative residual {residual:.3e})",
                residual=residual,
                iterations=iterations,
            )
        logger.debug("GN CG converged in %s iterations", iterations)
        return self._unpack(solution)


def gn_forcing(state: HyperbolicState, b: ScalarField, p: RegimeParams) -> VectorField:
    """Right-hand side of the velocity equation (sign included)."""
    eps, mu = p.epsilon, p.mu
    v = state.v
    h = gn_depth(state.zeta, b, p)
    bb = p.beta * b
    convective = VectorField(advect(v, v.x), advect(v, v.y))
    dispersive = grad(h * h * h * d_operator(v, div(v))) * (1.0 / 3.0) + q_form(h, bb, v)
    return -(grad(state.zeta) * h + convective * (eps * h) + dispersive * (mu * eps))


def gn_integrate(
    state0: HyperbolicState,
    b: ScalarField,
    p: RegimeParams,
    t_end: float,
    dt: float,
    dealias_products: bool = True,
    snapshot_stride: int = 1,
    tol: float = DEFAULT_GN_TOL,
    maxiter: int = DEFAULT_GN_MAXITER,
) -> list[HyperbolicState]:
    if gn_depth(state0.zeta, b, p).min() <= 0.0:
        raise DegenerateGeometryError(
            "Green-Naghdi data need 1 + eps (zeta - b) > 0",
            min_depth=gn_depth(state0.zeta, b, p).min(), h0=0.0, time=state0.time,
        )
    check_positivity(state0, b, p)
    bb = p.beta * b
    previous: dict[str, VectorField] = {}

    def rhs(state: HyperbolicState) -> tuple[ScalarField, VectorField]:
        h = gn_depth(state.zeta, b, p)
        flux = state.v * h
        d_zeta = -div(VectorField(
            maybe_dealias(flux.x, dealias_products), maybe_dealias(flux.y, dealias_products)
        ))
        forcing = gn_forcing(state, b, p)
        if dealias_products:
            forcing = VectorField(maybe_dealias(forcing.x, True), maybe_dealias(forcing.y, True))
        d_v = GreenNaghdiOperator(h, bb, p.mu, tol, maxiter).solve(forcing, previous.get("d_v"))
        previous["d_v"] = d_v
        return d_zeta, d_v

    return run_hyperbolic(
        state0,
        rhs,
        t_end,
        dt,
        snapshot_stride=snapshot_stride,
        depth=lambda zeta: 1.0 + p.epsilon * zeta - p.beta * b.values,
    )


def check_positivity(state: HyperbolicState, b: ScalarField, p: RegimeParams, trials: int = 4) -> float:
    """Smallest Rayleigh quotient <(h + mu T)u, u> / <h u, u> over seeded random u; must be > 0."""
    h = gn_depth(state.zeta, b, p)
    operator = GreenNaghdiOperator(h, p.beta * b, p.mu)
    rng = np.random.default_rng(0)
    grid = state.grid
    smallest = np.inf
    for _ in range(trials):
        u = VectorField(
            ScalarField(grid, rng.standard_normal(grid.shape)),
            ScalarField(grid, rng.standard_normal(grid.shape)),
        )
        weight = float(np.sum(h.values * u.norm_squared().values) * grid.cell_area)
        smallest = min(smallest, operator.energy(u) / weight)
    if smallest <= 0.0:
        raise InvalidInputError(f"Green-Naghdi operator is not positive (quotient {smallest:.3e})")
    logger.debug("GN operator positivity quotient %.6g", smallest)
    return float(smallest)


def gn_initial_velocity(zeta0: ScalarField, psi0: ScalarField, b: ScalarField, p: RegimeParams) -> VectorField:
    """(1 - (mu/h0) T[h0, beta b]) grad psi0"""
    h = gn_depth(zeta0, b, p)
    grad_psi = grad(psi0)
    return grad_psi - t_operator(h, p.beta * b, grad_psi) * (p.mu / h)


def gn_reconstruct(state: HyperbolicState, b: ScalarField, p: RegimeParams) -> VectorField:
    """Approximation of grad psi: (1 + (mu/h) T[h, beta b]) V"""
    h = gn_depth(state.zeta, b, p)
    return state.v + t_operator(h, p.beta * b, state.v) * (p.mu / h)


def gn_frequency(grid: PeriodicGrid, mu: float) -> np.ndarray:
    """omega with omega^2 = k^2 / (1 + mu k^2 / 3)"""
    k2 = grid.abs_xi(1.0) ** 2
    return np.sqrt(k2 / (1.0 + mu * k2 / 3.0))
