"""State containers and helpers shared by the asymptotic models."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from wavecascade.errors import DegenerateGeometryError, InvalidInputError
from wavecascade.spectral import PeriodicGrid, ScalarField, VectorField, dealias, integral
from wavecascade.timestepping import ArrayState, Snapshot, integrate_rk4


@dataclass(frozen=True)
class HyperbolicState:
    """(zeta, V) of the depth-averaged models."""

    zeta: ScalarField
    v: VectorField
    time: float = 0.0

    @classmethod
    def rest(cls, grid: PeriodicGrid, time: float = 0.0) -> "HyperbolicState":
        return cls(grid.zeros(), VectorField.zeros(grid), time)

    @property
    def grid(self) -> PeriodicGrid:
        return self.zeta.grid

    def to_arrays(self) -> ArrayState:
        return (self.zeta.values, self.v.x.values, self.v.y.values)

    @classmethod
    def from_arrays(cls, grid: PeriodicGrid, y: ArrayState, time: float) -> "HyperbolicState":
        return cls(
            ScalarField(grid, y[0]),
            VectorField(ScalarField(grid, y[1]), ScalarField(grid, y[2])),
            time,
        )


def hyperbolic_mass(state: HyperbolicState) -> float:
    return integral(state.zeta)


def check_depth(depth: np.ndarray, t: float, h0: float = 0.0) -> None:
    """Raise if min depth <= h0; h0 = 0 is plain positivity."""
    min_depth = float(np.min(depth))
    if min_depth <= h0:
        raise DegenerateGeometryError(
            f"depth {min_depth:.6g} lost positivity at t={t:.6g}",
            min_depth=min_depth, h0=h0, time=t,
        )


def maybe_dealias(u: ScalarField, enabled: bool) -> ScalarField:
    return dealias(u) if enabled else u


def check_time_args(t_end: float, dt: float) -> None:
    if not (t_end >= 0 and math.isfinite(t_end)):
        raise InvalidInputError(f"t_end must be non-negative, got {t_end!r}")
    if not (dt > 0 and math.isfinite(dt)):
        raise InvalidInputError(f"dt must be positive, got {dt!r}")


def run_hyperbolic(
    state0: HyperbolicState,
    rhs: Callable[[HyperbolicState], tuple[ScalarField, VectorField]],
    t_end: float,
    dt: float,
    snapshot_stride: int = 1,
    depth: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> list[HyperbolicState]:
    """RK4 for (zeta, V) systems; `depth(zeta_values)` is checked after each step when given."""
    check_time_args(t_end, dt)
    grid = state0.grid

    def array_rhs(t: float, y: ArrayState) -> ArrayState:
        d_zeta, d_v = rhs(HyperbolicState.from_arrays(grid, y, t))
        return (d_zeta.values, d_v.x.values, d_v.y.values)

    accept = None
    if depth is not None:
        def accept(t_prev: float, t_new: float, y: ArrayState) -> None:
            check_depth(depth(y[0]), t_prev)

    snapshots: list[Snapshot] = integrate_rk4(
        array_rhs, state0.to_arrays(), state0.time, state0.time + t_end, dt,
        snapshot_stride=snapshot_stride, accept=accept,
    )
    return [HyperbolicState.from_arrays(grid, s.state, s.time) for s in snapshots]


def suggest_model_dt(
    grid: PeriodicGrid,
    omega: np.ndarray,
    advective_speed: float = 0.0,
    cfl: float = 0.5,
) -> float:
    """cfl * min(dx, dy) / c_max for a model with linear frequency `omega` on the spectral grid."""
    xi = grid.abs_xi(1.0)
    safe = np.where(xi > 0, xi, 1.0)
    phase = np.where(xi > 0, np.abs(omega) / safe, 0.0)
    c_max = float(np.max(phase)) + abs(advective_speed)
    if c_max <= 0:
        raise InvalidInputError("cannot choose a time step for a model without wave speed")
    return cfl * min(grid.dx, grid.dy) / c_max
