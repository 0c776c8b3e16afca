"""Classical RK4 driver shared by the water-waves solver and the asymptotic models.

States are tuples of equally shaped numpy arrays; a right-hand side maps
(t, state) to a tuple of the same layout.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from wavecascade.errors import BlowUpError, InvalidInputError

logger = logging.getLogger("wavecascade.timestepping")

ArrayState = tuple[np.ndarray, ...]
RightHandSide = Callable[[float, ArrayState], ArrayState]

BLOW_UP_THRESHOLD = 1e6


@dataclass(frozen=True)
class Snapshot:
    time: float
    state: ArrayState


def _axpy(y: ArrayState, a: float, k: ArrayState) -> ArrayState:
    return tuple(yi + a * ki for yi, ki in zip(y, k))


def rk4_step(rhs: RightHandSide, t: float, y: ArrayState, dt: float) -> ArrayState:
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * dt, _axpy(y, 0.5 * dt, k1))
    k3 = rhs(t + 0.5 * dt, _axpy(y, 0.5 * dt, k2))
    k4 = rhs(t + dt, _axpy(y, dt, k3))
    return tuple(
        yi + (dt / 6.0) * (a + 2.0 * b + 2.0 * c + d)
        for yi, a, b, c, d in zip(y, k1, k2, k3, k4)
    )


def step_count(t0: float, t_end: float, dt: float) -> int:
    """Number of equal steps of size at most |dt| that land exactly on t_end."""
    if dt <= 0 or not math.isfinite(dt):
        raise InvalidInputError(f"time step must be positive, got {dt!r}")
    span = abs(t_end - t0)
    if span == 0.0:
        return 0
    return max(1, int(math.ceil(span / dt - 1e-9)))


def check_blow_up(t: float, y: Sequence[np.ndarray]) -> None:
    largest = 0.0
    for component in y:
        if not np.all(np.isfinite(component)):
            raise BlowUpError(f"non-finite values at t={t:.6g}", time=t, max_abs=math.inf)
        largest = max(largest, float(np.max(np.abs(component))))
    if largest > BLOW_UP_THRESHOLD:
        raise BlowUpError(f"field magnitude {largest:.3e} exceeded {BLOW_UP_THRESHOLD:g} at t={t:.6g}", time=t, max_abs=largest)


def integrate_rk4(
    rhs: RightHandSide,
    y0: ArrayState,
    t0: float,
    t_end: float,
    dt: float,
    snapshot_stride: int = 1,
    stepper: Optional[Callable[[float, ArrayState, float], ArrayState]] = None,
    accept: Optional[Callable[[float, float, ArrayState], None]] = None,
    post_step: Optional[Callable[[ArrayState], ArrayState]] = None,
) -> list[Snapshot]:
    """March from t0 to t_end (either direction) and collect snapshots.

    `accept(t_prev, t_new, y_new)` may raise to abort the run; the blow-up
    detector runs first. The initial and final states are always recorded.
    """
    if snapshot_stride <= 0:
        raise InvalidInputError(f"snapshot_stride must be positive, got {snapshot_stride!r}")
    n = step_count(t0, t_end, dt)
    h = (t_end - t0) / n if n else 0.0
    step = stepper or (lambda t, y, dt_: rk4_step(rhs, t, y, dt_))
    snapshots = [Snapshot(t0, y0)]
    y = y0
    t = t0
    for i in range(1, n + 1):
        y = step(t, y, h)
        if post_step is not None:
            y = post_step(y)
        t_new = t0 + i * h if i < n else t_end
        check_blow_up(t_new, y)
        if accept is not None:
            accept(t, t_new, y)
        t = t_new
        if i % snapshot_stride == 0 or i == n:
            snapshots.append(Snapshot(t, y))
    logger.debug("integrated %s steps of %.3g to t=%.6g", n, h, t)
    return snapshots
