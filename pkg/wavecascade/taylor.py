"""Sufficient Taylor sign check: minimal depth and the anisotropic bottom Hessian."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from wavecascade.dnop import DnBackend, bottom_velocity
from wavecascade.errors import InvalidInputError
from wavecascade.spectral import ScalarField, grad
from wavecascade.strip import StripGeometry

logger = logging.getLogger("wavecascade.taylor")


@dataclass(frozen=True)
class TaylorReport:
    passes: bool
    hessian_margin: float
    depth_margin: float


def bottom_hessian_form(geom: StripGeometry, w_x: np.ndarray, w_y: np.ndarray) -> np.ndarray:
    """W . H^gamma_b W with H = [[b_xx, g^2 b_xy], [g^2 b_xy, g^4 b_yy]]."""
    g2 = geom.p.gamma ** 2
    grad_b = grad(geom.b)
    second_x = grad(grad_b.x)
    b_xx = second_x.x.values
    b_xy = second_x.y.values
    b_yy = grad(grad_b.y).y.values
    return b_xx * w_x ** 2 + 2.0 * g2 * b_xy * w_x * w_y + g2 * g2 * b_yy * w_y ** 2


def taylor_check(geom: StripGeometry, psi0: ScalarField, dn_backend: Optional[DnBackend] = None) -> TaylorReport:
    p = geom.p
    depth_margin = geom.depth_margin
    if geom.has_flat_bottom or not np.any(psi0.values - np.mean(psi0.values)):
        hessian_margin = 1.0
    else:
        w = bottom_velocity(geom, psi0, dn_backend)
        form = bottom_hessian_form(geom, w.x.values, w.y.values)
        hessian_margin = 1.0 - float(np.max(-(p.epsilon ** 2) * p.beta * p.mu * form))
    passes = depth_margin > 0.0 and hessian_margin > 0.0
    logger.info(
        "taylor check: depth_margin=%.6g hessian_margin=%.6g passes=%s",
        depth_margin, hessian_margin, passes,
    )
    return TaylorReport(passes=passes, hessian_margin=hessian_margin, depth_margin=depth_margin)


def taylor_threshold(
    make_geometry: Callable[[float], StripGeometry],
    psi0: ScalarField,
    low: float,
    high: float,
    tol: float = 1e-3,
    dn_backend: Optional[DnBackend] = None,
) -> float:
    """Bisect for the bottom amplitude at which the Hessian margin reaches zero.

    `make_geometry(A)` builds the geometry for amplitude A; the margin must be
    positive at `low` and non-positive at `high`.
    """
    if not (low < high) or tol <= 0:
        raise InvalidInputError("taylor_threshold needs low < high and tol > 0")

    def margin(amplitude: float) -> float:
        return taylor_check(make_geometry(amplitude), psi0, dn_backend).hessian_margin

    if margin(low) <= 0.0:
        raise InvalidInputError(f"Hessian margin already non-positive at amplitude {low!r}")
    if margin(high) > 0.0:
        raise InvalidInputError(f"Hessian margin still positive at amplitude {high!r}")
    while high - low > tol * max(1.0, abs(high)):
        mid = 0.5 * (low + high)
        if margin(mid) > 0.0:
            low = mid
        else:
            high = mid
    return 0.5 * (low + high)
