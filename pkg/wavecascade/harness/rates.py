"""Log-log rate fitting for convergence sweeps."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from wavecascade.errors import NoFitError

logger = logging.getLogger("wavecascade.rates")

MIN_FIT_POINTS = 3
SLOPE_BRACKET = 0.3


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    residual: float
    excluded: tuple[int, ...] = field(default_factory=tuple)

    def within(self, expected: float, bracket: float = SLOPE_BRACKET) -> bool:
        return abs(self.slope - expected) <= bracket


def fit_rate(params: Sequence[float], errors: Sequence[float]) -> RateFit:
    """Least squares of log(error) against log(param).

    Non-positive or non-finite entries are excluded (their indices are kept in
    `excluded`); fewer than three remaining points raise NoFitError. The
    residual is the RMS of the log misfit.
    """
    if len(params) != len(errors):
        raise NoFitError(f"{len(params)} parameters but {len(errors)} errors", points=0)
    keep: list[int] = []
    excluded: list[int] = []
    for i, (p, e) in enumerate(zip(params, errors)):
        if p > 0 and e > 0 and math.isfinite(p) and math.isfinite(e):
            keep.append(i)
        else:
            excluded.append(i)
    if excluded:
        logger.warning("excluding %s non-positive points from the rate fit", len(excluded))
    if len(keep) < MIN_FIT_POINTS:
        raise NoFitError(
            f"need at least {MIN_FIT_POINTS} positive points for a rate fit, got {len(keep)}",
            points=len(keep),
        )
    x = np.log(np.asarray([params[i] for i in keep], dtype=float))
    y = np.log(np.asarray([errors[i] for i in keep], dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    misfit = y - (slope * x + intercept)
    residual = float(np.sqrt(np.mean(misfit ** 2)))
    return RateFit(float(slope), float(intercept), residual, tuple(excluded))


def running_slopes(params: Sequence[float], errors: Sequence[float]) -> list[float]:
    """Slopes between consecutive points; nan where either point is unusable."""
    slopes: list[float] = []
    for (p0, e0), (p1, e1) in zip(zip(params, errors), zip(params[1:], errors[1:])):
        if min(p0, p1, e0, e1) > 0 and p0 != p1:
            slopes.append(math.log(e1 / e0) / math.log(p1 / p0))
        else:
            slopes.append(math.nan)
    return slopes


def strictly_decreasing(values: Sequence[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))
