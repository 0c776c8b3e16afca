"""Exception hierarchy shared by the solvers, the harness and the CLI."""

from __future__ import annotations

from typing import Any, Optional


class WaveCascadeError(Exception):
    """Base class; `kind` is the short tag written into report failure flags."""

    kind = "error"

    def to_dict(self) -> dict[str, Any]:
        return {"status": "failed", "kind": self.kind, "detail": str(self)}


class InvalidInputError(WaveCascadeError, ValueError):
    kind = "invalid_input"


class AxisOrientationError(InvalidInputError):
    kind = "axis_orientation"


class ConfigError(WaveCascadeError, ValueError):
    kind = "config"


class UnsupportedRegimeError(WaveCascadeError):
    kind = "unsupported_regime"


class DegenerateGeometryError(WaveCascadeError):
    kind = "degenerate_geometry"

    def __init__(
        self,
        detail: str,
        min_depth: float,
        h0: float,
        time: Optional[float] = None,
    ) -> None:
        super().__init__(detail)
        self.detail = detail
        self.min_depth = min_depth
        self.h0 = h0
        self.time = time

    def to_dict(self) -> dict[str, Any]:
        return {
            **super().to_dict(),
            "min_depth": self.min_depth,
            "h0": self.h0,
            "time": self.time,
        }


class SolverFailureError(WaveCascadeError, RuntimeError):
    kind = "solver_failure"

    def __init__(self, detail: str, residual: float, iterations: int) -> None:
        super().__init__(detail)
        self.detail = detail
        self.residual = residual
        self.iterations = iterations

    def to_dict(self) -> dict[str, Any]:
        return {
            **super().to_dict(),
            "residual": self.residual,
            "iterations": self.iterations,
        }


class BlowUpError(WaveCascadeError, RuntimeError):
    kind = "blow_up"

    def __init__(self, detail: str, time: float, max_abs: float) -> None:
        super().__init__(detail)
        self.detail = detail
        self.time = time
        self.max_abs = max_abs

    def to_dict(self) -> dict[str, Any]:
        return {**super().to_dict(), "time": self.time, "max_abs": self.max_abs}


class NoFitError(WaveCascadeError):
    kind = "no_fit"

    def __init__(self, detail: str, points: int) -> None:
        super().__init__(detail)
        self.detail = detail
        self.points = points
