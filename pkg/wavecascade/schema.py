"""Typed experiment configuration, validated from the merged TOML dict."""

from __future__ import annotations

import math
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from wavecascade.asymptotics.boussinesq import BoussinesqCoeffs
from wavecascade.dnop import DnBackend
from wavecascade.params import DepthScaling, RegimePreset
from wavecascade.spectral import PeriodicGrid

ExperimentKind = Literal["simulate", "compare", "sweep", "dn_study", "taylor_check"]
ModelName = Literal["water_waves", "shallow_water", "green_naghdi", "boussinesq", "kp", "full_dispersion"]
BackendName = Literal["elliptic", "shallow1", "shallow2", "small_amplitude"]

Bump = tuple[float, float, float, float]
Mode = tuple[float, int, int]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ExperimentSection(_Section):
    kind: ExperimentKind = "simulate"
    preset: RegimePreset = RegimePreset.GREEN_NAGHDI
    values: list[float] = Field(default_factory=list)
    model: ModelName = "water_waves"
    horizon: float = Field(default=1.0, gt=0)
    fixed_mu: float = Field(default=4.0, ge=1.0)
    sobolev_index: float = Field(default=1.5, ge=0, le=10)
    h0: float = Field(default=0.1, gt=0, lt=1)
    out_dir: str = "wavecascade-out"


class GridSpec(_Section):
    nx: int = 64
    ny: int = 8
    lx: float = Field(default=2.0 * math.pi, gt=0)
    ly: float = Field(default=2.0 * math.pi, gt=0)

    def build(self) -> PeriodicGrid:
        return PeriodicGrid(self.nx, self.ny, self.lx, self.ly)


class InitialDataSpec(_Section):
    zeta_bumps: list[Bump] = Field(default_factory=list)
    psi_bumps: list[Bump] = Field(default_factory=list)
    bottom_bumps: list[Bump] = Field(default_factory=list)
    zeta_modes: list[Mode] = Field(default_factory=list)
    psi_modes: list[Mode] = Field(default_factory=list)
    bottom_modes: list[Mode] = Field(default_factory=list)
    noise: float = Field(default=0.0, ge=0)

    @property
    def has_bottom(self) -> bool:
        return bool(self.bottom_bumps or self.bottom_modes)


class IntegratorSettings(_Section):
    dt: float = Field(default=0.0, ge=0)
    cfl: float = Field(default=0.5, gt=0, le=1)
    dealias: bool = True
    filter: bool = False
    filter_order: int = Field(default=36, ge=2)
    snapshot_stride: int = Field(default=1, ge=1)
    backend: BackendName = "elliptic"
    order: int = Field(default=1, ge=1, le=8)
    nz: int = Field(default=24, ge=8)
    cg_tol: float = Field(default=1e-10, gt=0, le=1e-4)
    cg_maxiter: int = Field(default=500, ge=1)

    def dn_backend(self) -> DnBackend:
        return DnBackend(self.backend, nz=self.nz, cg_tol=self.cg_tol, cg_maxiter=self.cg_maxiter, order=self.order)


class ReferenceSettings(_Section):
    dt_factor: int = Field(default=4, ge=1)
    nz: int = Field(default=32, ge=8)
    backend: Literal["elliptic", "small_amplitude"] = "elliptic"
    order: int = Field(default=3, ge=1, le=8)
    self_check: bool = True

    def dn_backend(self, integrator: IntegratorSettings) -> DnBackend:
        return DnBackend(
            self.backend,
            nz=self.nz,
            cg_tol=integrator.cg_tol,
            cg_maxiter=integrator.cg_maxiter,
            order=self.order,
        )


class BoussinesqSettings(_Section):
    theta: float = Field(default=1.0, ge=0, le=1)
    p1: float = 0.0
    p2: float = 0.0

    def coeffs(self) -> BoussinesqCoeffs:
        return BoussinesqCoeffs(self.theta, self.p1, self.p2)


class DnStudySettings(_Section):
    expansion: Literal["shallow1", "shallow2", "small_amplitude"] = "shallow1"
    order: int = Field(default=1, ge=1, le=8)
    vary: Literal["mu", "epsilon"] = "mu"
    mu: float = Field(default=1.0, gt=0)
    epsilon: float = Field(default=1.0, gt=0, le=1)


class TaylorSettings(_Section):
    bisect: bool = False
    amplitude_low: float = 0.0
    amplitude_high: float = 1.0
    tolerance: float = Field(default=1e-3, gt=0)


class ExperimentConfig(_Section):
    experiment: ExperimentSection = Field(default_factory=ExperimentSection)
    grid: GridSpec = Field(default_factory=GridSpec)
    initial: InitialDataSpec = Field(default_factory=InitialDataSpec)
    integrator: IntegratorSettings = Field(default_factory=IntegratorSettings)
    reference: ReferenceSettings = Field(default_factory=ReferenceSettings)
    boussinesq: BoussinesqSettings = Field(default_factory=BoussinesqSettings)
    dn_study: DnStudySettings = Field(default_factory=DnStudySettings)
    taylor: TaylorSettings = Field(default_factory=TaylorSettings)

    @property
    def depth_scaling(self) -> DepthScaling:
        """Nondimensionalization of the water-waves run matching the selected model."""
        if self.experiment.model == "full_dispersion" or self.experiment.preset is RegimePreset.FULL_DISPERSION:
            return DepthScaling.DEEP
        if self.experiment.model == "water_waves" and self.experiment.kind == "simulate":
            return DepthScaling.GENERAL
        return DepthScaling.SHALLOW

    def first_value(self) -> Optional[float]:
        return self.experiment.values[0] if self.experiment.values else None
