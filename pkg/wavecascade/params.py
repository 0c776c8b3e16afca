"""Dimensionless regime parameters, regime presets and physical scalings."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Union

from wavecascade.errors import AxisOrientationError, InvalidInputError

MU_MIN = 1e-8
MU_MAX = 1e8


@dataclass(frozen=True)
class PhysicalScales:
    """Characteristic lengths (m) and gravity (m/s^2) of a wave field."""

    amplitude_a: float
    wavelength_x_lambda: float
    wavelength_y: float
    depth_d: float
    bottom_amplitude_B: float = 0.0
    gravity_g: float = 9.81

    def __post_init__(self) -> None:
        for name in ("amplitude_a", "wavelength_x_lambda", "wavelength_y", "depth_d", "gravity_g"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise InvalidInputError(f"{name} must be strictly positive, got {value!r}")
        if not math.isfinite(self.bottom_amplitude_B) or self.bottom_amplitude_B < 0:
            raise InvalidInputError(
                f"bottom_amplitude_B must be non-negative, got {self.bottom_amplitude_B!r}"
            )
        if self.amplitude_a > self.depth_d:
            raise InvalidInputError("amplitude_a must not exceed depth_d")
        if self.bottom_amplitude_B > self.depth_d:
            raise InvalidInputError("bottom_amplitude_B must not exceed depth_d")


@dataclass(frozen=True)
class RegimeParams:
    """The quadruple (epsilon, mu, gamma, beta); nu = 1/(1+sqrt(mu)) is derived."""

    epsilon: float
    mu: float
    gamma: float = 1.0
    beta: float = 0.0
    nu: float = field(init=False)

    def __post_init__(self) -> None:
        errors: list[str] = []
        if not (0.0 < self.epsilon <= 1.0):
            errors.append(f"epsilon must lie in (0, 1], got {self.epsilon!r}")
        if not (MU_MIN <= self.mu <= MU_MAX):
            errors.append(f"mu must lie in [{MU_MIN:g}, {MU_MAX:g}], got {self.mu!r}")
        if not (0.0 < self.gamma <= 1.0):
            errors.append(f"gamma must lie in (0, 1], got {self.gamma!r}")
        if not (0.0 <= self.beta <= 1.0):
            errors.append(f"beta must lie in [0, 1], got {self.beta!r}")
        if errors:
            raise InvalidInputError("Invalid regime parameters: " + "; ".join(errors))
        object.__setattr__(self, "nu", 1.0 / (1.0 + math.sqrt(self.mu)))

    @property
    def steepness(self) -> float:
        return self.epsilon * math.sqrt(self.mu)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.epsilon, self.mu, self.gamma, self.beta)


@dataclass(frozen=True)
class ReferenceScales:
    """Units that turn dimensionless solver output back into SI values."""

    length_x: float
    length_y: float
    length_z: float
    elevation: float
    bottom: float
    time: float
    potential: float


class DepthScaling(str, Enum):
    """Which nondimensionalization of the water-waves equations is in use."""

    GENERAL = "general"
    SHALLOW = "shallow"
    DEEP = "deep"


def effective_nu(p: RegimeParams, scaling: Union[DepthScaling, str] = DepthScaling.GENERAL) -> float:
    """Depth-scale factor entering the water-waves equations under `scaling`."""
    scaling = DepthScaling(scaling)
    if scaling is DepthScaling.SHALLOW:
        return 1.0
    if scaling is DepthScaling.DEEP:
        return 1.0 / math.sqrt(p.mu)
    return p.nu


def nondimensionalize(scales: PhysicalScales) -> RegimeParams:
    gamma = scales.wavelength_x_lambda / scales.wavelength_y
    if gamma > 1.0:
        raise AxisOrientationError(
            f"wavelength_y ({scales.wavelength_y!r}) is shorter than the longitudinal "
            f"wavelength ({scales.wavelength_x_lambda!r}); x must be the longitudinal direction"
        )
    mu = scales.depth_d ** 2 / scales.wavelength_x_lambda ** 2
    if not (MU_MIN <= mu <= MU_MAX):
        raise InvalidInputError(f"shallowness mu={mu!r} outside [{MU_MIN:g}, {MU_MAX:g}]")
    return RegimeParams(
        epsilon=scales.amplitude_a / scales.depth_d,
        mu=mu,
        gamma=gamma,
        beta=scales.bottom_amplitude_B / scales.depth_d,
    )


def redimensionalize(
    p: RegimeParams, depth_d: float, gravity_g: float = 9.81
) -> tuple[PhysicalScales, ReferenceScales]:
    """Inverse of nondimensionalize for a given depth, plus the general-scaling units."""
    if depth_d <= 0 or gravity_g <= 0:
        raise InvalidInputError("depth_d and gravity_g must be strictly positive")
    wavelength = depth_d / math.sqrt(p.mu)
    scales = PhysicalScales(
        amplitude_a=p.epsilon * depth_d,
        wavelength_x_lambda=wavelength,
        wavelength_y=wavelength / p.gamma,
        depth_d=depth_d,
        bottom_amplitude_B=p.beta * depth_d,
        gravity_g=gravity_g,
    )
    reference = ReferenceScales(
        length_x=wavelength,
        length_y=wavelength / p.gamma,
        length_z=depth_d * p.nu,
        elevation=scales.amplitude_a,
        bottom=scales.bottom_amplitude_B,
        time=wavelength / math.sqrt(gravity_g * depth_d * p.nu),
        potential=p.epsilon * wavelength * math.sqrt(gravity_g * depth_d / p.nu),
    )
    return scales, reference


def in_regime_class(p: RegimeParams, M: float) -> bool:
    if M <= 0:
        raise InvalidInputError(f"regime bound M must be positive, got {M!r}")
    # RegimeParams construction already enforces the box constraints.
    return p.steepness <= M and p.beta / p.epsilon <= M


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------


class RegimePreset(str, Enum):
    SHALLOW_WATER = "shallow_water"
    GREEN_NAGHDI = "green_naghdi"
    SERRE = "serre"
    BOUSSINESQ_LONG_WAVE = "boussinesq_long_wave"
    KP_WEAKLY_TRANSVERSE = "kp_weakly_transverse"
    FULL_DISPERSION = "full_dispersion"


def _shallow(value: float, fixed_mu: float) -> RegimeParams:
    return RegimeParams(epsilon=1.0, mu=value, gamma=1.0, beta=1.0)


def _serre(value: float, fixed_mu: float) -> RegimeParams:
    root = math.sqrt(value)
    return RegimeParams(epsilon=root, mu=value, gamma=1.0, beta=root)


def _boussinesq(value: float, fixed_mu: float) -> RegimeParams:
    return RegimeParams(epsilon=value, mu=value, gamma=1.0, beta=value)


def _kp(value: float, fixed_mu: float) -> RegimeParams:
    return RegimeParams(epsilon=value, mu=value, gamma=math.sqrt(value), beta=0.0)


def _full_dispersion(value: float, fixed_mu: float) -> RegimeParams:
    # value is the steepness epsilon*sqrt(mu)
    return RegimeParams(epsilon=value / math.sqrt(fixed_mu), mu=fixed_mu, gamma=1.0, beta=0.0)


# name -> (generator, admissible-interval check, human readable interval)
_PRESETS: dict[RegimePreset, tuple[Callable[[float, float], RegimeParams], Callable[[float, float], bool], str]] = {
    RegimePreset.SHALLOW_WATER: (_shallow, lambda v, m: 0.0 < v < 1.0, "(0, 1)"),
    RegimePreset.GREEN_NAGHDI: (_shallow, lambda v, m: 0.0 < v < 1.0, "(0, 1)"),
    RegimePreset.SERRE: (_serre, lambda v, m: 0.0 < v < 1.0, "(0, 1)"),
    RegimePreset.BOUSSINESQ_LONG_WAVE: (_boussinesq, lambda v, m: 0.0 < v <= 1.0, "(0, 1]"),
    RegimePreset.KP_WEAKLY_TRANSVERSE: (_kp, lambda v, m: 0.0 < v <= 1.0, "(0, 1]"),
    RegimePreset.FULL_DISPERSION: (
        _full_dispersion,
        lambda v, m: 0.0 < v <= math.sqrt(m),
        "(0, sqrt(fixed_mu)]",
    ),
}


def preset_sweep(
    preset: Union[RegimePreset, str],
    values: Iterable[float],
    fixed_mu: float = 4.0,
) -> list[RegimeParams]:
    """One RegimeParams per small-parameter value.

    The small parameter is mu for the shallow presets, epsilon for the
    long-wave and KP presets, and the steepness for full_dispersion (whose
    mu is `fixed_mu`, at least 1).
    """
    preset = RegimePreset(preset)
    generator, admissible, interval = _PRESETS[preset]
    if preset is RegimePreset.FULL_DISPERSION and fixed_mu < 1.0:
        raise InvalidInputError(f"full_dispersion requires fixed_mu >= 1, got {fixed_mu!r}")
    out: list[RegimeParams] = []
    for value in values:
        value = float(value)
        if not admissible(value, fixed_mu):
            raise InvalidInputError(
                f"{preset.value}: value {value!r} outside admissible interval {interval}"
            )
        out.append(generator(value, fixed_mu))
    return out
