"""Asymptotic models of the water-waves hierarchy."""

from wavecascade.asymptotics.boussinesq import (
    BoussinesqCoeffs,
    boussinesq_initial,
    boussinesq_integrate,
    boussinesq_reconstruct,
)
from wavecascade.asymptotics.common import HyperbolicState
from wavecascade.asymptotics.full_dispersion import fd_initial, fd_integrate, fd_reconstruct
from wavecascade.asymptotics.green_naghdi import gn_initial_velocity, gn_integrate, gn_reconstruct
from wavecascade.asymptotics.kp import KpPairState, kp_initial, kp_integrate, kp_reconstruct
from wavecascade.asymptotics.shallow_water import sw_integrate

__all__ = [
    "BoussinesqCoeffs",
    "HyperbolicState",
    "KpPairState",
    "boussinesq_initial",
    "boussinesq_integrate",
    "boussinesq_reconstruct",
    "fd_initial",
    "fd_integrate",
    "fd_reconstruct",
    "gn_initial_velocity",
    "gn_integrate",
    "gn_reconstruct",
    "kp_initial",
    "kp_integrate",
    "kp_reconstruct",
    "sw_integrate",
]
