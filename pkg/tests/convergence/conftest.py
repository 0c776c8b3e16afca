"""Experiment builders for the convergence sweeps."""

from __future__ import annotations

from typing import Any

from wavecascade.config import _DEFAULT, _deep_merge, build_experiment
from wavecascade.schema import ExperimentConfig

MU_SWEEP = [0.1, 0.05, 0.025, 0.0125]

# y-independent long wave over a gently varying bottom
LONG_WAVE = {
    "zeta_modes": [[0.2, 1, 0]],
    "psi_modes": [[0.2, 1, 0]],
    "bottom_modes": [[0.1, 2, 0]],
}


def experiment(**sections: Any) -> ExperimentConfig:
    return build_experiment(_deep_merge(_DEFAULT, sections))


def compare_experiment(preset: str, model: str, values: list[float], **sections: Any) -> ExperimentConfig:
    base: dict[str, Any] = {
        "experiment": {"kind": "compare", "preset": preset, "model": model, "values": values},
        "grid": {"nx": 64, "ny": 8},
        "initial": LONG_WAVE,
    }
    return experiment(**_deep_merge(base, sections))
