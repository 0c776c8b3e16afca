"""Shared fixtures: small grids, regime parameters and experiment files."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from wavecascade.params import RegimeParams
from wavecascade.spectral import PeriodicGrid, ScalarField


@pytest.fixture
def grid() -> PeriodicGrid:
    return PeriodicGrid(32, 8, 2.0 * math.pi, 2.0 * math.pi)


@pytest.fixture
def square_grid() -> PeriodicGrid:
    return PeriodicGrid(16, 16, 2.0 * math.pi, 2.0 * math.pi)


@pytest.fixture
def shallow_params() -> RegimeParams:
    return RegimeParams(epsilon=0.1, mu=0.1, gamma=1.0, beta=0.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


def cosine(grid: PeriodicGrid, amplitude: float = 1.0, kx: int = 1, ky: int = 0) -> ScalarField:
    return grid.field(lambda x, y: amplitude * np.cos(kx * 2.0 * math.pi * x / grid.lx + ky * 2.0 * math.pi * y / grid.ly))


def smooth_random(grid: PeriodicGrid, rng: np.random.Generator, amplitude: float = 0.1, modes: int = 3) -> ScalarField:
    """Sum of low cosines/sines with random amplitudes."""
    values = np.zeros(grid.shape)
    for kx in range(modes + 1):
        for ky in range(modes + 1):
            a, b = rng.uniform(-1.0, 1.0, size=2)
            phase = kx * 2.0 * math.pi * grid.x / grid.lx + ky * 2.0 * math.pi * grid.y / grid.ly
            values += a * np.cos(phase) + b * np.sin(phase)
    values *= amplitude / max(np.max(np.abs(values)), 1e-300)
    return ScalarField(grid, values)


@pytest.fixture
def write_config(tmp_path: Path):
    """Write TOML text to tmp_path/experiment.toml and return the path."""

    def _write(text: str, name: str = "experiment.toml") -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path

    return _write
