"""Unit tests for wavecascade.harness.initial_data."""

import logging
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from wavecascade.errors import DegenerateGeometryError
from wavecascade.harness.initial_data import (
    cosine_modes,
    gaussian_bumps,
    make_bottom,
    make_initial_data,
    smooth_noise,
    spectral_smoothness,
)
from wavecascade.params import RegimeParams
from wavecascade.schema import InitialDataSpec
from wavecascade.spectral import PeriodicGrid, mean

G = PeriodicGrid(32, 8)
P = RegimeParams(0.5, 0.5, beta=0.5)


class TestBuilders:
    def test_bump_peak_and_periodicity(self):
        u = gaussian_bumps(G, [(0.7, 0.0, 0.0, 0.5)])
        assert u.values[0, 0] == pytest.approx(0.7)
        # the minimum image wraps the bump across x = 0
        assert u.values[1, 0] == pytest.approx(u.values[-1, 0])

    def test_modes_use_grid_wave_indices(self):
        grid = PeriodicGrid(16, 8, 4.0 * math.pi, 2.0 * math.pi)
        u = cosine_modes(grid, [(0.2, 2, 1)])
        assert_allclose(u.values, 0.2 * np.cos(grid.x + grid.y), atol=1e-12)

    def test_noise_is_seeded_and_scaled(self):
        a = smooth_noise(G, 0.05, seed=7)
        b = smooth_noise(G, 0.05, seed=7)
        c = smooth_noise(G, 0.05, seed=8)
        assert_allclose(a.values, b.values)
        assert not np.allclose(a.values, c.values)
        assert a.max_abs() == pytest.approx(0.05)
        assert abs(mean(a)) < 1e-15
        assert smooth_noise(G, 0.0, seed=7).max_abs() == 0.0

    def test_smoothness_of_resolved_and_nyquist_fields(self):
        assert spectral_smoothness(cosine_modes(G, [(1.0, 2, 0)])) < 1e-20
        assert spectral_smoothness(cosine_modes(G, [(1.0, 15, 0)])) == pytest.approx(1.0)
        assert spectral_smoothness(G.zeros()) == 0.0


class TestMakeInitialData:
    def test_psi_has_zero_mean(self):
        spec = InitialDataSpec(zeta_modes=[(0.1, 1, 0)], psi_modes=[(0.3, 1, 1)], psi_bumps=[(0.05, 1.0, 3.0, 1.5)], noise=0.01)
        zeta0, psi0 = make_initial_data(spec, G, P, seed=3)
        assert abs(mean(psi0)) < 1e-14
        assert zeta0.max_abs() == pytest.approx(0.1)

    def test_bottom(self):
        spec = InitialDataSpec(bottom_modes=[(0.2, 1, 0)])
        assert spec.has_bottom
        assert make_bottom(spec, G).max_abs() == pytest.approx(0.2)
        assert not InitialDataSpec().has_bottom

    def test_rejects_shallow_depth(self):
        spec = InitialDataSpec(bottom_modes=[(1.9, 1, 0)])
        with pytest.raises(DegenerateGeometryError, match="below h0"):
            make_initial_data(spec, G, P)

    def test_warns_on_underresolved_data(self, caplog):
        spec = InitialDataSpec(zeta_modes=[(0.1, 15, 0)])
        with caplog.at_level(logging.WARNING, logger="wavecascade.initial_data"):
            make_initial_data(spec, G, P)
        assert "zeta0 carries energy beyond the dealiasing band" in caplog.text
