"""Unit tests for wavecascade.harness.comparison (fast paths only)."""

import math
import threading

import numpy as np
import pytest

from wavecascade.config import _DEFAULT, _deep_merge, build_experiment
from wavecascade.errors import ConfigError
from wavecascade.harness.comparison import (
    MODEL_PRESETS,
    ModelSnapshot,
    base_meta,
    check_model_preset,
    compare_point,
    dn_study_params,
    expected_compare_slope,
    expected_dn_slope,
    mismatch,
    regime_horizon,
    run_comparison,
    run_dn_study,
    run_points,
)
from wavecascade.harness.report import PointResult, write_report
from wavecascade.params import RegimeParams, RegimePreset
from wavecascade.spectral import PeriodicGrid, VectorField, l2_norm
from wavecascade.waterwaves import SurfaceState


def _cfg(**sections):
    return build_experiment(_deep_merge(_DEFAULT, sections))


class TestModelPresets:
    def test_allowed_pairs(self):
        for model, presets in MODEL_PRESETS.items():
            for preset in presets:
                check_model_preset(model, preset)

    def test_incompatible_pair(self):
        with pytest.raises(ConfigError, match="cannot be compared under preset 'serre'"):
            check_model_preset("kp", RegimePreset.SERRE)

    def test_water_waves_is_not_a_model(self):
        with pytest.raises(ConfigError, match="not an asymptotic model"):
            check_model_preset("water_waves", RegimePreset.GREEN_NAGHDI)


class TestHorizon:
    def test_horizons(self):
        p = RegimeParams(0.25, 0.04)
        assert regime_horizon("green_naghdi", RegimePreset.GREEN_NAGHDI, p, 2.0) == 2.0
        assert regime_horizon("green_naghdi", RegimePreset.SERRE, p, 2.0) == pytest.approx(10.0)
        assert regime_horizon("kp", RegimePreset.KP_WEAKLY_TRANSVERSE, p, 2.0) == pytest.approx(8.0)
        assert regime_horizon("full_dispersion", RegimePreset.FULL_DISPERSION, p, 2.0) == pytest.approx(2.0 / p.steepness)


class TestExpectedSlopes:
    @pytest.mark.parametrize(
        "model,preset,slope",
        [
            ("shallow_water", RegimePreset.SHALLOW_WATER, 1.0),
            ("shallow_water", RegimePreset.SERRE, 0.5),
            ("green_naghdi", RegimePreset.GREEN_NAGHDI, 2.0),
            ("green_naghdi", RegimePreset.SERRE, 1.5),
            ("boussinesq", RegimePreset.BOUSSINESQ_LONG_WAVE, 2.0),
            ("full_dispersion", RegimePreset.FULL_DISPERSION, 1.0),
            ("kp", RegimePreset.KP_WEAKLY_TRANSVERSE, None),
        ],
    )
    def test_compare(self, model, preset, slope):
        assert expected_compare_slope(model, preset) == slope

    def test_dn(self):
        assert expected_dn_slope("shallow1", 1, "mu") == 2.0
        assert expected_dn_slope("shallow2", 1, "mu") == 3.0
        assert expected_dn_slope("small_amplitude", 3, "epsilon") == 4.0
        assert expected_dn_slope("shallow1", 1, "epsilon") is None

    def test_dn_study_params(self):
        cfg = _cfg(experiment={"kind": "dn_study", "values": [0.1]}, dn_study={"vary": "epsilon", "mu": 2.0})
        p = dn_study_params(cfg, 0.1)
        assert (p.epsilon, p.mu, p.beta) == (0.1, 2.0, 0.0)
        bumpy = _cfg(
            experiment={"kind": "dn_study", "values": [0.1]},
            initial={"bottom_bumps": [[0.2, 3.0, 3.0, 0.5]]},
            dn_study={"vary": "mu"},
        )
        assert dn_study_params(bumpy, 0.1).beta == 1.0


class TestMismatch:
    def test_errors(self):
        grid = PeriodicGrid(16, 8)
        psi = grid.field(lambda x, y: np.cos(x))
        reference = SurfaceState(grid.zeros(), psi)
        velocity = VectorField(grid.field(lambda x, y: -np.sin(x)), grid.zeros() + 0.5)
        approx = ModelSnapshot(0.0, grid.zeros() + 0.1, velocity)
        errors = mismatch(reference, approx, 1.0)
        assert errors["err_linf_zeta"] == pytest.approx(0.1)
        assert errors["err_linf_v"] == pytest.approx(0.5)
        assert errors["err_hs"] == pytest.approx(l2_norm(grid.zeros() + 0.1))

    def test_x_only_ignores_transverse_velocity(self):
        grid = PeriodicGrid(16, 8)
        psi = grid.field(lambda x, y: np.cos(x))
        velocity = VectorField(grid.field(lambda x, y: -np.sin(x)), grid.zeros() + 0.5)
        approx = ModelSnapshot(0.0, grid.zeros(), velocity, x_only=True)
        assert mismatch(SurfaceState(grid.zeros(), psi), approx, 1.0)["err_linf_v"] < 1e-12


class TestRunPoints:
    def test_results_in_parameter_order(self):
        cfg = _cfg(experiment={"values": [0.4, 0.2, 0.1, 0.05, 0.025]})
        params = [RegimeParams(1.0, v) for v in cfg.experiment.values]
        seen_threads = set()

        def runner(cfg, value, p, seed):
            seen_threads.add(threading.current_thread().name)
            return PointResult(param=value, values={"mu": p.mu, "seed": float(seed)})

        results = run_points(cfg, params, runner, threads=3, seed=7)
        assert [r.param for r in results] == cfg.experiment.values
        assert all(r.values["mu"] == r.param and r.values["seed"] == 7.0 for r in results)
        assert all(name.startswith("wavecascade-point") for name in seen_threads)

    def test_single_thread_runs_inline(self):
        cfg = _cfg(experiment={"values": [0.2, 0.1]})
        params = [RegimeParams(1.0, v) for v in cfg.experiment.values]
        names = []

        def runner(cfg, value, p, seed):
            names.append(threading.current_thread().name)
            return PointResult(param=value)

        run_points(cfg, params, runner, threads=1, seed=0)
        assert names == [threading.current_thread().name] * 2


DRY_BED = {
    "experiment": {
        "kind": "compare",
        "preset": "shallow_water",
        "model": "shallow_water",
        "values": [0.2, 0.1, 0.05],
    },
    "grid": {"nx": 16, "ny": 8},
    "initial": {"zeta_bumps": [[-2.0, 3.0, 3.0, 0.5]]},
}


class TestFailures:
    def test_degenerate_point_is_flagged(self):
        cfg = _cfg(**DRY_BED)
        result = compare_point(cfg, 0.2, RegimeParams(1.0, 0.2, beta=1.0), seed=0)
        assert result.failed
        assert result.failure["kind"] == "degenerate_geometry"
        assert result.failure["min_depth"] < 0.1

    def test_all_points_failed(self):
        report = run_comparison(_cfg(**DRY_BED))
        assert report.failed_params == [0.2, 0.1, 0.05]
        assert report.slope is None
        assert "at least 3" in report.no_fit_reason
        assert report.passes() is False
        assert report.meta["reference_self_error"] == "nan"


class TestMeta:
    def test_base_meta(self):
        cfg = _cfg(
            experiment={"kind": "compare", "preset": "boussinesq_long_wave", "model": "boussinesq", "values": [0.1]},
        )
        meta = base_meta(cfg, threads=2, seed=5)
        assert meta["dealias"] == "true"
        assert meta["grid"] == "64x8"
        assert meta["threads"] == "2"
        assert meta["seed"] == "5"
        assert meta["values"] == "0.1"
        assert meta["backend"].startswith("elliptic")
        assert len(meta["build_id"]) == 12
        assert meta["boussinesq_a"].count(";") == 3
        assert "dn_expansion" not in meta


class TestDnStudy:
    def test_shallow1_remainder_rate(self):
        cfg = _cfg(
            experiment={"kind": "dn_study", "values": [0.2, 0.1, 0.05]},
            grid={"nx": 16, "ny": 8},
            initial={"psi_modes": [[1.0, 1, 0]]},
            dn_study={"expansion": "shallow1", "vary": "mu"},
        )
        report = run_dn_study(cfg, threads=2)
        errors = report.series("error_hs")
        # flat strip: remainder of mu k^2 against sqrt(mu) k tanh(sqrt(mu) k) on cos x,
        # whose H^s norm on the 2pi torus is 2^(s/2) pi sqrt(2) per unit amplitude
        s = cfg.experiment.sobolev_index
        for mu, err in zip(cfg.experiment.values, errors):
            exact = math.sqrt(mu) * math.tanh(math.sqrt(mu))
            assert err == pytest.approx(2.0 ** (s / 2.0) * math.pi * math.sqrt(2.0) * (mu - exact), rel=1e-5)
        assert report.fit_column == "error_hs"
        assert report.expected_slope == 2.0
        assert report.passes() is True

    def test_csv_columns(self, tmp_path):
        cfg = _cfg(
            experiment={"kind": "dn_study", "values": [0.2, 0.1, 0.05]},
            grid={"nx": 16, "ny": 8},
            initial={"psi_modes": [[1.0, 1, 0]]},
            dn_study={"expansion": "shallow1", "vary": "mu"},
        )
        csv_path, _ = write_report(run_dn_study(cfg), tmp_path)
        text = csv_path.read_text()
        body = [line.split(",") for line in text.splitlines() if not line.startswith("#")]
        assert body[0] == ["param", "error_hs", "slope_running"]
        assert body[1][2] == "nan"
        assert [float(row[2]) for row in body[2:]] == pytest.approx([2.0, 2.0], abs=0.3)
        assert "# fit_column=error_hs" in text
