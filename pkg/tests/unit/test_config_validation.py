"""Tests for config validation in wavecascade.config._validate."""
import copy

import pytest

from wavecascade.config import _DEFAULT, _deep_merge, _validate
from wavecascade.errors import ConfigError


def _cfg(**sections):
    base = copy.deepcopy(_DEFAULT)
    base["experiment"]["values"] = [0.1, 0.05, 0.025]
    return _deep_merge(base, sections)


class TestSections:
    def test_defaults_with_values_pass(self):
        _validate(_cfg())

    def test_unknown_section(self):
        with pytest.raises(ConfigError, match=r"unknown section \[solver\]"):
            _validate(_cfg(solver={"nz": 4}))

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown key integrator.tolerance"):
            _validate(_cfg(integrator={"tolerance": 1e-8}))

    def test_section_must_be_table(self):
        cfg = _cfg()
        cfg["grid"] = 64
        with pytest.raises(ConfigError, match=r"\[grid\] must be a table"):
            _validate(cfg)

    def test_all_problems_reported_together(self):
        with pytest.raises(ConfigError) as exc:
            _validate(_cfg(grid={"nx": 48}, integrator={"cg_tol": 1e-2}))
        message = str(exc.value)
        assert "grid.nx" in message
        assert "integrator.cg_tol" in message


class TestExperimentFields:
    def test_kind(self):
        with pytest.raises(ConfigError, match="experiment.kind"):
            _validate(_cfg(experiment={"kind": "plot"}))

    def test_model(self):
        with pytest.raises(ConfigError, match="experiment.model"):
            _validate(_cfg(experiment={"model": "nls"}))

    def test_preset(self):
        with pytest.raises(ConfigError, match="experiment.preset"):
            _validate(_cfg(experiment={"preset": "tsunami"}))

    def test_values_required(self):
        with pytest.raises(ConfigError, match="must not be empty"):
            _validate(_cfg(experiment={"values": []}))

    def test_values_positive(self):
        with pytest.raises(ConfigError, match="must be positive"):
            _validate(_cfg(experiment={"values": [0.1, -0.05]}))

    def test_values_numeric(self):
        with pytest.raises(ConfigError, match="list of numbers"):
            _validate(_cfg(experiment={"values": ["0.1"]}))

    def test_compare_needs_asymptotic_model(self):
        with pytest.raises(ConfigError, match="asymptotic model"):
            _validate(_cfg(experiment={"kind": "compare", "model": "water_waves"}))

    def test_horizon_positive(self):
        with pytest.raises(ConfigError, match="experiment.horizon"):
            _validate(_cfg(experiment={"horizon": 0}))


class TestGridAndInitialData:
    @pytest.mark.parametrize("n", [4, 48, True, 64.0])
    def test_grid_power_of_two(self, n):
        with pytest.raises(ConfigError, match="grid.nx"):
            _validate(_cfg(grid={"nx": n}))

    def test_bump_rows(self):
        with pytest.raises(ConfigError, match="initial.zeta_bumps"):
            _validate(_cfg(initial={"zeta_bumps": [[0.1, 0.0, 0.0]]}))

    def test_mode_indices_integral(self):
        with pytest.raises(ConfigError, match="wave indices must be integers"):
            _validate(_cfg(initial={"zeta_modes": [[0.1, 1.5, 0]]}))

    def test_valid_modes(self):
        _validate(_cfg(initial={"zeta_modes": [[0.1, 1, 0]], "bottom_bumps": [[0.2, 3.0, 3.0, 1.0]]}))


class TestIntegratorAndReference:
    def test_backend(self):
        with pytest.raises(ConfigError, match="integrator.backend"):
            _validate(_cfg(integrator={"backend": "boundary_integral"}))

    def test_dt_non_negative(self):
        with pytest.raises(ConfigError, match="integrator.dt"):
            _validate(_cfg(integrator={"dt": -0.1}))

    def test_string_stride(self):
        with pytest.raises(ConfigError, match="integrator.snapshot_stride"):
            _validate(_cfg(integrator={"snapshot_stride": "2"}))

    def test_reference_dt_factor(self):
        with pytest.raises(ConfigError, match="reference.dt_factor"):
            _validate(_cfg(reference={"dt_factor": 0}))

    def test_taylor_bracket(self):
        with pytest.raises(ConfigError, match="taylor.amplitude_low"):
            _validate(_cfg(taylor={"bisect": True, "amplitude_low": 1.0, "amplitude_high": 0.5}))
