"""Load an experiment file (TOML) over the documented defaults."""
from __future__ import annotations

import math
import os

try:
    import tomllib
except ImportError:
    import tomli as tomllib  # type: ignore[no-redef]  # Python < 3.11 backport
from pathlib import Path
from typing import Any, Optional, Union

from pydantic import ValidationError

from wavecascade.errors import ConfigError
from wavecascade.params import RegimePreset
from wavecascade.schema import ExperimentConfig

THREADS_ENV = "WAVECASCADE_THREADS"

_KINDS = ("simulate", "compare", "sweep", "dn_study", "taylor_check")
_MODELS = ("water_waves", "shallow_water", "green_naghdi", "boussinesq", "kp", "full_dispersion")
_BACKENDS = ("elliptic", "shallow1", "shallow2", "small_amplitude")

_DEFAULT: dict[str, Any] = {
    "experiment": {
        "kind": "simulate",          # simulate | compare | sweep | dn_study | taylor_check
        "preset": "green_naghdi",    # regime preset mapping `values` to (eps, mu, gamma, beta)
        "values": [],                # small-parameter values of the sweep
        "model": "water_waves",      # model integrated against the water-waves reference
        "horizon": 1.0,              # T of the regime horizon (T, T/sqrt(mu), T/eps, T/steepness)
        "fixed_mu": 4.0,             # mu of the full_dispersion preset
        "sobolev_index": 1.5,        # s of the H^s error norm
        "h0": 0.1,                   # minimal admissible depth
        "out_dir": "wavecascade-out",
    },
    "grid": {
        "nx": 64,
        "ny": 8,
        "lx": 2.0 * math.pi,
        "ly": 2.0 * math.pi,
    },
    "initial": {
        "zeta_bumps": [],            # [amplitude, x, y, width]
        "psi_bumps": [],
        "bottom_bumps": [],
        "zeta_modes": [],            # [amplitude, kx, ky]: amplitude cos(kx x + ky y) in grid wave indices
        "psi_modes": [],
        "bottom_modes": [],
        "noise": 0.0,                # seeded smooth perturbation of psi0
    },
    "integrator": {
        "dt": 0.0,                   # 0 selects the CFL heuristic
        "cfl": 0.5,
        "dealias": True,
        "filter": False,
        "filter_order": 36,
        "snapshot_stride": 1,
        "backend": "elliptic",       # elliptic | shallow1 | shallow2 | small_amplitude
        "order": 1,                  # small_amplitude expansion order
        "nz": 24,
        "cg_tol": 1e-10,
        "cg_maxiter": 500,
    },
    "reference": {
        "dt_factor": 4,
        "nz": 32,
        "backend": "elliptic",
        "order": 3,
        "self_check": True,
    },
    "boussinesq": {
        "theta": 1.0,
        "p1": 0.0,
        "p2": 0.0,
    },
    "dn_study": {
        "expansion": "shallow1",     # shallow1 | shallow2 | small_amplitude
        "order": 1,
        "vary": "mu",                # mu | epsilon
        "mu": 1.0,
        "epsilon": 1.0,
    },
    "taylor": {
        "bisect": False,
        "amplitude_low": 0.0,
        "amplitude_high": 1.0,
        "tolerance": 1e-3,
    },
}


def _deep_merge(base: dict, override: dict) -> dict:
    result = dict(base)
    for key, val in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(val, dict):
            result[key] = _deep_merge(result[key], val)
        else:
            result[key] = val
    return result


def load_config(path: Union[str, Path]) -> dict[str, Any]:
    """Parse, merge over the defaults and validate; raises ConfigError."""
    config_path = Path(path)
    if not config_path.is_file():
        raise ConfigError(f"config file not found: {config_path}")
    try:
        with open(config_path, "rb") as f:
            user_cfg = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"cannot parse {config_path}: {e}") from e
    cfg = _deep_merge(_DEFAULT, user_cfg)
    _validate(cfg)
    return cfg


def _validate(cfg: dict[str, Any]) -> None:
    """Collect every problem so typos surface together."""
    errors: list[str] = []

    for section, values in cfg.items():
        if section not in _DEFAULT:
            errors.append(f"unknown section [{section}]")
            continue
        if not isinstance(values, dict):
            errors.append(f"[{section}] must be a table, got {type(values).__name__}")
            continue
        for key in values:
            if key not in _DEFAULT[section]:
                errors.append(f"unknown key {section}.{key}")

    experiment = _section(cfg, "experiment")
    kind = experiment.get("kind")
    if kind not in _KINDS:
        errors.append(f"experiment.kind must be one of {', '.join(_KINDS)}, got {kind!r}")
    if experiment.get("model") not in _MODELS:
        errors.append(f"experiment.model must be one of {', '.join(_MODELS)}, got {experiment.get('model')!r}")
    preset = experiment.get("preset")
    if preset not in {p.value for p in RegimePreset}:
        errors.append(f"experiment.preset {preset!r} is not a known regime preset")
    values = experiment.get("values")
    if not isinstance(values, list) or not all(_is_number(v) for v in values):
        errors.append(f"experiment.values must be a list of numbers, got {values!r}")
    elif not values:
        errors.append(f"experiment.values must not be empty for kind {kind!r}")
    elif any(v <= 0 for v in values):
        errors.append(f"experiment.values must be positive, got {values!r}")
    _check_positive_number(errors, "experiment", experiment, "horizon")
    _check_positive_number(errors, "experiment", experiment, "fixed_mu")
    _check_positive_number(errors, "experiment", experiment, "h0")
    if experiment.get("model") == "water_waves" and kind == "compare":
        errors.append("experiment.model must name an asymptotic model for kind 'compare'")

    grid = _section(cfg, "grid")
    for key in ("nx", "ny"):
        n = grid.get(key)
        if not isinstance(n, int) or isinstance(n, bool) or n < 8 or n & (n - 1):
            errors.append(f"grid.{key} must be a power of two >= 8, got {n!r}")
    _check_positive_number(errors, "grid", grid, "lx")
    _check_positive_number(errors, "grid", grid, "ly")

    initial = _section(cfg, "initial")
    for key in ("zeta_bumps", "psi_bumps", "bottom_bumps"):
        _check_rows(errors, initial, key, 4)
    for key in ("zeta_modes", "psi_modes", "bottom_modes"):
        _check_rows(errors, initial, key, 3)
        for row in initial.get(key) or []:
            if (
                isinstance(row, list) and len(row) == 3 and all(_is_number(c) for c in row)
                and not all(float(c).is_integer() for c in row[1:])
            ):
                errors.append(f"initial.{key} wave indices must be integers, got {row!r}")

    integrator = _section(cfg, "integrator")
    if integrator.get("backend") not in _BACKENDS:
        errors.append(f"integrator.backend must be one of {', '.join(_BACKENDS)}, got {integrator.get('backend')!r}")
    _check_positive_number(errors, "integrator", integrator, "cfl")
    _check_positive_int(errors, "integrator", integrator, "snapshot_stride")
    _check_positive_int(errors, "integrator", integrator, "cg_maxiter")
    _check_positive_int(errors, "integrator", integrator, "nz")
    cg_tol = integrator.get("cg_tol")
    if not _is_number(cg_tol) or not (0 < cg_tol <= 1e-4):
        errors.append(f"integrator.cg_tol must lie in (0, 1e-4], got {cg_tol!r}")
    dt = integrator.get("dt")
    if not _is_number(dt) or dt < 0:
        errors.append(f"integrator.dt must be a non-negative number, got {dt!r}")

    reference = _section(cfg, "reference")
    _check_positive_int(errors, "reference", reference, "dt_factor")
    _check_positive_int(errors, "reference", reference, "nz")

    taylor = _section(cfg, "taylor")
    low, high = taylor.get("amplitude_low"), taylor.get("amplitude_high")
    if taylor.get("bisect") and (not _is_number(low) or not _is_number(high) or low >= high):
        errors.append(f"taylor.amplitude_low must be below taylor.amplitude_high, got {low!r} and {high!r}")

    if errors:
        raise ConfigError("Invalid wavecascade config:\n  " + "\n  ".join(errors))


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _check_positive_number(errors: list[str], name: str, section: dict, key: str) -> None:
    if key in section and (not _is_number(section[key]) or section[key] <= 0):
        errors.append(f"{name}.{key} must be a positive number, got {section[key]!r}")


def _check_positive_int(errors: list[str], name: str, section: dict, key: str) -> None:
    value = section.get(key)
    if key in section and (not isinstance(value, int) or isinstance(value, bool) or value <= 0):
        errors.append(f"{name}.{key} must be a positive integer, got {value!r}")


def _check_rows(errors: list[str], section: dict, key: str, width: int) -> None:
    rows = section.get(key)
    if not isinstance(rows, list) or not all(
        isinstance(row, list) and len(row) == width and all(_is_number(c) for c in row) for row in rows
    ):
        errors.append(f"initial.{key} must be a list of [{width} numbers] rows, got {rows!r}")


def build_experiment(cfg: dict[str, Any]) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(cfg)
    except ValidationError as e:
        problems = [f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()]
        raise ConfigError("Invalid wavecascade config:\n  " + "\n  ".join(problems)) from e


def load_experiment(path: Union[str, Path]) -> ExperimentConfig:
    return build_experiment(load_config(path))


def resolve_threads(cli_value: Optional[int] = None) -> int:
    """--threads, else WAVECASCADE_THREADS, else 1."""
    if cli_value is not None:
        if cli_value <= 0:
            raise ConfigError(f"--threads must be positive, got {cli_value!r}")
        return cli_value
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return 1
    try:
        threads = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if threads <= 0:
        raise ConfigError(f"{THREADS_ENV} must be positive, got {raw!r}")
    return threads


def _section(cfg: dict[str, Any], name: str) -> dict[str, Any]:
    section = cfg.get(name)
    return section if isinstance(section, dict) else {}
