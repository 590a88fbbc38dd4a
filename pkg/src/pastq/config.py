"""Run configuration: TOML loading, validation and fingerprinting.

The file format is flat key-value pairs grouped in sections mirroring the
library modules. Unknown sections or keys are hard errors so that typos never
silently fall back to defaults.
"""

from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from dataclasses import dataclass, fields

import numpy as np

from .errors import ConfigError
from .readout import DEFAULT_BASE_FIDELITY, DEFAULT_SIGMA, DEFAULT_T1, DEFAULT_T_M

__all__ = ["RunConfig", "load_config", "DEFAULT_CONFIG"]


@dataclass
class RunConfig:
    # [experiment]
    rho00: tuple[float, ...] = (0.91, 0.535, 0.075)
    e00_centers: tuple[float, ...] = (0.916, 0.466, 0.068)
    e00_halfwidth: float = 0.05
    e00_bin_width: float = 0.1
    theta_points: int = 11
    shots: int = 50_000
    oracle: str = "quantum"
    master_seed: int = 20260823
    # [readout]
    sigma: float = DEFAULT_SIGMA
    # [fidelity]
    base_fidelity: float = DEFAULT_BASE_FIDELITY
    t_m: float = DEFAULT_T_M
    t1: float = DEFAULT_T1
    # [dynamics]
    rabi_frequency: float = 2.0 * np.pi * 1.0e6
    k: float = 0.5e6
    eta: float = 1.0
    gamma1: float = 0.0
    rho00_init: float = 1.0
    t0: float = 0.0
    t_final: float = 4.0e-6
    dt: float = 1.0e-8
    record_file: str = ""

    @property
    def theta_grid(self) -> tuple[float, ...]:
        return tuple(np.linspace(0.0, np.pi, self.theta_points))

    def fingerprint(self) -> list[str]:
        """Stable key = value lines describing the fully resolved config."""
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = "[" + ", ".join(f"{v:.9g}" for v in value) + "]"
            elif isinstance(value, float):
                value = f"{value:.9g}"
            lines.append(f"{f.name} = {value}")
        return lines


DEFAULT_CONFIG = RunConfig()

_SCHEMA = {
    "experiment": {
        "rho00": "rho00",
        "e00_centers": "e00_centers",
        "e00_halfwidth": "e00_halfwidth",
        "e00_bin_width": "e00_bin_width",
        "theta_points": "theta_points",
        "shots": "shots",
        "oracle": "oracle",
        "master_seed": "master_seed",
    },
    "readout": {"sigma": "sigma"},
    "fidelity": {"base": "base_fidelity", "t_m": "t_m", "t1": "t1"},
    "dynamics": {
        "rabi_frequency": "rabi_frequency",
        "k": "k",
        "eta": "eta",
        "gamma1": "gamma1",
        "rho00_init": "rho00_init",
        "t0": "t0",
        "t_final": "t_final",
        "dt": "dt",
        "record_file": "record_file",
    },
}


def _validate(cfg: RunConfig) -> None:
    def bad(field_name: str, message: str):
        raise ConfigError(f"{field_name}: {message}")

    if not cfg.rho00 or any(not (0.0 <= r <= 1.0) for r in cfg.rho00):
        bad("experiment.rho00", "each entry must lie in [0, 1]")
    if any(not (0.0 <= c <= 1.0) for c in cfg.e00_centers):
        bad("experiment.e00_centers", "each entry must lie in [0, 1]")
    if len(cfg.e00_centers) != len(cfg.rho00):
        bad("experiment.e00_centers", "must pair one center with each rho00 entry")
    if not (0.0 < cfg.e00_halfwidth <= 0.5):
        bad("experiment.e00_halfwidth", "must lie in (0, 0.5]")
    if not (0.0 < cfg.e00_bin_width <= 1.0):
        bad("experiment.e00_bin_width", "must lie in (0, 1]")
    if cfg.theta_points < 2:
        bad("experiment.theta_points", "must be >= 2")
    if cfg.shots < 1:
        bad("experiment.shots", "must be >= 1")
    if cfg.oracle not in ("quantum", "classical-mixture"):
        bad("experiment.oracle", "must be 'quantum' or 'classical-mixture'")
    if cfg.sigma <= 0.0:
        bad("readout.sigma", "must be > 0")
    if not (0.5 < cfg.base_fidelity <= 1.0):
        bad("fidelity.base", "must lie in (0.5, 1]")
    if cfg.t_m <= 0.0:
        bad("fidelity.t_m", "must be > 0")
    if cfg.t1 <= 0.0:
        bad("fidelity.t1", "must be > 0")
    if cfg.k < 0.0:
        bad("dynamics.k", "must be >= 0")
    if not (0.0 <= cfg.eta <= 1.0):
        bad("dynamics.eta", "must lie in [0, 1]")
    if cfg.gamma1 < 0.0:
        bad("dynamics.gamma1", "must be >= 0")
    if not (0.0 <= cfg.rho00_init <= 1.0):
        bad("dynamics.rho00_init", "must lie in [0, 1]")
    if cfg.dt <= 0.0:
        bad("dynamics.dt", "must be > 0")
    if cfg.t_final <= cfg.t0:
        bad("dynamics.t_final", "must be > dynamics.t0")


def load_config(path: str | None = None) -> RunConfig:
    """Load a TOML config file (or return validated defaults for path=None)."""
    cfg = RunConfig()
    if path is not None:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"malformed config file {path}: {exc}") from exc
        for section, entries in data.items():
            if section not in _SCHEMA:
                raise ConfigError(f"unknown config section [{section}]")
            if not isinstance(entries, dict):
                raise ConfigError(f"[{section}] must be a table of key = value pairs")
            for key, value in entries.items():
                if key not in _SCHEMA[section]:
                    raise ConfigError(f"unknown config key {section}.{key}")
                attr = _SCHEMA[section][key]
                if isinstance(value, list):
                    value = tuple(float(v) for v in value)
                default = getattr(DEFAULT_CONFIG, attr)
                if isinstance(default, bool) or (
                    isinstance(default, (int, float)) and isinstance(value, bool)
                ):
                    raise ConfigError(f"{section}.{key}: invalid value {value!r}")
                if isinstance(default, int) and not isinstance(value, int):
                    raise ConfigError(f"{section}.{key}: must be an integer")
                if isinstance(default, float) and isinstance(value, (int, float)):
                    value = float(value)
                if type(value) is not type(default):
                    raise ConfigError(
                        f"{section}.{key}: expected {type(default).__name__}, got "
                        f"{type(value).__name__}"
                    )
                setattr(cfg, attr, value)
    _validate(cfg)
    return cfg
