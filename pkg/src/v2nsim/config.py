"""Scenario configuration: defaults, validation, JSON load/save.

Defaults follow the IEEE 802.11p link parameters and the suburban grid
geometry used throughout the experiments (2000 m x 2000 m area, 200 m
plots, 20 m streets, 30 vehicles per road, 2 smart meters per plot).
All keys carry SI unit suffixes to keep file schemas unambiguous.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from v2nsim.errors import ConfigError

MODE_SM = "SM"
MODE_BS = "BS"
MODES = (MODE_SM, MODE_BS)

ALGO_MAXSNR = "maxsnr"
ALGO_MINDIS = "mindis"
ALGORITHMS = (ALGO_MAXSNR, ALGO_MINDIS)

COUNT_LINK = "link"
COUNT_PATH = "path"
COUNTING_MODES = (COUNT_LINK, COUNT_PATH)

_MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class ScenarioConfig:
    """Full parameter set for one simulated scenario.

    ``reliability_counting`` selects what a "wireless link" means for the
    reliability percentage: ``link`` counts every sensitivity check made
    while associating (each examined link is one trial), ``path`` counts
    each vehicle's end-to-end path as a single trial.
    """

    area_width_m: float = 2000.0
    area_height_m: float = 2000.0
    plot_size_m: float = 200.0
    street_width_m: float = 20.0
    vehicles_per_road: int = 30
    min_vehicle_spacing_m: float = 7.0
    sms_per_plot: int = 2
    tx_power_dbm: float = 23.0
    carrier_freq_ghz: float = 5.9
    bandwidth_hz: float = 1.0e7
    packet_size_bits: int = 1600
    sensitivity_v2i_dbm: float = -92.0
    sensitivity_v2i_bs_dbm: float = -103.5
    sensitivity_v2v_dbm: float = -89.0
    h_sm_m: float = 2.0
    h_vehicle_m: float = 1.5
    h_bs_m: float = 25.0
    max_hops: int = 3
    transfer_time_s: float = 0.0
    noise_density_dbm_hz: float = -174.0
    reliability_counting: str = COUNT_LINK
    baseline_mode: str = MODE_SM
    seed: int = 1
    trials: int = 200

    def __post_init__(self) -> None:
        validate_config(self)

    @property
    def noise_power_dbm(self) -> float:
        """Thermal noise power over the configured bandwidth."""
        return self.noise_density_dbm_hz + 10.0 * math.log10(self.bandwidth_hz)

    @property
    def sensitivity_infra_dbm(self) -> float:
        """V2I receiver sensitivity for the active infrastructure type."""
        if self.baseline_mode == MODE_BS:
            return self.sensitivity_v2i_bs_dbm
        return self.sensitivity_v2i_dbm

    def replace(self, **changes: Any) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ScenarioConfig)}
_INT_FIELDS = {
    "vehicles_per_road",
    "sms_per_plot",
    "packet_size_bits",
    "max_hops",
    "seed",
    "trials",
}
_STR_FIELDS = {"reliability_counting", "baseline_mode"}


def validate_config(cfg: ScenarioConfig) -> None:
    """Raise ConfigError if any invariant is violated."""

    def require(cond: bool, msg: str) -> None:
        if not cond:
            raise ConfigError(msg)

    require(cfg.area_width_m > 0 and cfg.area_height_m > 0, "area dimensions must be positive")
    require(cfg.plot_size_m > 0, "plot_size_m must be positive")
    require(cfg.street_width_m > 0, "street_width_m must be positive")
    pitch = cfg.plot_size_m + cfg.street_width_m
    require(
        pitch <= min(cfg.area_width_m, cfg.area_height_m),
        f"plot_size_m + street_width_m = {pitch} m exceeds the smaller area dimension",
    )
    require(cfg.vehicles_per_road >= 0, "vehicles_per_road must be >= 0")
    require(cfg.min_vehicle_spacing_m > 0, "min_vehicle_spacing_m must be positive")
    require(cfg.sms_per_plot >= 0, "sms_per_plot must be >= 0")
    require(cfg.max_hops >= 1, "max_hops must be >= 1")
    require(math.isfinite(cfg.sensitivity_v2i_dbm), "sensitivity_v2i_dbm must be finite")
    require(math.isfinite(cfg.sensitivity_v2i_bs_dbm), "sensitivity_v2i_bs_dbm must be finite")
    require(math.isfinite(cfg.sensitivity_v2v_dbm), "sensitivity_v2v_dbm must be finite")
    require(cfg.bandwidth_hz > 0, "bandwidth_hz must be positive")
    require(cfg.packet_size_bits > 0, "packet_size_bits must be positive")
    require(cfg.carrier_freq_ghz > 0, "carrier_freq_ghz must be positive")
    require(cfg.h_sm_m > 0 and cfg.h_vehicle_m > 0 and cfg.h_bs_m > 0, "antenna heights must be positive")
    require(cfg.transfer_time_s >= 0, "transfer_time_s must be >= 0")
    require(math.isfinite(cfg.noise_density_dbm_hz), "noise_density_dbm_hz must be finite")
    require(
        cfg.reliability_counting in COUNTING_MODES,
        f"reliability_counting must be one of {COUNTING_MODES}",
    )
    require(cfg.baseline_mode in MODES, f"baseline_mode must be one of {MODES}")
    require(0 <= cfg.seed <= _MAX_SEED, "seed must be a 64-bit unsigned integer")
    require(cfg.trials >= 1, "trials must be >= 1")


def config_from_dict(data: dict[str, Any]) -> ScenarioConfig:
    """Build a config from a JSON-compatible dict; unknown keys are fatal."""
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    kwargs: dict[str, Any] = {}
    for key, value in data.items():
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown configuration key: {key!r}")
        kwargs[key] = _coerce(key, value)
    return ScenarioConfig(**kwargs)


def _coerce(key: str, value: Any) -> Any:
    if key in _STR_FIELDS:
        if not isinstance(value, str):
            raise ConfigError(f"key {key!r} must be a string, got {type(value).__name__}")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"key {key!r} must be a number, got {type(value).__name__}")
    if key in _INT_FIELDS:
        if float(value) != int(value):
            raise ConfigError(f"key {key!r} must be an integer, got {value!r}")
        return int(value)
    return float(value)


def load_config(path: str | Path) -> ScenarioConfig:
    """Load a scenario configuration from a JSON file."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return config_from_dict(data)


def save_config(cfg: ScenarioConfig, path: str | Path) -> None:
    """Write a configuration as JSON; load_config(save_config(c)) == c."""
    Path(path).write_text(json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
