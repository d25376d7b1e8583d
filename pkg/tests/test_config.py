"""Configuration defaults, validation, and file round-trips."""

import json

import pytest

from v2nsim.config import (
    ConfigError,
    ScenarioConfig,
    config_from_dict,
    load_config,
    save_config,
)


def test_defaults_match_reference_tables():
    cfg = ScenarioConfig()
    assert cfg.tx_power_dbm == 23.0
    assert cfg.carrier_freq_ghz == 5.9
    assert cfg.bandwidth_hz == 1.0e7
    assert cfg.sensitivity_v2i_dbm == -92.0
    assert cfg.sensitivity_v2i_bs_dbm == -103.5
    assert cfg.sensitivity_v2v_dbm == -89.0
    assert cfg.packet_size_bits == 1600  # 200 bytes
    assert cfg.h_sm_m == 2.0
    assert cfg.h_vehicle_m == 1.5
    assert cfg.h_bs_m == 25.0
    assert cfg.area_width_m == cfg.area_height_m == 2000.0
    assert cfg.plot_size_m == 200.0
    assert cfg.street_width_m == 20.0
    assert cfg.vehicles_per_road == 30
    assert cfg.min_vehicle_spacing_m == 7.0
    assert cfg.sms_per_plot == 2


def test_noise_power_is_density_plus_bandwidth():
    cfg = ScenarioConfig()
    assert cfg.noise_power_dbm == -104.0


def test_sensitivity_tracks_baseline_mode():
    cfg = ScenarioConfig()
    assert cfg.sensitivity_infra_dbm == -92.0
    assert cfg.replace(baseline_mode="BS").sensitivity_infra_dbm == -103.5


def test_unknown_key_is_named():
    with pytest.raises(ConfigError, match="vehicals_per_road"):
        config_from_dict({"vehicals_per_road": 30})


def test_pitch_must_fit_area():
    with pytest.raises(ConfigError, match="exceeds"):
        ScenarioConfig(area_width_m=200.0, area_height_m=200.0)


@pytest.mark.parametrize(
    "changes",
    [
        {"min_vehicle_spacing_m": 0.0},
        {"vehicles_per_road": -1},
        {"sms_per_plot": -2},
        {"max_hops": 0},
        {"bandwidth_hz": 0.0},
        {"packet_size_bits": 0},
        {"baseline_mode": "LTE"},
        {"reliability_counting": "per-bit"},
        {"seed": -1},
        {"trials": 0},
        {"transfer_time_s": -1e-6},
    ],
)
def test_invariant_violations_raise(changes):
    with pytest.raises(ConfigError):
        ScenarioConfig(**changes)


def test_type_checks():
    with pytest.raises(ConfigError, match="vehicles_per_road"):
        config_from_dict({"vehicles_per_road": 1.5})
    with pytest.raises(ConfigError, match="baseline_mode"):
        config_from_dict({"baseline_mode": 3})
    with pytest.raises(ConfigError, match="tx_power_dbm"):
        config_from_dict({"tx_power_dbm": "loud"})
    with pytest.raises(ConfigError, match="seed"):
        config_from_dict({"seed": True})


def test_round_trip(tmp_path):
    cfg = ScenarioConfig(seed=99, tx_power_dbm=17.5, vehicles_per_road=12)
    path = tmp_path / "config.json"
    save_config(cfg, path)
    assert load_config(path) == cfg


def test_partial_file_gets_defaults(tmp_path):
    path = tmp_path / "partial.json"
    path.write_text(json.dumps({"seed": 5}))
    cfg = load_config(path)
    assert cfg.seed == 5
    assert cfg.tx_power_dbm == 23.0


def test_invalid_json_is_config_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{не json")
    with pytest.raises(ConfigError):
        load_config(path)
