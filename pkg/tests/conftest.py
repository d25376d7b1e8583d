"""Shared fixtures: small fast scenarios and hand-built topologies."""

from __future__ import annotations

import numpy as np
import pytest

from v2nsim.channel import LinkTable
from v2nsim.config import ScenarioConfig
from v2nsim.topology import (
    Node,
    ROLE_SM,
    ROLE_VEHICLE,
    Scenario,
    build_grid,
    build_scenario,
)


@pytest.fixture
def default_config() -> ScenarioConfig:
    return ScenarioConfig()


@pytest.fixture
def small_config() -> ScenarioConfig:
    """One-plot world: 2 roads, few vehicles, quick to simulate."""
    return ScenarioConfig(
        area_width_m=440.0,
        area_height_m=440.0,
        plot_size_m=200.0,
        street_width_m=20.0,
        vehicles_per_road=5,
        sms_per_plot=2,
        trials=3,
        seed=11,
    )


@pytest.fixture
def small_scenario(small_config) -> Scenario:
    return build_scenario(small_config, np.random.default_rng(7))


def make_line_scenario(
    config: ScenarioConfig,
    vehicle_xs: list[float],
    sm_xs: list[float],
    y: float = 210.0,
) -> Scenario:
    """Hand-built scenario with vehicles and SMs on one horizontal line."""
    layout = build_grid(config)
    vehicles = [
        Node(f"v{i}", ROLE_VEHICLE, float(x), y, config.h_vehicle_m, i, road_index=0)
        for i, x in enumerate(vehicle_xs)
    ]
    sms = [Node(f"sm{i}", ROLE_SM, float(x), y, config.h_sm_m, i) for i, x in enumerate(sm_xs)]
    return Scenario(config=config, layout=layout, vehicles=vehicles, sms=sms, bss=[])


def zero_fading(table: LinkTable) -> LinkTable:
    """Strip the shadow-fading draws so link outcomes follow geometry alone."""
    table.sf_vi = np.zeros_like(table.sf_vi)
    table.sf_vv = np.zeros_like(table.sf_vv)
    table.pr_vi = table.config.tx_power_dbm - table.pl_vi
    table.pr_vv = table.config.tx_power_dbm - table.pl_vv
    return table
