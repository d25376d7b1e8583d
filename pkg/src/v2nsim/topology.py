"""Suburban grid world: plots, streets, vehicles, smart meters, base stations.

The grid tiles square plots from the origin on a pitch of
``plot_size_m + street_width_m``; the street after each plot row/column
contributes one full-length road. Any leftover margin at the far edge
stays as border street. All placement is deterministic given the
caller-supplied random generator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from v2nsim.config import MODE_BS, ScenarioConfig
from v2nsim.errors import ConfigError, InfeasibleDensityError

ROLE_VEHICLE = "vehicle"
ROLE_SM = "sm"
ROLE_BS = "bs"



@dataclass(frozen=True)
class Road:
    """One full-length street centerline."""

    axis: str  # "h": runs along x at y=center; "v": runs along y at x=center
    center_m: float
    length_m: float
    width_m: float
    index: int


@dataclass(frozen=True)
class Plot:
    """Axis-aligned square plot (lower-left corner + side)."""

    x0_m: float
    y0_m: float
    size_m: float

    def contains(self, x: float, y: float) -> bool:
        return self.x0_m <= x <= self.x0_m + self.size_m and self.y0_m <= y <= self.y0_m + self.size_m


@dataclass(frozen=True)
class GridLayout:
    plots: list[Plot]
    roads: list[Road]
    n_plot_cols: int
    n_plot_rows: int


@dataclass(frozen=True)
class Node:
    """A vehicle, smart meter, or base station."""

    id: str
    role: str
    x_m: float
    y_m: float
    height_m: float
    index: int  # position within its role list; doubles as the tie-break order
    road_index: int | None = None  # vehicles only


@dataclass(frozen=True)
class Scenario:
    """A materialized topology snapshot plus the config that produced it."""

    config: ScenarioConfig
    layout: GridLayout
    vehicles: list[Node]
    sms: list[Node]
    bss: list[Node]

    @property
    def roads(self) -> list[Road]:
        return self.layout.roads

    @property
    def infra(self) -> list[Node]:
        """The active infrastructure nodes (SMs or BSs per baseline mode)."""
        return self.bss if self.config.baseline_mode == MODE_BS else self.sms

    @property
    def nodes(self) -> list[Node]:
        return [*self.vehicles, *self.sms, *self.bss]


def build_grid(config: ScenarioConfig) -> GridLayout:
    """Tile plots and streets over the area. Pure function of the config."""
    pitch = config.plot_size_m + config.street_width_m
    if pitch > min(config.area_width_m, config.area_height_m):
        raise ConfigError(
            f"plot pitch {pitch} m exceeds area dimensions "
            f"{config.area_width_m} x {config.area_height_m} m"
        )
    n_cols = int(config.area_width_m // pitch)
    n_rows = int(config.area_height_m // pitch)

    plots = [
        Plot(x0_m=pitch * i, y0_m=pitch * j, size_m=config.plot_size_m)
        for i in range(n_cols)
        for j in range(n_rows)
    ]

    roads: list[Road] = []
    # horizontal streets sit after each plot row and span the full width
    for j in range(n_rows):
        center = pitch * j + config.plot_size_m + config.street_width_m / 2.0
        roads.append(Road("h", center, config.area_width_m, config.street_width_m, len(roads)))
    for i in range(n_cols):
        center = pitch * i + config.plot_size_m + config.street_width_m / 2.0
        roads.append(Road("v", center, config.area_height_m, config.street_width_m, len(roads)))
    return GridLayout(plots=plots, roads=roads, n_plot_cols=n_cols, n_plot_rows=n_rows)


def place_vehicles(layout: GridLayout, config: ScenarioConfig, rng: np.random.Generator) -> list[Node]:
    """Place vehicles_per_road vehicles per road with the spacing constraint.

    Axial positions follow the uniform distribution conditioned on every
    same-road gap being at least min_vehicle_spacing_m, sampled exactly:
    sorted uniforms on the gap-shrunk interval [0, L - (n-1)*s], each
    shifted by its rank times s. (Whole-batch rejection targets the same
    distribution but its acceptance probability collapses beyond ~50
    vehicles per road.) Lateral offsets are uniform across the street.
    """
    n = config.vehicles_per_road
    spacing = config.min_vehicle_spacing_m
    vehicles: list[Node] = []
    for road in layout.roads:
        if n == 0:
            continue
        slack = road.length_m - (n - 1) * spacing
        if slack < 0:
            raise InfeasibleDensityError(
                f"{n} vehicles with {spacing} m spacing need "
                f"{(n - 1) * spacing} m but road {road.index} is {road.length_m} m"
            )
        axial = np.sort(rng.uniform(0.0, slack, n)) + spacing * np.arange(n)
        lateral = rng.uniform(road.center_m - road.width_m / 2.0, road.center_m + road.width_m / 2.0, n)
        for a, l in zip(axial, lateral):
            x, y = (float(a), float(l)) if road.axis == "h" else (float(l), float(a))
            idx = len(vehicles)
            vehicles.append(
                Node(f"v{idx}", ROLE_VEHICLE, x, y, config.h_vehicle_m, idx, road_index=road.index)
            )
    return vehicles


def place_sms(layout: GridLayout, config: ScenarioConfig, rng: np.random.Generator) -> list[Node]:
    """Drop sms_per_plot smart meters i.i.d. uniform inside each plot."""
    sms: list[Node] = []
    for plot in layout.plots:
        xs = rng.uniform(plot.x0_m, plot.x0_m + plot.size_m, config.sms_per_plot)
        ys = rng.uniform(plot.y0_m, plot.y0_m + plot.size_m, config.sms_per_plot)
        for x, y in zip(xs, ys):
            idx = len(sms)
            sms.append(Node(f"sm{idx}", ROLE_SM, float(x), float(y), config.h_sm_m, idx))
    return sms


def place_bss(config: ScenarioConfig) -> list[Node]:
    """Two base stations at the centroids of the left and right half-areas."""
    w, h = config.area_width_m, config.area_height_m
    return [
        Node("bs0", ROLE_BS, w / 4.0, h / 2.0, config.h_bs_m, 0),
        Node("bs1", ROLE_BS, 3.0 * w / 4.0, h / 2.0, config.h_bs_m, 1),
    ]


def build_scenario(config: ScenarioConfig, rng: np.random.Generator) -> Scenario:
    """Materialize the full topology for one trial.

    Vehicle placement consumes a dedicated child stream spawned before the
    infrastructure stream, so SM-mode and BS-mode scenarios built from
    identically seeded generators share vehicle coordinates exactly.
    """
    layout = build_grid(config)
    veh_rng, infra_rng = rng.spawn(2)
    vehicles = place_vehicles(layout, config, veh_rng)
    if config.baseline_mode == MODE_BS:
        sms: list[Node] = []
        bss = place_bss(config)
    else:
        sms = place_sms(layout, config, infra_rng)
        bss = []
    return Scenario(config=config, layout=layout, vehicles=vehicles, sms=sms, bss=bss)
