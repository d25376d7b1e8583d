"""UMi street-canyon channel model: path loss, shadow fading, SNR, capacity.

Path loss follows the 3GPP urban-micro street-canyon model. Below the
breakpoint distance the LOS loss rises at 21 dB/decade, above it at
40 dB/decade with a breakpoint correction; the NLOS loss is the maximum
of the LOS term and the dedicated NLOS expression. The returned loss is
the maximum of the LOS and NLOS branches, and the shadow-fading sigma
follows whichever branch that maximum selected (4 dB LOS, 7.82 dB NLOS).

The model is specified for 2D distances between 10 m and 5 km;
evaluation distances below 10 m are clamped to 10 m, distances beyond
5 km raise ModelRangeError.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from v2nsim.config import MODE_BS, ScenarioConfig
from v2nsim.errors import ModelRangeError
from v2nsim.topology import Node, ROLE_BS, ROLE_VEHICLE, Scenario

SPEED_OF_LIGHT_M_S = 299_792_458.0
MIN_MODEL_D2D_M = 10.0
MAX_MODEL_D2D_M = 5_000.0
DEFAULT_H_E_M = 1.0
SIGMA_SF_LOS_DB = 4.0
SIGMA_SF_NLOS_DB = 7.82

BRANCH_LOS = "LOS"
BRANCH_NLOS = "NLOS"


@dataclass(frozen=True)
class PathLossParams:
    """Geometry and frequency inputs of the path-loss model."""

    fc_ghz: float
    h_tx_m: float
    h_rx_m: float
    h_e_m: float = DEFAULT_H_E_M
    sigma_sf_los_db: float = SIGMA_SF_LOS_DB
    sigma_sf_nlos_db: float = SIGMA_SF_NLOS_DB


@dataclass(frozen=True)
class LinkBudget:
    """One directed wireless link, fully evaluated."""

    tx_id: str
    rx_id: str
    d2d_m: float
    d3d_m: float
    pl_db: float  # pre-fading path loss
    sf_db: float  # shadow-fading draw
    pr_dbm: float
    snr_db: float
    snr_linear: float
    capacity_bps: float
    reliable: bool
    sensitivity_used_dbm: float


def breakpoint_distance(params: PathLossParams) -> float:
    """Breakpoint distance 4*h'_tx*h'_rx*fc/c with effective antenna heights."""
    h_tx_eff = params.h_tx_m - params.h_e_m
    h_rx_eff = params.h_rx_m - params.h_e_m
    if h_tx_eff <= 0 or h_rx_eff <= 0:
        raise ValueError(
            f"effective antenna heights must be positive "
            f"(h_tx'={h_tx_eff} m, h_rx'={h_rx_eff} m with h_E={params.h_e_m} m)"
        )
    return 4.0 * h_tx_eff * h_rx_eff * params.fc_ghz * 1e9 / SPEED_OF_LIGHT_M_S


def _los_nlos_db(
    d2d: np.ndarray | float, params: PathLossParams
) -> tuple[np.ndarray | float, np.ndarray | float]:
    """LOS and NLOS' losses at the (already clamped) 2D distance."""
    dh2 = (params.h_tx_m - params.h_rx_m) ** 2
    d3d = np.sqrt(np.square(d2d) + dh2)
    log_d3d = np.log10(d3d)
    log_fc = math.log10(params.fc_ghz)

    d_bp = breakpoint_distance(params)
    pl1 = 32.4 + 21.0 * log_d3d + 20.0 * log_fc
    pl2 = 32.4 + 40.0 * log_d3d + 20.0 * log_fc - 9.5 * math.log10(d_bp**2 + dh2)
    pl_los = np.where(d2d <= d_bp, pl1, pl2)

    h_ut = min(params.h_tx_m, params.h_rx_m)  # the user-terminal (vehicle) end
    pl_nlos = 35.3 * log_d3d + 22.4 + 21.3 * log_fc - 0.3 * (h_ut - 1.5)
    return pl_los, pl_nlos


def _clamp_d2d(d2d: np.ndarray | float) -> np.ndarray | float:
    if np.any(np.asarray(d2d) > MAX_MODEL_D2D_M):
        raise ModelRangeError(f"2D distance beyond the {MAX_MODEL_D2D_M / 1000:.0f} km model range")
    return np.maximum(d2d, MIN_MODEL_D2D_M)


def pathloss_components(d2d_m: float, params: PathLossParams) -> tuple[float, float]:
    """(LOS, NLOS') losses in dB at the clamped 2D distance, before the max."""
    d2d = float(_clamp_d2d(float(d2d_m)))
    pl_los, pl_nlos = _los_nlos_db(d2d, params)
    return float(pl_los), float(pl_nlos)


def pathloss_umi(d2d_m: float, d3d_m: float, params: PathLossParams) -> float:
    """Pre-fading UMi path loss in dB: max of the LOS and NLOS branches.

    ``d3d_m`` is accepted for interface symmetry but recomputed from the
    clamped 2D distance so that sub-10 m links evaluate at the model floor.
    """
    del d3d_m  # derived from the clamped d2d and the antenna heights
    pl_los, pl_nlos = pathloss_components(d2d_m, params)
    return max(pl_los, pl_nlos)


def fading_branch(d2d_m: float, params: PathLossParams) -> str:
    """Which branch the path-loss max selected (ties resolve to LOS)."""
    d2d = float(_clamp_d2d(float(d2d_m)))
    pl_los, pl_nlos = _los_nlos_db(d2d, params)
    return BRANCH_NLOS if pl_nlos > pl_los else BRANCH_LOS


def draw_shadow_fading(params: PathLossParams, branch: str, rng: np.random.Generator) -> float:
    """One zero-mean normal shadow-fading draw for the given branch."""
    sigma = params.sigma_sf_nlos_db if branch == BRANCH_NLOS else params.sigma_sf_los_db
    return float(rng.normal(0.0, sigma))


def noise_power_dbm(noise_density_dbm_hz: float, bandwidth_hz: float) -> float:
    """Integrated noise power over the channel bandwidth."""
    return noise_density_dbm_hz + 10.0 * math.log10(bandwidth_hz)


def capacity_bps(snr_linear: float, bandwidth_hz: float) -> float:
    """Shannon capacity BW * log2(1 + SNR) in bits per second."""
    if snr_linear < 0:
        raise ValueError(f"SNR must be non-negative, got {snr_linear}")
    return bandwidth_hz * math.log2(1.0 + snr_linear)


def _sensitivity_for(tx: Node, rx: Node, config: ScenarioConfig) -> float:
    if tx.role == ROLE_VEHICLE and rx.role == ROLE_VEHICLE:
        return config.sensitivity_v2v_dbm
    if ROLE_BS in (tx.role, rx.role):
        return config.sensitivity_v2i_bs_dbm
    return config.sensitivity_v2i_dbm


def link_budget(tx: Node, rx: Node, config: ScenarioConfig, rng: np.random.Generator) -> LinkBudget:
    """Evaluate one directed link with a fresh shadow-fading draw."""
    d2d = math.hypot(tx.x_m - rx.x_m, tx.y_m - rx.y_m)
    d3d = math.hypot(d2d, tx.height_m - rx.height_m)
    params = PathLossParams(config.carrier_freq_ghz, tx.height_m, rx.height_m)
    pl = pathloss_umi(d2d, d3d, params)
    sf = draw_shadow_fading(params, fading_branch(d2d, params), rng)
    return _budget_from_parts(tx, rx, d2d, d3d, pl, sf, config)


def _budget_from_parts(
    tx: Node,
    rx: Node,
    d2d: float,
    d3d: float,
    pl: float,
    sf: float,
    config: ScenarioConfig,
) -> LinkBudget:
    pr = config.tx_power_dbm - (pl + sf)
    snr_db = pr - config.noise_power_dbm
    snr_linear = 10.0 ** (snr_db / 10.0)
    sensitivity = _sensitivity_for(tx, rx, config)
    return LinkBudget(
        tx_id=tx.id,
        rx_id=rx.id,
        d2d_m=d2d,
        d3d_m=d3d,
        pl_db=pl,
        sf_db=sf,
        pr_dbm=pr,
        snr_db=snr_db,
        snr_linear=snr_linear,
        capacity_bps=capacity_bps(snr_linear, config.bandwidth_hz),
        reliable=pr > sensitivity,
        sensitivity_used_dbm=sensitivity,
    )


class LinkTable:
    """All directed link budgets of one trial, drawn once and cached.

    Shadow fading is drawn per directed node pair (vehicle->infrastructure
    first, then vehicle->vehicle), so the SNR a vehicle observes while
    scanning candidates is the SNR used for the reliability check and the
    metrics. Read-only after construction; safe to share across path
    computations within a trial.
    """

    def __init__(self, scenario: Scenario, rng: np.random.Generator):
        self.scenario = scenario
        cfg = scenario.config
        self.config = cfg
        vehicles = scenario.vehicles
        infra = scenario.infra
        self.n_vehicles = len(vehicles)
        self.n_infra = len(infra)

        vxy = np.array([(n.x_m, n.y_m) for n in vehicles], dtype=float).reshape(-1, 2)
        ixy = np.array([(n.x_m, n.y_m) for n in infra], dtype=float).reshape(-1, 2)
        h_v = cfg.h_vehicle_m
        h_i = cfg.h_bs_m if cfg.baseline_mode == MODE_BS else cfg.h_sm_m

        self._params_vi = PathLossParams(cfg.carrier_freq_ghz, h_v, h_i)
        self._params_vv = PathLossParams(cfg.carrier_freq_ghz, h_v, h_v)

        self.d2_vi = np.hypot(vxy[:, 0:1] - ixy[None, :, 0], vxy[:, 1:2] - ixy[None, :, 1])
        self.d2_vv = np.hypot(vxy[:, 0:1] - vxy[None, :, 0], vxy[:, 1:2] - vxy[None, :, 1])
        self.d3_vi = np.sqrt(self.d2_vi**2 + (h_v - h_i) ** 2)
        self.d3_vv = self.d2_vv  # equal heights: d3 == d2, shared read-only

        self.pl_vi, sigma_vi = self._pathloss_and_sigma(self.d2_vi, self._params_vi)
        self.pl_vv, sigma_vv = self._pathloss_and_sigma(self.d2_vv, self._params_vv)
        self.sf_vi = rng.standard_normal(self.d2_vi.shape) * sigma_vi
        self.sf_vv = rng.standard_normal(self.d2_vv.shape) * sigma_vv

        self.pr_vi = cfg.tx_power_dbm - (self.pl_vi + self.sf_vi)
        self.pr_vv = cfg.tx_power_dbm - (self.pl_vv + self.sf_vv)

        self.noise_dbm = cfg.noise_power_dbm
        self.sens_infra_dbm = cfg.sensitivity_infra_dbm
        self.sens_v2v_dbm = cfg.sensitivity_v2v_dbm

    @staticmethod
    def _pathloss_and_sigma(
        d2d: np.ndarray, params: PathLossParams
    ) -> tuple[np.ndarray, np.ndarray]:
        d2c = _clamp_d2d(d2d)
        pl_los, pl_nlos = _los_nlos_db(d2c, params)
        nlos_wins = pl_nlos > pl_los
        sigma = np.where(nlos_wins, params.sigma_sf_nlos_db, params.sigma_sf_los_db)
        return np.maximum(pl_los, pl_nlos), sigma

    def budget_vi(self, v: int, j: int) -> LinkBudget:
        """Budget of the vehicle v -> infrastructure j link."""
        return _budget_from_parts(
            self.scenario.vehicles[v],
            self.scenario.infra[j],
            float(self.d2_vi[v, j]),
            float(self.d3_vi[v, j]),
            float(self.pl_vi[v, j]),
            float(self.sf_vi[v, j]),
            self.config,
        )

    def budget_vv(self, v: int, k: int) -> LinkBudget:
        """Budget of the vehicle v -> vehicle k link."""
        return _budget_from_parts(
            self.scenario.vehicles[v],
            self.scenario.vehicles[k],
            float(self.d2_vv[v, k]),
            float(self.d3_vv[v, k]),
            float(self.pl_vv[v, k]),
            float(self.sf_vv[v, k]),
            self.config,
        )
