"""Monte Carlo orchestration: trials, parameter sweeps, SM-vs-BS comparison.

Every sweep cell gets a recorded 64-bit seed derived from the base seed
and the axis index only, so the two algorithms and the two baseline
modes at one axis point share scenarios: vehicle layouts are then
identical across modes for the same trial index, which makes the SM-vs-BS
comparison paired. Trials remain bit-reproducible from (config,
algorithm, trial_index) alone.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

import json

import numpy as np

from v2nsim.association import associate_with_links
from v2nsim.channel import LinkTable
from v2nsim.config import (
    ALGORITHMS,
    ALGO_MAXSNR,
    MODES,
    MODE_SM,
    MODE_BS,
    ScenarioConfig,
    config_from_dict,
)
from v2nsim.errors import ConfigError
from v2nsim.metrics import MetricsSummary, merge_summaries, summarize
from v2nsim.topology import build_scenario

_STREAM_SCENARIO = 0
_STREAM_FADING = 1
_CELL_TAG = 0x5EED


def _apply_tx_power_mw(cfg: ScenarioConfig, value: float) -> ScenarioConfig:
    if value <= 0:
        raise ConfigError("tx power in mW must be positive")
    return cfg.replace(tx_power_dbm=10.0 * math.log10(value))


def _apply_vehicles_per_road(cfg: ScenarioConfig, value: float) -> ScenarioConfig:
    return cfg.replace(vehicles_per_road=int(value))


def _apply_sms_per_plot(cfg: ScenarioConfig, value: float) -> ScenarioConfig:
    return cfg.replace(sms_per_plot=int(value))


def _apply_plot_size_m(cfg: ScenarioConfig, value: float) -> ScenarioConfig:
    return cfg.replace(plot_size_m=float(value))


AXES: dict[str, Callable[[ScenarioConfig, float], ScenarioConfig]] = {
    "tx_power_mw": _apply_tx_power_mw,
    "vehicles_per_road": _apply_vehicles_per_road,
    "sms_per_plot": _apply_sms_per_plot,
    "plot_size_m": _apply_plot_size_m,
}


@dataclass(frozen=True)
class SweepSpec:
    """One experiment grid: axis values x algorithms x baseline modes."""

    base: ScenarioConfig
    axis: str
    values: tuple[float, ...]
    algorithms: tuple[str, ...] = (ALGO_MAXSNR,)
    modes: tuple[str, ...] = (MODE_SM,)
    trials_per_point: int = 200

    def __post_init__(self) -> None:
        if self.axis not in AXES:
            raise ConfigError(f"unknown sweep axis: {self.axis!r}; expected one of {sorted(AXES)}")
        if not self.values:
            raise ConfigError("sweep values must be non-empty")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ConfigError("sweep values must be strictly increasing")
        for algo in self.algorithms:
            if algo not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm: {algo!r}")
        if not self.algorithms:
            raise ConfigError("at least one algorithm required")
        for mode in self.modes:
            if mode not in MODES:
                raise ConfigError(f"unknown mode: {mode!r}")
        if not self.modes:
            raise ConfigError("at least one mode required")
        if self.trials_per_point < 1:
            raise ConfigError("trials_per_point must be >= 1")

    def to_dict(self) -> dict[str, Any]:
        return {
            "base": self.base.to_dict(),
            "axis": self.axis,
            "values": list(self.values),
            "algorithms": list(self.algorithms),
            "modes": list(self.modes),
            "trials_per_point": self.trials_per_point,
        }


def sweep_spec_from_dict(data: dict[str, Any]) -> SweepSpec:
    """Parse a sweep spec dict; unknown keys are fatal, like configs."""
    if not isinstance(data, dict):
        raise ConfigError("sweep spec must be a JSON object")
    known = {"base", "axis", "values", "algorithms", "modes", "trials_per_point"}
    for key in data:
        if key not in known:
            raise ConfigError(f"unknown sweep spec key: {key!r}")
    if "axis" not in data or "values" not in data:
        raise ConfigError("sweep spec requires 'axis' and 'values'")
    base = config_from_dict(data.get("base", {}))
    return SweepSpec(
        base=base,
        axis=str(data["axis"]),
        values=tuple(float(v) for v in data["values"]),
        algorithms=tuple(data.get("algorithms", [ALGO_MAXSNR])),
        modes=tuple(data.get("modes", [base.baseline_mode])),
        trials_per_point=int(data.get("trials_per_point", 200)),
    )


def load_sweep_spec(path: str | Path) -> SweepSpec:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return sweep_spec_from_dict(data)


def cell_seed(base_seed: int, axis_index: int) -> int:
    """Stable 64-bit seed for one axis point, shared by algorithms/modes."""
    ss = np.random.SeedSequence([_CELL_TAG, base_seed, axis_index])
    return int(ss.generate_state(1, np.uint64)[0])


def trial_rngs(seed: int, trial_index: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent (scenario, fading) generators for one trial."""
    scenario_rng = np.random.default_rng(np.random.SeedSequence([seed, trial_index, _STREAM_SCENARIO]))
    fading_rng = np.random.default_rng(np.random.SeedSequence([seed, trial_index, _STREAM_FADING]))
    return scenario_rng, fading_rng


def run_trial(config: ScenarioConfig, algorithm: str, trial_index: int) -> MetricsSummary:
    """Build one scenario, associate every vehicle, and summarize.

    Bit-reproducible from (config, algorithm, trial_index); the scenario
    and fading draws do not depend on the algorithm, so algorithm
    comparisons at equal inputs are paired.
    """
    scenario_rng, fading_rng = trial_rngs(config.seed, trial_index)
    scenario = build_scenario(config, scenario_rng)
    links = LinkTable(scenario, fading_rng)
    paths = associate_with_links(scenario, algorithm, links)
    return summarize(paths, config)


@dataclass(frozen=True)
class CellResult:
    """Merged metrics (or the recorded failure) of one sweep grid cell."""

    axis: str
    axis_value: float
    algorithm: str
    mode: str
    seed: int
    n_trials: int
    summary: MetricsSummary | None
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    cells: list[CellResult]

    def cell(self, axis_value: float, algorithm: str, mode: str) -> CellResult:
        for c in self.cells:
            if c.axis_value == axis_value and c.algorithm == algorithm and c.mode == mode:
                return c
        raise KeyError(f"no cell for ({axis_value}, {algorithm}, {mode})")

    def seed_schedule(self) -> list[dict[str, Any]]:
        return [
            {
                "axis": c.axis,
                "axis_value": c.axis_value,
                "algorithm": c.algorithm,
                "mode": c.mode,
                "seed": c.seed,
                "n_trials": c.n_trials,
            }
            for c in self.cells
        ]


def _cell_config(spec: SweepSpec, axis_index: int, mode: str) -> ScenarioConfig:
    cfg = AXES[spec.axis](spec.base, spec.values[axis_index])
    return cfg.replace(baseline_mode=mode, seed=cell_seed(spec.base.seed, axis_index))


def _run_cell_trial(args: tuple[ScenarioConfig, str, int]) -> tuple[str, Any]:
    config, algorithm, trial_index = args
    try:
        return "ok", run_trial(config, algorithm, trial_index)
    except Exception as exc:  # carried back to the parent as a cell error
        return "err", f"{type(exc).__name__}: {exc}"


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Run every grid cell; cell-level failures are recorded, not fatal.

    With workers > 1 the flattened (cell, trial) grid runs on a process
    pool; summaries are merged in trial order, so results are identical to
    the sequential run.
    """
    cell_keys: list[tuple[int, str, str]] = [
        (axis_index, algorithm, mode)
        for axis_index in range(len(spec.values))
        for algorithm in spec.algorithms
        for mode in spec.modes
    ]
    configs = {key: _cell_config(spec, key[0], key[2]) for key in cell_keys}
    tasks = [(key, trial) for key in cell_keys for trial in range(spec.trials_per_point)]
    args = [(configs[key], key[1], trial) for key, trial in tasks]

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_cell_trial, args, chunksize=4))
    else:
        outcomes = [_run_cell_trial(a) for a in args]

    per_cell: dict[tuple[int, str, str], list[MetricsSummary]] = {k: [] for k in cell_keys}
    cell_errors: dict[tuple[int, str, str], str] = {}
    for (key, _trial), (status, payload) in zip(tasks, outcomes):
        if status == "ok":
            per_cell[key].append(payload)
        else:
            cell_errors.setdefault(key, payload)

    cells = [
        _finish_cell(spec, key, configs[key], summaries=per_cell[key], error=cell_errors.get(key))
        for key in cell_keys
    ]
    return SweepResult(spec=spec, cells=cells)


def _finish_cell(
    spec: SweepSpec,
    key: tuple[int, str, str],
    config: ScenarioConfig,
    summaries: list[MetricsSummary] | None = None,
    error: str | None = None,
) -> CellResult:
    axis_index, algorithm, mode = key
    merged = None
    if error is None:
        try:
            merged = merge_summaries(summaries)
        except Exception as exc:
            error = f"{type(exc).__name__}: {exc}"
    return CellResult(
        axis=spec.axis,
        axis_value=spec.values[axis_index],
        algorithm=algorithm,
        mode=mode,
        seed=config.seed,
        n_trials=spec.trials_per_point,
        summary=merged,
        error=error,
    )


def compare_sm_vs_bs(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Paired SM/BS sweep: per trial index, both modes see the same vehicles."""
    paired = SweepSpec(
        base=spec.base,
        axis=spec.axis,
        values=spec.values,
        algorithms=spec.algorithms,
        modes=(MODE_SM, MODE_BS),
        trials_per_point=spec.trials_per_point,
    )
    return run_sweep(paired, workers=workers)
