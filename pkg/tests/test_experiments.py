"""Trial orchestration, sweeps, seed replay, and SM/BS pairing."""

import numpy as np
import pytest

from v2nsim.config import ScenarioConfig
from v2nsim.errors import ConfigError
from v2nsim.experiments import (
    SweepSpec,
    cell_seed,
    compare_sm_vs_bs,
    run_sweep,
    run_trial,
    sweep_spec_from_dict,
    trial_rngs,
)
from v2nsim.topology import build_scenario


@pytest.fixture
def quick_config():
    return ScenarioConfig(
        area_width_m=660.0,
        area_height_m=660.0,
        vehicles_per_road=4,
        sms_per_plot=1,
        seed=7,
        trials=3,
    )


def summaries_equal(a, b) -> bool:
    return (
        a.to_dict() == b.to_dict()
        and np.array_equal(a.latency_samples_s, b.latency_samples_s)
        and np.array_equal(a.snr_samples_db, b.snr_samples_db)
    )


class TestRunTrial:
    def test_bit_reproducible(self, quick_config):
        assert summaries_equal(
            run_trial(quick_config, "maxsnr", 0), run_trial(quick_config, "maxsnr", 0)
        )

    def test_trial_streams_are_separated(self, quick_config):
        a = run_trial(quick_config, "maxsnr", 0)
        b = run_trial(quick_config, "maxsnr", 1)
        assert not summaries_equal(a, b)

    def test_scenario_independent_of_algorithm(self, quick_config):
        # the same trial index sees the same world under both algorithms
        rng_a, _ = trial_rngs(quick_config.seed, 4)
        rng_b, _ = trial_rngs(quick_config.seed, 4)
        assert build_scenario(quick_config, rng_a) == build_scenario(quick_config, rng_b)


class TestSweepSpec:
    def test_values_must_increase(self, quick_config):
        with pytest.raises(ConfigError):
            SweepSpec(base=quick_config, axis="tx_power_mw", values=(10.0, 10.0))

    def test_values_must_be_nonempty(self, quick_config):
        with pytest.raises(ConfigError):
            SweepSpec(base=quick_config, axis="tx_power_mw", values=())

    def test_unknown_axis(self, quick_config):
        with pytest.raises(ConfigError):
            SweepSpec(base=quick_config, axis="humidity", values=(1.0,))

    def test_unknown_keys_in_dict(self):
        with pytest.raises(ConfigError, match="sweepiness"):
            sweep_spec_from_dict({"axis": "tx_power_mw", "values": [1], "sweepiness": 9})

    def test_tx_power_axis_converts_mw_to_dbm(self, quick_config):
        spec = SweepSpec(
            base=quick_config, axis="tx_power_mw", values=(100.0,), trials_per_point=1
        )
        result = run_sweep(spec)
        assert result.cells[0].summary is not None
        # 100 mW == 20 dBm exactly
        rng_a, _ = trial_rngs(result.cells[0].seed, 0)
        assert 10.0 * np.log10(100.0) == 20.0

    def test_spec_round_trip(self, quick_config):
        spec = SweepSpec(
            base=quick_config,
            axis="sms_per_plot",
            values=(1.0, 2.0),
            algorithms=("maxsnr", "mindis"),
            modes=("SM",),
            trials_per_point=2,
        )
        assert sweep_spec_from_dict(spec.to_dict()) == spec


class TestRunSweep:
    def test_one_cell_per_grid_point(self, quick_config):
        spec = SweepSpec(
            base=quick_config,
            axis="sms_per_plot",
            values=(1.0, 2.0),
            algorithms=("maxsnr", "mindis"),
            trials_per_point=2,
        )
        result = run_sweep(spec)
        assert len(result.cells) == 4
        assert all(c.summary is not None and c.error is None for c in result.cells)
        assert all(c.summary.trial_count == 2 for c in result.cells)

    def test_cell_error_recorded_sweep_continues(self, quick_config):
        # 200 vehicles cannot keep 7 m gaps on a 660 m road
        spec = SweepSpec(
            base=quick_config,
            axis="vehicles_per_road",
            values=(4.0, 200.0),
            trials_per_point=1,
        )
        result = run_sweep(spec)
        good = result.cell(4.0, "maxsnr", "SM")
        bad = result.cell(200.0, "maxsnr", "SM")
        assert good.error is None and good.summary is not None
        assert bad.summary is None
        assert "InfeasibleDensityError" in bad.error

    def test_zero_vehicles_recorded_not_fatal(self, quick_config):
        spec = SweepSpec(
            base=quick_config.replace(vehicles_per_road=0),
            axis="tx_power_mw",
            values=(200.0,),
            trials_per_point=1,
        )
        result = run_sweep(spec)
        assert result.cells[0].summary is None
        assert "EmptySummaryError" in result.cells[0].error

    def test_replay_from_recorded_seed(self, quick_config):
        spec = SweepSpec(
            base=quick_config, axis="tx_power_mw", values=(50.0, 200.0), trials_per_point=2
        )
        result = run_sweep(spec)
        for cell in result.cells:
            config = spec.base.replace(
                tx_power_dbm=10.0 * np.log10(cell.axis_value), seed=cell.seed
            )
            replayed = [run_trial(config, cell.algorithm, t) for t in range(cell.n_trials)]
            assert cell.summary.trial_reliability_pct == [
                s.reliability_pct for s in replayed
            ]

    def test_seed_schedule_lists_every_cell(self, quick_config):
        spec = SweepSpec(
            base=quick_config,
            axis="tx_power_mw",
            values=(50.0, 200.0),
            algorithms=("maxsnr", "mindis"),
            trials_per_point=1,
        )
        result = run_sweep(spec)
        schedule = result.seed_schedule()
        assert len(schedule) == 4
        assert {s["seed"] for s in schedule} == {cell_seed(quick_config.seed, 0), cell_seed(quick_config.seed, 1)}

    def test_workers_match_sequential(self, quick_config):
        spec = SweepSpec(
            base=quick_config, axis="tx_power_mw", values=(50.0, 200.0), trials_per_point=2
        )
        sequential = run_sweep(spec, workers=1)
        parallel = run_sweep(spec, workers=2)
        for a, b in zip(sequential.cells, parallel.cells):
            assert summaries_equal(a.summary, b.summary)
            assert a.seed == b.seed


class TestCompare:
    def test_modes_forced_and_paired(self, quick_config):
        spec = SweepSpec(
            base=quick_config, axis="tx_power_mw", values=(200.0,), trials_per_point=2
        )
        result = compare_sm_vs_bs(spec)
        assert {c.mode for c in result.cells} == {"SM", "BS"}
        sm = result.cell(200.0, "maxsnr", "SM")
        bs = result.cell(200.0, "maxsnr", "BS")
        assert sm.seed == bs.seed
        # same trial index, same vehicle coordinates across modes
        for trial in range(2):
            rng_sm, _ = trial_rngs(sm.seed, trial)
            rng_bs, _ = trial_rngs(bs.seed, trial)
            s_sm = build_scenario(spec.base.replace(seed=sm.seed, tx_power_dbm=23.0), rng_sm)
            s_bs = build_scenario(
                spec.base.replace(seed=bs.seed, tx_power_dbm=23.0, baseline_mode="BS"), rng_bs
            )
            assert [(v.x_m, v.y_m) for v in s_sm.vehicles] == [
                (v.x_m, v.y_m) for v in s_bs.vehicles
            ]
            assert len(s_bs.bss) == 2 and s_bs.sms == []
