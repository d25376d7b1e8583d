"""Command-line front end, result serialization, and scenario snapshots.

Exit codes: 0 success, 1 configuration error, 2 runtime/IO error,
3 infeasible scenario (vehicle density cannot satisfy the spacing rule).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence

import v2nsim
from v2nsim.association import associate_with_links
from v2nsim.channel import LinkTable
from v2nsim.config import (
    ALGORITHMS,
    ALGO_MAXSNR,
    MODES,
    ScenarioConfig,
    config_from_dict,
    load_config,
)
from v2nsim.errors import ConfigError, EmptySummaryError, InfeasibleDensityError
from v2nsim.experiments import (
    AXES,
    SweepResult,
    SweepSpec,
    compare_sm_vs_bs,
    run_sweep,
    run_trial,
    sweep_spec_from_dict,
    trial_rngs,
)
from v2nsim.metrics import merge_summaries
from v2nsim.topology import build_scenario

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_INFEASIBLE = 3


@dataclass(frozen=True)
class ResultRow:
    """One sweep grid cell, flattened for the CSV/JSON outputs."""

    axis_name: str
    axis_value: float
    algorithm: str
    mode: str
    reliability_pct: float | None
    latency_mean_s: float | None
    latency_p95_s: float | None
    throughput_mean_bps: float | None
    pct_single_hop: float | None
    pct_multi_hop: float | None
    n_trials: int
    seed: int
    reliability_path_pct: float | None = None
    reliability_link_pct: float | None = None
    reliability_mean_of_trials_pct: float | None = None
    latency_median_s: float | None = None
    latency_mean_of_trials_s: float | None = None
    throughput_median_bps: float | None = None
    snr_mean_db: float | None = None
    snr_std_db: float | None = None
    n_vehicles: int | None = None
    n_reliable: int | None = None
    error: str | None = None


ROW_FIELDS = [f.name for f in dataclasses.fields(ResultRow)]


def rows_from_sweep(result: SweepResult) -> list[ResultRow]:
    rows = []
    for cell in result.cells:
        s = cell.summary
        if s is None:
            rows.append(
                ResultRow(
                    axis_name=cell.axis,
                    axis_value=cell.axis_value,
                    algorithm=cell.algorithm,
                    mode=cell.mode,
                    reliability_pct=None,
                    latency_mean_s=None,
                    latency_p95_s=None,
                    throughput_mean_bps=None,
                    pct_single_hop=None,
                    pct_multi_hop=None,
                    n_trials=cell.n_trials,
                    seed=cell.seed,
                    error=cell.error,
                )
            )
            continue
        rows.append(
            ResultRow(
                axis_name=cell.axis,
                axis_value=cell.axis_value,
                algorithm=cell.algorithm,
                mode=cell.mode,
                reliability_pct=s.reliability_pct,
                latency_mean_s=s.latency_mean_s,
                latency_p95_s=s.latency_p95_s,
                throughput_mean_bps=s.throughput_mean_bps,
                pct_single_hop=s.pct_single_hop,
                pct_multi_hop=s.pct_multi_hop,
                n_trials=cell.n_trials,
                seed=cell.seed,
                reliability_path_pct=s.reliability_path_pct,
                reliability_link_pct=s.reliability_link_pct,
                reliability_mean_of_trials_pct=s.reliability_mean_of_trials_pct,
                latency_median_s=s.latency_median_s,
                latency_mean_of_trials_s=s.latency_mean_of_trials_s,
                throughput_median_bps=s.throughput_median_bps,
                snr_mean_db=s.snr_mean_db,
                snr_std_db=s.snr_std_db,
                n_vehicles=s.n_vehicles,
                n_reliable=s.n_reliable,
            )
        )
    return rows


def _cell_value(value: Any) -> Any:
    """CSV cell rendering: None and NaN become empty fields."""
    if value is None:
        return ""
    if isinstance(value, float) and math.isnan(value):
        return ""
    return value


def write_results(
    rows: list[ResultRow],
    fmt: str,
    out_dir: str | Path,
    stem: str,
    metadata: dict[str, Any],
) -> list[Path]:
    """Write rows as CSV and/or JSON under out_dir; returns written paths."""
    if not rows:
        raise ValueError("no result rows to write")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc

    written: list[Path] = []
    if fmt in ("csv", "both"):
        path = out / f"{stem}.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(ROW_FIELDS)
            for row in rows:
                writer.writerow([_cell_value(getattr(row, f)) for f in ROW_FIELDS])
        written.append(path)
    if fmt in ("json", "both"):
        path = out / f"{stem}.json"
        payload = {
            "metadata": metadata,
            "rows": [dataclasses.asdict(r) for r in rows],
        }
        path.write_text(_dumps(payload) + "\n", encoding="utf-8")
        written.append(path)
    return written


def _dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=True)


def _metadata(subcommand: str, config: ScenarioConfig, extra: dict[str, Any]) -> dict[str, Any]:
    meta = {
        "tool": "v2nsim",
        "version": v2nsim.__version__,
        "subcommand": subcommand,
        "config": config.to_dict(),
    }
    meta.update(extra)
    return meta


def snapshot_payload(config: ScenarioConfig, algorithm: str, trial_index: int) -> dict[str, Any]:
    """One scenario's nodes, roads, association edges, and path chains."""
    scenario_rng, fading_rng = trial_rngs(config.seed, trial_index)
    scenario = build_scenario(config, scenario_rng)
    links = LinkTable(scenario, fading_rng)
    paths = associate_with_links(scenario, algorithm, links)

    hop_keys = {(h.tx_id, h.rx_id) for p in paths for h in p.hops}
    edges = []
    seen: set[tuple[str, str]] = set()
    for p in paths:
        for check in p.checks:
            key = (check.tx_id, check.rx_id)
            if key in seen:
                continue
            seen.add(key)
            edges.append(
                {
                    "tx": check.tx_id,
                    "rx": check.rx_id,
                    "snr_db": check.snr_db,
                    "reliable": check.reliable,
                    "on_path": key in hop_keys,
                    "d3d_m": check.d3d_m,
                }
            )

    return {
        "metadata": _metadata(
            "snapshot", config, {"algorithm": algorithm, "trial_index": trial_index}
        ),
        "nodes": [
            {
                "id": n.id,
                "role": n.role,
                "x_m": n.x_m,
                "y_m": n.y_m,
                "height_m": n.height_m,
            }
            for n in scenario.nodes
        ],
        "roads": [
            {
                "axis": r.axis,
                "center_m": r.center_m,
                "length_m": r.length_m,
                "width_m": r.width_m,
            }
            for r in scenario.roads
        ],
        "plots": [
            {"x0_m": p.x0_m, "y0_m": p.y0_m, "size_m": p.size_m} for p in scenario.layout.plots
        ],
        "paths": [
            {
                "source": p.source,
                "terminal": p.terminal,
                "status": p.status,
                "n_hops": p.n_hops,
                "hops": [{"tx": h.tx_id, "rx": h.rx_id} for h in p.hops],
            }
            for p in paths
        ],
        "edges": edges,
    }


def _parse_args(argv: Sequence[str] | None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="v2nsim",
        description="Monte Carlo simulator for smart-meter-based V2N communications",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, needs_out: bool = False) -> None:
        p.add_argument("--config", required=True, help="scenario config or sweep spec (JSON)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--trials", type=int, default=None, help="override the trial count")
        p.add_argument(
            "--algorithm",
            choices=[*ALGORITHMS, "both"],
            default=None,
            help="association algorithm (default: maxsnr)",
        )
        p.add_argument(
            "--mode",
            choices=["sm", "bs", "both"],
            default=None,
            help="infrastructure mode (default: from config)",
        )
        p.add_argument("--workers", type=int, default=1, help="parallel trial workers")
        if needs_out:
            p.add_argument("--out", default="results", help="output directory")
            p.add_argument(
                "--format", choices=["csv", "json", "both"], default="both", help="output format"
            )
            p.add_argument("--stamp", default=None, help="fixed timestamp label for file names")

    p_run = sub.add_parser("run", help="run one scenario and print a summary JSON")
    common(p_run)

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep to CSV/JSON files")
    common(p_sweep, needs_out=True)
    p_sweep.add_argument("--axis", choices=sorted(AXES), default=None, help="sweep axis")
    p_sweep.add_argument("--values", default=None, help="comma-separated axis values")

    p_cmp = sub.add_parser("compare", help="paired SM-vs-BS sweep to CSV/JSON files")
    common(p_cmp, needs_out=True)
    p_cmp.add_argument("--axis", choices=sorted(AXES), default=None, help="sweep axis")
    p_cmp.add_argument("--values", default=None, help="comma-separated axis values")

    p_snap = sub.add_parser("snapshot", help="print one scenario's nodes and edges as JSON")
    common(p_snap)
    p_snap.add_argument("--trial", type=int, default=0, help="trial index to snapshot")

    p_val = sub.add_parser("validate", help="lint a configuration file")
    p_val.add_argument("--config", required=True)

    return parser.parse_args(argv)


def _load_any(path: str) -> dict[str, Any]:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc


def _resolve_spec(args: argparse.Namespace, force_modes: tuple[str, ...] | None = None) -> SweepSpec:
    """Build a SweepSpec from either a sweep spec file or config + flags."""
    data = _load_any(args.config)
    if "axis" in data:
        spec = sweep_spec_from_dict(data)
    else:
        base = config_from_dict(data)
        axis = args.axis
        if axis is None:
            axis = "tx_power_mw"
            values: tuple[float, ...] = (10.0 ** (base.tx_power_dbm / 10.0),)
        elif args.values is None:
            raise ConfigError("--values is required when --axis is given")
        else:
            values = tuple(float(v) for v in str(args.values).split(","))
        spec = SweepSpec(
            base=base,
            axis=axis,
            values=values,
            algorithms=(ALGO_MAXSNR,),
            modes=(base.baseline_mode,),
            trials_per_point=base.trials,
        )
    if getattr(args, "axis", None) is not None and "axis" in data:
        raise ConfigError("--axis conflicts with a sweep spec file; use one or the other")

    base = spec.base
    if args.seed is not None:
        base = base.replace(seed=args.seed)
    algorithms = spec.algorithms
    if args.algorithm is not None:
        algorithms = tuple(ALGORITHMS) if args.algorithm == "both" else (args.algorithm,)
    modes = spec.modes
    if force_modes is not None:
        modes = force_modes
    elif args.mode is not None:
        modes = tuple(MODES) if args.mode == "both" else (args.mode.upper(),)
    trials = args.trials if args.trials is not None else spec.trials_per_point
    return SweepSpec(
        base=base,
        axis=spec.axis,
        values=spec.values,
        algorithms=algorithms,
        modes=modes,
        trials_per_point=trials,
    )


def _resolve_config(args: argparse.Namespace) -> ScenarioConfig:
    config = load_config(args.config)
    if args.seed is not None:
        config = config.replace(seed=args.seed)
    if args.trials is not None:
        config = config.replace(trials=args.trials)
    return config


def _stamp(args: argparse.Namespace) -> str:
    if getattr(args, "stamp", None):
        return args.stamp
    return datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")


def _cmd_run(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    algorithms = (
        tuple(ALGORITHMS)
        if args.algorithm == "both"
        else ((args.algorithm,) if args.algorithm else (ALGO_MAXSNR,))
    )
    modes = (
        tuple(MODES)
        if args.mode == "both"
        else ((args.mode.upper(),) if args.mode else (config.baseline_mode,))
    )
    results = []
    for mode in modes:
        cfg = config.replace(baseline_mode=mode)
        for algorithm in algorithms:
            if args.workers > 1:
                with ProcessPoolExecutor(max_workers=args.workers) as pool:
                    summaries = list(
                        pool.map(run_trial, [cfg] * cfg.trials, [algorithm] * cfg.trials, range(cfg.trials))
                    )
            else:
                summaries = [run_trial(cfg, algorithm, t) for t in range(cfg.trials)]
            merged = merge_summaries(summaries)
            results.append(
                {
                    "algorithm": algorithm,
                    "mode": mode,
                    "summary": merged.to_dict(include_samples=True),
                }
            )
    payload = {
        "metadata": _metadata(
            "run", config, {"algorithms": list(algorithms), "modes": list(modes)}
        ),
        "results": results,
    }
    print(_dumps(payload))
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace, compare: bool = False) -> int:
    spec = _resolve_spec(args, force_modes=(MODES if compare else None))
    result = compare_sm_vs_bs(spec, workers=args.workers) if compare else run_sweep(spec, workers=args.workers)
    rows = rows_from_sweep(result)
    stem = f"{'compare' if compare else 'sweep'}_{spec.axis}_{_stamp(args)}"
    metadata = _metadata(
        "compare" if compare else "sweep",
        spec.base,
        {"spec": result.spec.to_dict(), "seed_schedule": result.seed_schedule()},
    )
    written = write_results(rows, args.format, args.out, stem, metadata)
    for path in written:
        print(path)
    return EXIT_OK


def _cmd_snapshot(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    if args.algorithm == "both":
        raise ConfigError("snapshot needs a single algorithm, not 'both'")
    if args.mode is not None:
        if args.mode == "both":
            raise ConfigError("snapshot needs a single mode, not 'both'")
        config = config.replace(baseline_mode=args.mode.upper())
    algorithm = args.algorithm or ALGO_MAXSNR
    print(_dumps(snapshot_payload(config, algorithm, args.trial)))
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    print(f"configuration OK: {args.config}")
    print(_dumps(config.to_dict()))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = _parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "compare":
            return _cmd_sweep(args, compare=True)
        if args.command == "snapshot":
            return _cmd_snapshot(args)
        if args.command == "validate":
            return _cmd_validate(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleDensityError as exc:
        print(f"infeasible scenario: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (OSError, EmptySummaryError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def cli() -> None:
    sys.exit(main())


if __name__ == "__main__":
    cli()
