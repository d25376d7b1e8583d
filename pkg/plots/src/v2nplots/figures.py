"""Figure builders: one function per figure kind, plus the dump payloads.

Every builder returns the exact arrays it drew, keyed per series, so the
--dump output can be diffed against the input file column by column.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGURE_KINDS = (
    "snr_pdf",
    "latency_vs_power",
    "reliability_vs_power",
    "hop_pct",
    "snapshot",
    "sweep_curves",
)

DEFAULT_BIN_WIDTH_DB = 0.5

ROLE_STYLE = {
    "sm": dict(marker="s", color="tab:green", s=45, label="smart meter"),
    "bs": dict(marker="^", color="tab:purple", s=80, label="base station"),
}


class SchemaError(ValueError):
    """Input file does not carry the columns/fields a figure kind needs."""


@dataclass
class FigureSpec:
    kind: str
    input_path: str
    output_path: str
    dump_path: str | None = None
    bin_width_db: float = DEFAULT_BIN_WIDTH_DB
    title: str | None = None
    xlabel: str | None = None
    ylabel: str | None = None
    xlim: tuple[float, float] | None = None
    ylim: tuple[float, float] | None = None


def _read_csv_rows(path: str, required: list[str]) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise SchemaError(f"missing column {column!r} in {path}")
        return list(reader)


def _read_json(path: str) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _series(rows: list[dict], value_column: str) -> dict[str, dict[str, list[float]]]:
    """Group CSV rows into per-(algorithm, mode) x/y series, x ascending."""
    grouped: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        if row.get(value_column, "") == "" or row.get("axis_value", "") == "":
            continue  # failed cells stay out of the plotted arrays
        key = f"{row['algorithm']}/{row['mode']}"
        grouped.setdefault(key, []).append((float(row["axis_value"]), float(row[value_column])))
    out = {}
    for key, points in grouped.items():
        points.sort(key=lambda p: p[0])
        out[key] = {"x": [p[0] for p in points], "y": [p[1] for p in points]}
    return out


def _curve_figure(spec: FigureSpec, value_column: str, ylabel: str, scale: float = 1.0):
    rows = _read_csv_rows(spec.input_path, ["axis_name", "axis_value", "algorithm", "mode", value_column])
    axis_name = rows[0]["axis_name"] if rows else "axis"
    series = _series(rows, value_column)
    if not series:
        raise SchemaError(f"no plottable rows in {spec.input_path}")

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    dump: dict = {"kind": spec.kind, "value_column": value_column, "series": {}}
    for key in sorted(series):
        x = series[key]["x"]
        y = [v * scale for v in series[key]["y"]]
        ax.plot(x, y, marker="o", label=key)
        dump["series"][key] = {"x": x, "y": series[key]["y"]}
    ax.set_xlabel(spec.xlabel or axis_name)
    ax.set_ylabel(spec.ylabel or ylabel)
    ax.grid(alpha=0.3)
    ax.legend()
    return fig, dump


def figure_reliability_vs_power(spec: FigureSpec):
    return _curve_figure(spec, "reliability_pct", "reliability (%)")


def figure_latency_vs_power(spec: FigureSpec):
    return _curve_figure(spec, "latency_mean_s", "mean latency (us)", scale=1e6)


def figure_sweep_curves(spec: FigureSpec):
    rows = _read_csv_rows(
        spec.input_path,
        ["axis_name", "axis_value", "algorithm", "mode", "reliability_pct", "latency_mean_s"],
    )
    axis_name = rows[0]["axis_name"] if rows else "axis"
    rel = _series(rows, "reliability_pct")
    lat = _series(rows, "latency_mean_s")
    if not rel:
        raise SchemaError(f"no plottable rows in {spec.input_path}")

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.0, 4.0))
    dump: dict = {"kind": spec.kind, "series": {}}
    for key in sorted(rel):
        ax1.plot(rel[key]["x"], rel[key]["y"], marker="o", label=key)
        ax2.plot(lat[key]["x"], [v * 1e6 for v in lat[key]["y"]], marker="o", label=key)
        dump["series"][key] = {
            "x": rel[key]["x"],
            "reliability_pct": rel[key]["y"],
            "latency_mean_s": lat[key]["y"],
        }
    ax1.set_xlabel(spec.xlabel or axis_name)
    ax1.set_ylabel("reliability (%)")
    ax1.grid(alpha=0.3)
    ax1.legend()
    ax2.set_xlabel(spec.xlabel or axis_name)
    ax2.set_ylabel("mean latency (us)")
    ax2.grid(alpha=0.3)
    ax2.legend()
    fig.tight_layout()
    return fig, dump


def figure_hop_pct(spec: FigureSpec):
    rows = _read_csv_rows(
        spec.input_path,
        ["axis_name", "axis_value", "algorithm", "mode", "pct_single_hop", "pct_multi_hop"],
    )
    axis_name = rows[0]["axis_name"] if rows else "axis"
    single = _series(rows, "pct_single_hop")
    multi = _series(rows, "pct_multi_hop")
    if not multi:
        raise SchemaError(f"no plottable rows in {spec.input_path}")

    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    keys = sorted(multi)
    x_values = multi[keys[0]]["x"]
    positions = np.arange(len(x_values), dtype=float)
    width = 0.8 / (2 * len(keys))
    dump: dict = {"kind": spec.kind, "axis_values": x_values, "series": {}}
    offset = -0.4 + width / 2
    for key in keys:
        ax.bar(positions + offset, single[key]["y"], width, label=f"{key} single-hop")
        offset += width
        ax.bar(positions + offset, multi[key]["y"], width, label=f"{key} multi-hop", hatch="//")
        offset += width
        dump["series"][key] = {
            "x": multi[key]["x"],
            "pct_single_hop": single[key]["y"],
            "pct_multi_hop": multi[key]["y"],
        }
    ax.set_xticks(positions)
    ax.set_xticklabels([f"{v:g}" for v in x_values])
    ax.set_xlabel(spec.xlabel or axis_name)
    ax.set_ylabel(spec.ylabel or "share of reliable paths (%)")
    ax.grid(alpha=0.3, axis="y")
    ax.legend(fontsize=8)
    return fig, dump


def figure_snr_pdf(spec: FigureSpec):
    payload = _read_json(spec.input_path)
    results = payload.get("results")
    if not results:
        raise SchemaError(f"missing field 'results' in {spec.input_path}")

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    width = spec.bin_width_db
    dump: dict = {"kind": spec.kind, "bin_width_db": width, "series": {}}
    plotted = False
    for entry in results:
        summary = entry.get("summary", {})
        samples = summary.get("snr_samples_db")
        if samples is None:
            raise SchemaError(f"missing field 'snr_samples_db' in {spec.input_path}")
        if not samples:
            continue
        samples = np.asarray(samples, dtype=float)
        lo = np.floor(samples.min() / width) * width
        hi = np.ceil(samples.max() / width) * width
        if hi <= lo:
            hi = lo + width
        edges = lo + width * np.arange(int(round((hi - lo) / width)) + 1)
        counts, _ = np.histogram(samples, bins=edges)
        density = counts / (samples.size * width)
        centers = (edges[:-1] + edges[1:]) / 2.0
        key = f"{entry.get('algorithm', '?')}/{entry.get('mode', '?')}"
        ax.plot(centers, density, drawstyle="steps-mid", label=key)
        dump["series"][key] = {
            "bin_centers_db": centers.tolist(),
            "density": density.tolist(),
            "normalization": float(density.sum() * width),
        }
        plotted = True
    if not plotted:
        raise SchemaError(f"no SNR samples to plot in {spec.input_path}")
    ax.set_xlabel(spec.xlabel or "terminal-hop SNR (dB)")
    ax.set_ylabel(spec.ylabel or "probability density (1/dB)")
    ax.grid(alpha=0.3)
    ax.legend()
    return fig, dump


def figure_snapshot(spec: FigureSpec):
    payload = _read_json(spec.input_path)
    for required in ("nodes", "edges", "paths"):
        if required not in payload:
            raise SchemaError(f"missing field {required!r} in {spec.input_path}")

    nodes = {n["id"]: n for n in payload["nodes"]}
    status_by_vehicle = {p["source"]: p["status"] for p in payload["paths"]}

    fig, ax = plt.subplots(figsize=(7.5, 7.5))
    for plot in payload.get("plots", []):
        ax.add_patch(
            plt.Rectangle(
                (plot["x0_m"], plot["y0_m"]),
                plot["size_m"],
                plot["size_m"],
                facecolor="0.93",
                edgecolor="0.8",
                zorder=0,
            )
        )

    drawn_edges = []
    for edge in payload["edges"]:
        if not edge.get("on_path"):
            continue
        tx, rx = nodes[edge["tx"]], nodes[edge["rx"]]
        ax.plot(
            [tx["x_m"], rx["x_m"]],
            [tx["y_m"], rx["y_m"]],
            color="tab:blue",
            linewidth=0.8,
            zorder=2,
        )
        drawn_edges.append({"tx": edge["tx"], "rx": edge["rx"], "snr_db": edge["snr_db"]})

    seen_labels = set()

    def scatter(xs, ys, label=None, **kw):
        if label in seen_labels:
            label = None
        elif label:
            seen_labels.add(label)
        if xs:
            ax.scatter(xs, ys, label=label, zorder=3, **kw)

    for role, style in ROLE_STYLE.items():
        pts = [n for n in payload["nodes"] if n["role"] == role]
        scatter([n["x_m"] for n in pts], [n["y_m"] for n in pts], **style)
    vehicles = [n for n in payload["nodes"] if n["role"] == "vehicle"]
    ok = [n for n in vehicles if status_by_vehicle.get(n["id"]) != "Unreliable"]
    bad = [n for n in vehicles if status_by_vehicle.get(n["id"]) == "Unreliable"]
    scatter([n["x_m"] for n in ok], [n["y_m"] for n in ok], marker="o", color="tab:blue", s=18, label="vehicle (connected)")
    scatter([n["x_m"] for n in bad], [n["y_m"] for n in bad], marker="x", color="tab:red", s=40, label="vehicle (unreliable)")

    ax.set_aspect("equal")
    ax.set_xlabel(spec.xlabel or "x (m)")
    ax.set_ylabel(spec.ylabel or "y (m)")
    ax.legend(loc="upper right", fontsize=8)

    dump = {
        "kind": spec.kind,
        "n_nodes": len(payload["nodes"]),
        "edges_on_path": drawn_edges,
        "unreliable_vehicles": sorted(n["id"] for n in bad),
    }
    return fig, dump


_BUILDERS = {
    "snr_pdf": figure_snr_pdf,
    "latency_vs_power": figure_latency_vs_power,
    "reliability_vs_power": figure_reliability_vs_power,
    "hop_pct": figure_hop_pct,
    "snapshot": figure_snapshot,
    "sweep_curves": figure_sweep_curves,
}


def render(spec: FigureSpec) -> Path:
    """Render one figure to spec.output_path; write the dump if requested."""
    if spec.kind not in _BUILDERS:
        raise SchemaError(f"unknown figure kind {spec.kind!r}; expected one of {FIGURE_KINDS}")
    fig, dump = _BUILDERS[spec.kind](spec)
    if spec.title:
        fig.suptitle(spec.title)
    ax = fig.axes[0]
    if spec.xlim:
        ax.set_xlim(*spec.xlim)
    if spec.ylim:
        ax.set_ylim(*spec.ylim)
    out = Path(spec.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    if spec.dump_path:
        Path(spec.dump_path).write_text(
            json.dumps(dump, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    return out
