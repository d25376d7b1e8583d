"""Per-path latency and per-run metric aggregation.

Latency decomposes into summed per-hop propagation delay plus the
store-and-forward processing cost: every hop contributes twice its
transmission time (transmit + receive), and each intermediate relay adds
the configured transfer time. With equal hop capacities this reduces
exactly to 2*t_trans + (N_H - 1)*(t_transfer + 2*t_trans).

Reliability is reported under both counting conventions: per examined
link (every sensitivity check is one trial) and per vehicle path; the
headline ``reliability_pct`` follows ``config.reliability_counting``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from v2nsim.association import AssociationPath, STATUS_MULTI_HOP
from v2nsim.channel import SPEED_OF_LIGHT_M_S
from v2nsim.config import COUNT_PATH, ScenarioConfig
from v2nsim.errors import EmptySummaryError, UnreliablePathError


def path_latency(path: AssociationPath, config: ScenarioConfig) -> float:
    """End-to-end latency in seconds of one reliable association path."""
    if not path.reliable:
        raise UnreliablePathError(f"path from {path.source} is unreliable; latency undefined")
    t_prop = sum(hop.d3d_m for hop in path.hops) / SPEED_OF_LIGHT_M_S
    t_trans = [config.packet_size_bits / hop.capacity_bps for hop in path.hops]
    t_process = sum(2.0 * t for t in t_trans) + (path.n_hops - 1) * config.transfer_time_s
    return t_prop + t_process


def bottleneck_throughput_bps(path: AssociationPath) -> float:
    """Capacity of the slowest hop, the end-to-end rate of the chain."""
    if not path.reliable:
        raise UnreliablePathError(f"path from {path.source} is unreliable; throughput undefined")
    return min(hop.capacity_bps for hop in path.hops)


@dataclass
class MetricsSummary:
    """Aggregates over one or more trials of association paths.

    Sample arrays are pooled across trials; per-trial reliability and mean
    latency are kept so the mean-of-trial-means view stays available next
    to the pooled one.
    """

    n_vehicles: int
    n_reliable: int
    n_unreliable: int
    n_links_checked: int
    n_links_reliable: int
    n_single_hop: int
    n_multi_hop: int
    counting: str
    latency_samples_s: np.ndarray
    throughput_samples_bps: np.ndarray
    snr_samples_db: np.ndarray
    trial_reliability_pct: list[float] = field(default_factory=list)
    trial_latency_mean_s: list[float] = field(default_factory=list)
    trial_count: int = 1

    @property
    def reliability_path_pct(self) -> float:
        return 100.0 * self.n_reliable / self.n_vehicles if self.n_vehicles else 0.0

    @property
    def reliability_link_pct(self) -> float:
        return 100.0 * self.n_links_reliable / self.n_links_checked if self.n_links_checked else 0.0

    @property
    def reliability_pct(self) -> float:
        if self.counting == COUNT_PATH:
            return self.reliability_path_pct
        return self.reliability_link_pct

    @property
    def reliability_mean_of_trials_pct(self) -> float:
        return float(np.mean(self.trial_reliability_pct)) if self.trial_reliability_pct else 0.0

    @property
    def latency_mean_s(self) -> float:
        return float(np.mean(self.latency_samples_s)) if self.latency_samples_s.size else float("nan")

    @property
    def latency_median_s(self) -> float:
        return float(np.median(self.latency_samples_s)) if self.latency_samples_s.size else float("nan")

    @property
    def latency_p95_s(self) -> float:
        return (
            float(np.percentile(self.latency_samples_s, 95.0))
            if self.latency_samples_s.size
            else float("nan")
        )

    @property
    def latency_mean_of_trials_s(self) -> float:
        vals = [v for v in self.trial_latency_mean_s if not np.isnan(v)]
        return float(np.mean(vals)) if vals else float("nan")

    @property
    def throughput_mean_bps(self) -> float:
        return (
            float(np.mean(self.throughput_samples_bps))
            if self.throughput_samples_bps.size
            else float("nan")
        )

    @property
    def throughput_median_bps(self) -> float:
        return (
            float(np.median(self.throughput_samples_bps))
            if self.throughput_samples_bps.size
            else float("nan")
        )

    @property
    def snr_mean_db(self) -> float:
        return float(np.mean(self.snr_samples_db)) if self.snr_samples_db.size else float("nan")

    @property
    def snr_std_db(self) -> float:
        return float(np.std(self.snr_samples_db)) if self.snr_samples_db.size else float("nan")

    @property
    def pct_single_hop(self) -> float:
        return 100.0 * self.n_single_hop / self.n_reliable if self.n_reliable else 0.0

    @property
    def pct_multi_hop(self) -> float:
        return 100.0 * self.n_multi_hop / self.n_reliable if self.n_reliable else 0.0

    def to_dict(self, include_samples: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "reliability_pct": self.reliability_pct,
            "reliability_path_pct": self.reliability_path_pct,
            "reliability_link_pct": self.reliability_link_pct,
            "reliability_mean_of_trials_pct": self.reliability_mean_of_trials_pct,
            "reliability_counting": self.counting,
            "latency_mean_s": self.latency_mean_s,
            "latency_median_s": self.latency_median_s,
            "latency_p95_s": self.latency_p95_s,
            "latency_mean_of_trials_s": self.latency_mean_of_trials_s,
            "throughput_mean_bps": self.throughput_mean_bps,
            "throughput_median_bps": self.throughput_median_bps,
            "snr_mean_db": self.snr_mean_db,
            "snr_std_db": self.snr_std_db,
            "pct_single_hop": self.pct_single_hop,
            "pct_multi_hop": self.pct_multi_hop,
            "n_vehicles": self.n_vehicles,
            "n_reliable": self.n_reliable,
            "n_unreliable": self.n_unreliable,
            "n_links_checked": self.n_links_checked,
            "n_links_reliable": self.n_links_reliable,
            "trial_count": self.trial_count,
        }
        if include_samples:
            out["latency_samples_s"] = [float(x) for x in self.latency_samples_s]
            out["throughput_samples_bps"] = [float(x) for x in self.throughput_samples_bps]
            out["snr_samples_db"] = [float(x) for x in self.snr_samples_db]
            out["trial_reliability_pct"] = list(self.trial_reliability_pct)
        return out


def summarize(paths: list[AssociationPath], config: ScenarioConfig) -> MetricsSummary:
    """Aggregate one trial's association paths into a MetricsSummary."""
    if not paths:
        raise EmptySummaryError("no association paths to summarize")

    reliable = [p for p in paths if p.reliable]
    n_links_checked = sum(len(p.checks) for p in paths)
    n_links_reliable = sum(sum(1 for c in p.checks if c.reliable) for p in paths)

    latency = np.array([path_latency(p, config) for p in reliable], dtype=float)
    throughput = np.array([bottleneck_throughput_bps(p) for p in reliable], dtype=float)
    snr = np.array([p.hops[-1].snr_db for p in reliable], dtype=float)

    summary = MetricsSummary(
        n_vehicles=len(paths),
        n_reliable=len(reliable),
        n_unreliable=len(paths) - len(reliable),
        n_links_checked=n_links_checked,
        n_links_reliable=n_links_reliable,
        n_single_hop=sum(1 for p in reliable if p.n_hops == 1),
        n_multi_hop=sum(1 for p in reliable if p.status == STATUS_MULTI_HOP),
        counting=config.reliability_counting,
        latency_samples_s=latency,
        throughput_samples_bps=throughput,
        snr_samples_db=snr,
    )
    summary.trial_reliability_pct = [summary.reliability_pct]
    summary.trial_latency_mean_s = [summary.latency_mean_s]
    return summary


def merge_summaries(summaries: list[MetricsSummary]) -> MetricsSummary:
    """Pool trial summaries; order-independent up to the given sequence.

    Callers pass summaries in trial-index order so merged sample arrays are
    reproducible regardless of how trials were scheduled.
    """
    if not summaries:
        raise EmptySummaryError("no trial summaries to merge")
    first = summaries[0]
    merged = MetricsSummary(
        n_vehicles=sum(s.n_vehicles for s in summaries),
        n_reliable=sum(s.n_reliable for s in summaries),
        n_unreliable=sum(s.n_unreliable for s in summaries),
        n_links_checked=sum(s.n_links_checked for s in summaries),
        n_links_reliable=sum(s.n_links_reliable for s in summaries),
        n_single_hop=sum(s.n_single_hop for s in summaries),
        n_multi_hop=sum(s.n_multi_hop for s in summaries),
        counting=first.counting,
        latency_samples_s=np.concatenate([s.latency_samples_s for s in summaries]),
        throughput_samples_bps=np.concatenate([s.throughput_samples_bps for s in summaries]),
        snr_samples_db=np.concatenate([s.snr_samples_db for s in summaries]),
        trial_count=sum(s.trial_count for s in summaries),
    )
    for s in summaries:
        merged.trial_reliability_pct.extend(s.trial_reliability_pct)
        merged.trial_latency_mean_s.extend(s.trial_latency_mean_s)
    return merged


def snr_pdf(samples_db: np.ndarray, bin_width_db: float) -> tuple[np.ndarray, np.ndarray]:
    """Normalized SNR histogram: densities sum to 1 when multiplied by width.

    Returns (bin_edges, density) with len(edges) == len(density) + 1.
    """
    samples = np.asarray(samples_db, dtype=float)
    if samples.size == 0:
        raise EmptySummaryError("snr_pdf requires at least one sample")
    if bin_width_db <= 0:
        raise ValueError("bin_width_db must be positive")
    lo = np.floor(samples.min() / bin_width_db) * bin_width_db
    hi = np.ceil(samples.max() / bin_width_db) * bin_width_db
    if hi <= lo:
        hi = lo + bin_width_db
    n_bins = int(round((hi - lo) / bin_width_db))
    edges = lo + bin_width_db * np.arange(n_bins + 1)
    counts, _ = np.histogram(samples, bins=edges)
    density = counts / (samples.size * bin_width_db)
    return edges, density
