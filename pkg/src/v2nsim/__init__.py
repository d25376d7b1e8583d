"""Monte Carlo simulator for smart-meter-based V2N communications.

A seeded, deterministic simulator of vehicles associating with smart
meters (or baseline base stations) over a suburban street grid, with a
3GPP UMi street-canyon channel model, greedy MaxSNR/MinDis association
algorithms, and latency/reliability/throughput metrics.
"""

from v2nsim.config import ScenarioConfig, ConfigError, load_config
from v2nsim.errors import (
    EmptySummaryError,
    InfeasibleDensityError,
    ModelRangeError,
    UnreliablePathError,
)
from v2nsim.topology import Node, Scenario, build_scenario
from v2nsim.channel import LinkBudget, LinkTable, PathLossParams
from v2nsim.association import AssociationPath, associate_all
from v2nsim.metrics import MetricsSummary, summarize
from v2nsim.experiments import SweepSpec, SweepResult, run_trial, run_sweep, compare_sm_vs_bs

__version__ = "0.1.0"

__all__ = [
    "AssociationPath",
    "ConfigError",
    "EmptySummaryError",
    "InfeasibleDensityError",
    "LinkBudget",
    "LinkTable",
    "MetricsSummary",
    "ModelRangeError",
    "Node",
    "PathLossParams",
    "Scenario",
    "ScenarioConfig",
    "SweepResult",
    "SweepSpec",
    "UnreliablePathError",
    "associate_all",
    "build_scenario",
    "compare_sm_vs_bs",
    "load_config",
    "run_sweep",
    "run_trial",
    "summarize",
    "__version__",
]
