"""Batch figure rendering for v2nsim result files.

Reads the simulator's CSV/JSON outputs and renders the standard figure
kinds (SNR PDF, latency/reliability curves, hop-share bars, association
snapshots). Downstream-only: no computation beyond histogram binning.
"""

from v2nplots.figures import FIGURE_KINDS, FigureSpec, SchemaError, render

__version__ = "0.1.0"

__all__ = ["FIGURE_KINDS", "FigureSpec", "SchemaError", "render", "__version__"]
