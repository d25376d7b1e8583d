"""Exception types shared across the simulator."""


class ConfigError(ValueError):
    """Invalid or unknown scenario/sweep configuration."""


class InfeasibleDensityError(RuntimeError):
    """Requested vehicle density cannot satisfy the spacing constraint."""


class ModelRangeError(ValueError):
    """Link geometry outside the validity range of the path-loss model."""


class UnreliablePathError(ValueError):
    """Latency requested for a path that never reached the infrastructure."""


class EmptySummaryError(ValueError):
    """Metrics requested for an empty set of association paths."""
