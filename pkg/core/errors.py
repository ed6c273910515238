"""
Error taxonomy for the lab.
All errors are ValueErrors so callers validating input can catch them uniformly.
"""


class LabError(Exception):
    """Base class for every error raised by the lab."""


class DiskDomainError(LabError, ValueError):
    """A point that must lie in the open unit disk does not."""


class DimensionMismatchError(LabError, ValueError):
    """Operands have non-conforming shapes or lengths."""


class TruncationError(LabError, ValueError):
    """A truncation is too small to support the requested computation."""


class HypothesisError(LabError, ValueError):
    """Input violates a hypothesis of the statement being checked."""


class InsufficientFamilyError(LabError, ValueError):
    """A truncation family is too short or not strictly increasing."""


class ConfigError(LabError, ValueError):
    """Experiment configuration is invalid."""
