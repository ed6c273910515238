"""
Configuration file for the Hardy projection lab
"""
import os

from core.errors import ConfigError


class Config:
    """Process-level settings read from the environment"""

    TOOL_VERSION: str = "hardy-projection-lab 1.0.0"

    # Output and logging
    OUTPUT_DIR: str = os.getenv("HPL_OUT", "reports_out")
    LOG_LEVEL: str = os.getenv("HPL_LOG_LEVEL", "INFO").upper()

    # Truncation defaults
    GUARD_WINDOW: int = int(os.getenv("HPL_GUARD_WINDOW", "8"))
    PREFIX_LENGTH: int = int(os.getenv("HPL_PREFIX_LENGTH", "30"))
    ANGULAR_SAMPLES: int = int(os.getenv("HPL_ANGULAR_SAMPLES", "256"))
    RADII_LEVELS: int = int(os.getenv("HPL_RADII_LEVELS", "12"))

    # Probe verdict thresholds
    TOL_S: float = 1e-2
    TOL_C: float = 1e-2
    TOL_WC: float = 1e-2
    CONSISTENCY_FLOOR: float = 0.05
    S_VIOLATION_LEVEL: float = 0.9

    # Spectral and identity tolerances
    STABILITY_TOL: float = 1e-6
    DECAY_TOL: float = 1e-3
    RANK_REL_TOL: float = 1e-8
    RANK_ABS_FLOOR: float = 1e-12
    IDENTITY_TOL: float = 1e-12
    PROJECTION_TOL: float = 1e-10

    # Deterministic corpora
    SEED: int = int(os.getenv("HPL_SEED", "20240611"))
    WRITE_BINARY: bool = os.getenv("HPL_WRITE_BINARY", "True").lower() == "true"

    @classmethod
    def output_dir(cls) -> str:
        """HPL_OUT is read at call time so tests and scripts can redirect output."""
        return os.getenv("HPL_OUT", cls.OUTPUT_DIR)

    @classmethod
    def validate(cls) -> bool:
        """Reject settings no command can run with."""
        if cls.PREFIX_LENGTH < 1:
            raise ConfigError(f"HPL_PREFIX_LENGTH must be positive, got {cls.PREFIX_LENGTH}")
        if cls.ANGULAR_SAMPLES < 8:
            raise ConfigError(f"HPL_ANGULAR_SAMPLES must be at least 8, got {cls.ANGULAR_SAMPLES}")
        if cls.RADII_LEVELS < 1:
            raise ConfigError(f"HPL_RADII_LEVELS must be positive, got {cls.RADII_LEVELS}")
        if cls.GUARD_WINDOW < 0:
            raise ConfigError(f"HPL_GUARD_WINDOW must be nonnegative, got {cls.GUARD_WINDOW}")
        return True
