"""
Experiment configuration: versioned JSON schema merged with command-line overrides.
"""
import json
import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import Config
from core.blaschke import BlaschkeProduct, ProbeThresholds
from core.errors import ConfigError
from utils.grid_utils import dyadic_radii

Scenario = Literal["exm1", "prop1", "custom"]
OperatorKind = Literal["toeplitz", "hankel", "submodule", "model", "product", "defect"]


class SymbolSpec(BaseModel):
    """Finite Blaschke product given by its zeros as [re, im] pairs."""
    model_config = ConfigDict(extra="forbid")

    zeros: List[Tuple[float, float]] = Field(default_factory=list)
    origin_multiplicity: int = Field(default=0, ge=0)
    variable: int = Field(default=0, ge=0, le=2)
    constant_angle: float = 0.0

    @field_validator("zeros")
    @classmethod
    def zeros_inside_disk(cls, zeros: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
        for re, im in zeros:
            if not math.hypot(re, im) < 1.0:
                raise ValueError(f"zero ({re}, {im}) does not lie in the open unit disk")
        return zeros

    def to_blaschke(self, label: str = "") -> BlaschkeProduct:
        constant = complex(math.cos(self.constant_angle), math.sin(self.constant_angle))
        return BlaschkeProduct.from_zeros(
            [complex(re, im) for re, im in self.zeros],
            label,
            constant,
            self.origin_multiplicity,
        )


class ToleranceSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    tol_s: float = Field(default=Config.TOL_S, gt=0)
    tol_c: float = Field(default=Config.TOL_C, gt=0)
    tol_wc: float = Field(default=Config.TOL_WC, gt=0)
    consistency_floor: float = Field(default=Config.CONSISTENCY_FLOOR, gt=0)
    s_violation_level: float = Field(default=Config.S_VIOLATION_LEVEL, gt=0, lt=1)
    stability_tol: float = Field(default=Config.STABILITY_TOL, gt=0)
    decay_tol: float = Field(default=Config.DECAY_TOL, gt=0)
    rank_rel_tol: float = Field(default=Config.RANK_REL_TOL, gt=0)
    rank_abs_floor: float = Field(default=Config.RANK_ABS_FLOOR, gt=0)
    identity_tol: float = Field(default=Config.IDENTITY_TOL, gt=0)
    projection_tol: float = Field(default=Config.PROJECTION_TOL, gt=0)

    def probe_thresholds(self) -> ProbeThresholds:
        return ProbeThresholds(
            tol_s=self.tol_s,
            tol_c=self.tol_c,
            tol_wc=self.tol_wc,
            consistency_floor=self.consistency_floor,
            s_violation_level=self.s_violation_level,
        )

    def verdict_options(self) -> Dict[str, float]:
        return {
            "stability_tol": self.stability_tol,
            "decay_tol": self.decay_tol,
            "rank_rel_tol": self.rank_rel_tol,
            "rank_abs_floor": self.rank_abs_floor,
        }


class ExperimentConfig(BaseModel):
    """One experiment; the validated model is the config snapshot stored in every report."""
    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = 1
    scenario: Scenario = "prop1"
    prefix_length: int = Field(default=Config.PREFIX_LENGTH, ge=1)
    phi: Optional[SymbolSpec] = None
    psi: Optional[SymbolSpec] = None

    radii: Optional[List[float]] = None
    radii_levels: int = Field(default=Config.RADII_LEVELS, ge=1, le=52)
    angular_samples: int = Field(default=Config.ANGULAR_SAMPLES, ge=8)
    sc_radius: float = Field(default=0.9, gt=0, lt=1)

    dims: Optional[List[int]] = None
    n_vars: Literal[2, 3] = 2
    degrees: Optional[Tuple[int, int]] = None
    variables: Optional[Tuple[int, int]] = None
    defect_sign: Literal["proof", "paper"] = "proof"
    guard: int = Field(default=Config.GUARD_WINDOW, ge=0)

    operator: OperatorKind = "toeplitz"
    export_dim: int = Field(default=4, ge=1)
    monomial: int = 1

    seed: int = Config.SEED
    corpus_size: int = Field(default=50, ge=0)
    tolerances: ToleranceSettings = Field(default_factory=ToleranceSettings)
    out: Optional[str] = None

    @field_validator("radii")
    @classmethod
    def radii_valid(cls, radii: Optional[List[float]]) -> Optional[List[float]]:
        if radii is None:
            return radii
        if not radii:
            raise ValueError("radii must not be empty")
        if any(not 0.0 < r < 1.0 for r in radii):
            raise ValueError("radii must lie in (0, 1)")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("radii must be strictly increasing")
        return radii

    @field_validator("dims")
    @classmethod
    def dims_valid(cls, dims: Optional[List[int]]) -> Optional[List[int]]:
        if dims is None:
            return dims
        if not dims:
            raise ValueError("dims must not be empty")
        if any(d < 1 for d in dims):
            raise ValueError("dims must be positive")
        if any(b <= a for a, b in zip(dims, dims[1:])):
            raise ValueError("dims must be strictly increasing")
        return dims

    @field_validator("degrees")
    @classmethod
    def degrees_valid(cls, degrees: Optional[Tuple[int, int]]) -> Optional[Tuple[int, int]]:
        if degrees is not None and min(degrees) < 0:
            raise ValueError("degrees must be nonnegative")
        return degrees

    @model_validator(mode="after")
    def custom_needs_symbols(self) -> "ExperimentConfig":
        if self.scenario == "custom" and (self.phi is None or self.psi is None):
            raise ValueError("scenario 'custom' needs both phi and psi symbol specs")
        return self

    def probe_radii(self) -> List[float]:
        """Explicit radii, or 1 - 2^-j for j = 1..radii_levels."""
        if self.radii is not None:
            return list(self.radii)
        return dyadic_radii(self.radii_levels)

    def rank_degrees(self) -> Tuple[int, int]:
        if self.degrees is not None:
            return self.degrees
        return (2, 3) if self.n_vars == 2 else (1, 1)

    def rank_variables(self) -> Tuple[int, int]:
        return self.variables if self.variables is not None else (0, 1)

    def rank_dims(self) -> List[int]:
        if self.dims is not None:
            return list(self.dims)
        return [8, 12, 16, 20] if self.n_vars == 2 else [3, 4, 5, 6]

    def snapshot(self) -> Dict[str, Any]:
        """Config as stored in reports, without the output location."""
        return self.model_dump(mode="json", exclude={"out"})


def _merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, dict):
            current = merged.get(key)
            merged[key] = _merge(current if isinstance(current, dict) else {}, value)
        else:
            merged[key] = value
    return merged


def load_experiment_config(path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """
    Read a JSON config file (optional) and apply overrides; None-valued overrides are ignored.

    Raises:
        ConfigError: unreadable file or malformed JSON
        pydantic.ValidationError: schema violations, including unknown keys
    """
    data: Dict[str, Any] = {}
    if path:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigError(f"config file {path} is not valid JSON: {e}") from e
        except OSError as e:
            raise ConfigError(f"cannot read config file {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
    return ExperimentConfig.model_validate(_merge(data, overrides or {}))
