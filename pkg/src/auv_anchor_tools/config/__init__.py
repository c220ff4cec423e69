"""Configuration management for AUV Anchor Tools.

A scenario is a single JSON document. Every field defaults to the
reference deployment scenario (3000 m anchors, 46 deg design angle,
5000 m comm range, 500 m AUV depth, 2 m/s) so an empty document
reproduces it.
"""

import json
import os
from pathlib import Path
from threading import Lock
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..core.errors import ConfigError

DEFAULT_LAMBDA1_GRID = [round(0.1 * i, 1) for i in range(11)]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class RegionSection(_Section):
    side_km: float = Field(20.0, gt=0, description="Side of the square region")


class AnchorsSection(_Section):
    n_total: int = Field(48, ge=1, description="Total anchors N_ta")
    per_cluster: Optional[int] = Field(None, ge=3, description="Fixed N_ca")
    candidates: List[int] = Field(default_factory=lambda: [3, 4, 5])
    anchor_depth_m: float = Field(3000.0, gt=0)
    design_elevation_deg: float = Field(46.0, gt=0, lt=90)
    comm_range_m: float = Field(5000.0, gt=0)
    gamma: float = Field(0.001, gt=0)

    @model_validator(mode="after")
    def _check_candidates(self):
        if not self.candidates:
            raise ValueError("candidates must not be empty")
        if any(c < 3 for c in self.candidates):
            raise ValueError("every candidate must be >= 3")
        return self

    def counts(self) -> List[int]:
        """Anchors-per-cluster values to evaluate."""
        return [self.per_cluster] if self.per_cluster else list(self.candidates)


class TargetSection(_Section):
    depth_m: float = Field(500.0, ge=0)


class ProfileSection(_Section):
    name: str = Field("iso1500", description="Built-in profile name")
    csv_path: Optional[str] = Field(None, description="depth_m,speed_mps CSV")
    layer_thickness_m: float = Field(100.0, gt=0)


class InsSection(_Section):
    sigma0_sq: float = Field(0.01, ge=0)
    beta1: float = Field(0.039, ge=0)
    beta2: float = Field(0.053, ge=0)
    distance_unit_m: float = Field(1000.0, gt=0)


class KinematicsSection(_Section):
    speed_mps: float = Field(2.0, gt=0)
    slot_s: float = Field(50.0, gt=0)


class WeightsSection(_Section):
    lambda1: Optional[float] = Field(None, ge=0, le=1)
    lambda1_grid: List[float] = Field(default_factory=lambda: list(DEFAULT_LAMBDA1_GRID))
    lambda2: float = Field(1.0, ge=0, le=1)

    @model_validator(mode="after")
    def _check_grid(self):
        if not self.lambda1_grid:
            raise ValueError("lambda1_grid must not be empty")
        if any(not 0.0 <= v <= 1.0 for v in self.lambda1_grid):
            raise ValueError("lambda1_grid values must lie in [0, 1]")
        return self

    def grid(self) -> List[float]:
        return [self.lambda1] if self.lambda1 is not None else list(self.lambda1_grid)


class TraversalSection(_Section):
    step_m: float = Field(100.0, gt=0)


class CoverageSection(_Section):
    min_anchors: Optional[int] = Field(3, ge=1, description="None means all anchors")
    range_metric: Literal["slant", "horizontal"] = "slant"


class SimulationSection(_Section):
    trials: int = Field(100, ge=1)
    master_seed: int = Field(20250101, ge=0, lt=2**64)
    path_kind: Literal["r1", "r2", "r3", "random"] = "random"
    coverage_model: Literal["rule", "disc"] = "rule"
    pin_center_error: bool = False
    per_sample: bool = False


class FeasibilitySection(_Section):
    n_total_min: int = Field(27, ge=1)
    n_total_max: int = Field(200, ge=1)

    @model_validator(mode="after")
    def _check_range(self):
        if self.n_total_max < self.n_total_min:
            raise ValueError("n_total_max must be >= n_total_min")
        return self


class ScenarioConfig(_Section):
    """Every tunable of a planning run, grouped as in the config file."""

    region: RegionSection = Field(default_factory=RegionSection)
    anchors: AnchorsSection = Field(default_factory=AnchorsSection)
    target: TargetSection = Field(default_factory=TargetSection)
    profile: ProfileSection = Field(default_factory=ProfileSection)
    ins: InsSection = Field(default_factory=InsSection)
    kinematics: KinematicsSection = Field(default_factory=KinematicsSection)
    weights: WeightsSection = Field(default_factory=WeightsSection)
    traversal: TraversalSection = Field(default_factory=TraversalSection)
    coverage: CoverageSection = Field(default_factory=CoverageSection)
    simulation: SimulationSection = Field(default_factory=SimulationSection)
    feasibility: FeasibilitySection = Field(default_factory=FeasibilitySection)

    @model_validator(mode="after")
    def _check_geometry(self):
        if self.target.depth_m >= self.anchors.anchor_depth_m:
            raise ValueError("target.depth_m must be shallower than anchors.anchor_depth_m")
        return self

    def effective(self) -> Dict[str, Any]:
        """Fully defaulted configuration, suitable for echoing into metadata."""
        return self.model_dump(mode="json")


class Config:
    """Scenario configuration loaded from a JSON file."""

    def __init__(self, path: Optional[Path] = None, data: Optional[Dict[str, Any]] = None):
        self.path = Path(path) if path else None
        raw = data if data is not None else self._load()
        self.scenario = self._validate(raw)
        self.data = self.scenario.effective()

    def _load(self) -> Dict[str, Any]:
        """Load raw config from file; a missing path means all defaults."""
        if self.path is None:
            return {}
        if not self.path.exists():
            raise ConfigError(f"{self.path}: config file not found")
        text = self.path.read_text(encoding="utf-8")
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(
                f"{self.path}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}"
            ) from e
        if not isinstance(raw, dict):
            raise ConfigError(f"{self.path}:1:1: top level must be a JSON object")
        return raw

    def _validate(self, raw: Dict[str, Any]) -> ScenarioConfig:
        try:
            return ScenarioConfig.model_validate(raw)
        except ValidationError as e:
            where = str(self.path) if self.path else "<config>"
            problems = []
            for err in e.errors():
                loc = ".".join(str(p) for p in err["loc"]) or "<root>"
                problems.append(f"{where}: {loc}: {err['msg']}")
            raise ConfigError("\n".join(problems)) from e

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value using dot notation (e.g., "anchors.gamma")."""
        value: Any = self.data
        for k in key.split("."):
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default
        return value

    def override(self, key: str, value: Any) -> "Config":
        """Return a new Config with one dotted key replaced, re-validated."""
        data = json.loads(json.dumps(self.data))
        keys = key.split(".")
        target = data
        for k in keys[:-1]:
            target = target.setdefault(k, {})
        target[keys[-1]] = value
        clone = Config.__new__(Config)
        clone.path = self.path
        clone.scenario = clone._validate(data)
        clone.data = clone.scenario.effective()
        return clone


def load_config(path: Optional[Path] = None) -> Config:
    """Load and validate a scenario configuration."""
    return Config(path)


class RuntimeConfig:
    """Thread-safe singleton for runtime settings.

    Holds the parallelism degree used by sweeps and Monte Carlo runs so
    modules do not need it threaded through every call.

    Usage:
        RuntimeConfig.set_max_workers(8)
        workers = RuntimeConfig.get_max_workers()
    """

    _instance = None
    _lock = Lock()

    def __new__(cls):
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
                    cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return
        self._max_workers: int = int(os.getenv("AUV_ANCHOR_MAX_WORKERS", "4"))
        self._output_format: str = "table"
        self._initialized = True

    @classmethod
    def set_max_workers(cls, workers: int) -> None:
        """Set the thread pool size for parallel maps."""
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        cls()._max_workers = workers

    @classmethod
    def get_max_workers(cls) -> int:
        return cls()._max_workers

    @classmethod
    def set_output_format(cls, format: str) -> None:
        """Set console output format (table, json, yaml)."""
        if format not in ("table", "json", "yaml"):
            raise ValueError(f"Invalid format: {format}")
        cls()._output_format = format

    @classmethod
    def get_output_format(cls) -> str:
        return cls()._output_format

    @classmethod
    def reset(cls) -> None:
        """Reset to defaults (mainly for testing)."""
        instance = cls()
        instance._max_workers = int(os.getenv("AUV_ANCHOR_MAX_WORKERS", "4"))
        instance._output_format = "table"
