"""Path simulation models."""

import math
from typing import Literal, Optional, Tuple

from pydantic import Field, model_validator

from .acoustics import RangeErrorParams, SoundSpeedProfile
from .base import DomainModel
from .planning import ClusterDesign

SimPathKind = Literal["r1", "r2", "r3", "random"]


class PathSpec(DomainModel):
    """Straight path at constant depth.

    ``start``/``dest`` are required for ``random`` once drawn; for the
    structured kinds they are derived from the plan.
    """

    kind: SimPathKind = "random"
    start: Optional[Tuple[float, float]] = None
    dest: Optional[Tuple[float, float]] = None
    depth: float = Field(500.0, ge=0)

    @model_validator(mode="after")
    def validate_endpoints(self):
        if (self.start is None) != (self.dest is None):
            raise ValueError("start and dest must be given together")
        if self.start is not None and tuple(self.start) == tuple(self.dest):
            raise ValueError("start and dest must differ")
        return self


class PathSample(DomainModel):
    s: float = Field(..., ge=0, description="Arc length along the path, m")
    error_var: float = Field(..., ge=0, description="m^2")
    in_coverage: bool


class SimulationReport(DomainModel):
    per_sample: Tuple[PathSample, ...]
    mean_error_var: float = Field(..., ge=0)
    trial_seed: int
    path: PathSpec

    @property
    def mean_error_rmse(self) -> float:
        return math.sqrt(self.mean_error_var)

    @property
    def nav_fraction(self) -> float:
        """Share of samples outside acoustic coverage."""
        if not self.per_sample:
            return 0.0
        return sum(not p.in_coverage for p in self.per_sample) / len(self.per_sample)


class MonteCarloSummary(DomainModel):
    trials: int
    mean: float
    std: float
    min: float
    max: float
    master_seed: int
    rmse_mean: float = Field(..., description="Mean of per-trial sqrt(mean_error_var)")


class SimulationSetup(DomainModel):
    """Everything besides plan, path and drift model that a simulated
    voyage needs to decide coverage and the error inside it.

    ``coverage_model="disc"`` counts a point as covered within ``d_com``
    of the nearest cluster center; ``"rule"`` applies the design's
    coverage rule to every cluster. ``pin_center_error`` reports the
    ring-center closed form instead of the local bound.
    """

    design: ClusterDesign = Field(default_factory=ClusterDesign)
    profile: SoundSpeedProfile = Field(default_factory=lambda: SoundSpeedProfile.builtin("iso1500"))
    params: RangeErrorParams = Field(default_factory=RangeErrorParams)
    coverage_model: Literal["rule", "disc"] = "rule"
    pin_center_error: bool = False
