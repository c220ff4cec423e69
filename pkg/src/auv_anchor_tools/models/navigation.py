"""Inertial drift models."""

import math
from typing import FrozenSet, Literal

from pydantic import Field

from .base import DomainModel

Axis = Literal["x", "y"]


class InsDivergenceModel(DomainModel):
    """Per-axis variance sigma0^2 + beta1 * exp(beta2 * d / distance_unit_m)."""

    sigma0_sq: float = Field(0.01, ge=0, description="Initial per-axis variance, m^2")
    beta1: float = Field(0.039, ge=0, description="Divergence scale, m^2")
    beta2: float = Field(0.053, ge=0, description="Divergence rate per distance unit")
    distance_unit_m: float = Field(1000.0, gt=0, description="Meters per exponent unit")

    def rate_per_meter(self) -> float:
        return self.beta2 / self.distance_unit_m


class LegSampling(DomainModel):
    """Discrete sampling of a straight leg at speed * slot arc-length steps."""

    speed: float = Field(2.0, gt=0, description="m/s")
    slot: float = Field(50.0, gt=0, description="Positioning slot T, s")
    distance: float = Field(0.0, ge=0, description="Leg length, m")

    @property
    def step(self) -> float:
        return self.speed * self.slot

    @property
    def sample_count(self) -> int:
        return max(1, math.floor(self.distance / self.step))

    def with_distance(self, distance: float) -> "LegSampling":
        return LegSampling(speed=self.speed, slot=self.slot, distance=distance)


class DivergenceFit(DomainModel):
    """Fitted divergence coefficients plus the fit's residual norm."""

    model: InsDivergenceModel
    residual: float = Field(..., ge=0, description="Root sum of squared residuals")
    points: int

    def to_dict(self) -> dict:
        return {
            "sigma0_sq": self.model.sigma0_sq,
            "beta1": self.model.beta1,
            "beta2": self.model.beta2,
            "distance_unit_m": self.model.distance_unit_m,
            "residual": self.residual,
        }


AXES_ALL: FrozenSet[str] = frozenset({"x", "y"})
