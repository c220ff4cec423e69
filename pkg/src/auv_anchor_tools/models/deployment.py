"""Deployment plan model."""

from typing import Tuple

from pydantic import Field, model_validator

from .base import DomainModel


class DeploymentPlan(DomainModel):
    """Anchor clusters on a uniform grid over a square region."""

    side_km: float = Field(..., gt=0)
    n_total: int = Field(..., ge=1)
    per_cluster: int = Field(..., ge=3)
    n_clusters: int = Field(..., ge=1)
    per_axis: int = Field(..., ge=1)
    cluster_centers: Tuple[Tuple[float, float], ...]
    d_c: float = Field(..., gt=0, description="Adjacent-cluster spacing, m")
    d_com: float = Field(..., gt=0, description="Cluster coverage radius, m")
    d_h: float = Field(..., description="Pure-navigation gap d_c - 2 d_com, m")
    d_h1: float = Field(..., description="Equal-gap navigation distance, m")
    leftover: int = Field(0, ge=0, description="Anchors not placed in any cluster")

    @model_validator(mode="after")
    def validate_grid(self):
        if len(self.cluster_centers) != self.per_axis**2:
            raise ValueError("cluster_centers must form a per_axis x per_axis grid")
        return self

    @property
    def side_m(self) -> float:
        return self.side_km * 1000.0

    @property
    def seamless(self) -> bool:
        return self.d_h <= 0

    def to_dict(self) -> dict:
        data = self.model_dump(mode="json")
        data["cluster_centers"] = [[x, y] for x, y in self.cluster_centers]
        return data
