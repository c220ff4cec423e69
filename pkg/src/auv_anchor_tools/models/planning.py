"""Objective weights and plan evaluation models."""

import math
from typing import Literal, Optional, Tuple

from pydantic import Field

from .base import DomainModel
from .deployment import DeploymentPlan
from .geometry import DEFAULT_DESIGN_ELEVATION_DEG, ClusterTopology, CoverageRule

PathKind = Literal["r1", "r2", "r3"]
PATH_KINDS: tuple = ("r1", "r2", "r3")


class ObjectiveWeights(DomainModel):
    """lambda1 weights covered vs uncovered stretches; lambda2 positioning vs
    navigation inside coverage."""

    lambda1: float = Field(1.0, ge=0, le=1)
    lambda2: float = Field(1.0, ge=0, le=1)


class PlanEvaluation(DomainModel):
    q_term: float = Field(..., ge=0, description="E[CRLB] over coverage, m^2")
    nav_term: float = Field(..., ge=0, description="Navigation expectation, m^2")
    objective: float = Field(..., ge=0, description="Weighted objective, m^2")
    path_kind: Optional[PathKind] = Field(
        None, description="None for the mean over r1, r2 and r3"
    )
    lambda1: float = Field(1.0, ge=0, le=1)


class ClusterDesign(DomainModel):
    """Geometry shared by every cluster of a deployment."""

    anchor_depth: float = Field(3000.0, gt=0, description="m")
    target_depth: float = Field(500.0, ge=0, description="AUV design depth, m")
    design_elevation: float = Field(
        math.radians(DEFAULT_DESIGN_ELEVATION_DEG), gt=0, le=math.pi / 2, description="rad"
    )
    comm_range: float = Field(5000.0, gt=0, description="m")
    rule: CoverageRule = Field(default_factory=CoverageRule)
    traversal_step: float = Field(100.0, gt=0, description="Field grid step, m")
    layer_thickness: float = Field(100.0, gt=0, description="Profile slab layer, m")

    def cluster(self, n_anchors: int, center: Tuple[float, float] = (0.0, 0.0)) -> ClusterTopology:
        return ClusterTopology.ring(
            n_anchors,
            center=center,
            anchor_depth=self.anchor_depth,
            target_design_depth=self.target_depth,
            design_elevation=self.design_elevation,
        )


class CandidateAssessment(DomainModel):
    """Weight-independent part of a candidate: coverage radius, Q and layout."""

    per_cluster: int = Field(..., ge=3)
    d_com: float = Field(..., gt=0, description="Coverage radius, m")
    q: float = Field(..., ge=0, description="E[CRLB] over coverage, m^2")
    plan: DeploymentPlan
