"""Pydantic models for AUV Anchor Tools."""

from .base import DomainModel
from .acoustics import SoundSpeedProfile, RangeErrorParams, BUILTIN_PROFILES
from .geometry import (
    AnchorPosition,
    ClusterTopology,
    CoverageRule,
    CrlbField,
    MeasurementCovariance,
    Region,
)
from .navigation import AXES_ALL, DivergenceFit, InsDivergenceModel, LegSampling
from .deployment import DeploymentPlan
from .planning import (
    PATH_KINDS,
    CandidateAssessment,
    ClusterDesign,
    ObjectiveWeights,
    PlanEvaluation,
)
from .simulation import (
    MonteCarloSummary,
    PathSample,
    PathSpec,
    SimulationReport,
    SimulationSetup,
)

__all__ = [
    "DomainModel",
    "SoundSpeedProfile",
    "RangeErrorParams",
    "BUILTIN_PROFILES",
    "AnchorPosition",
    "ClusterTopology",
    "CoverageRule",
    "CrlbField",
    "MeasurementCovariance",
    "Region",
    "AXES_ALL",
    "DivergenceFit",
    "InsDivergenceModel",
    "LegSampling",
    "DeploymentPlan",
    "ObjectiveWeights",
    "PlanEvaluation",
    "PATH_KINDS",
    "CandidateAssessment",
    "ClusterDesign",
    "MonteCarloSummary",
    "PathSample",
    "PathSpec",
    "SimulationReport",
    "SimulationSetup",
]
