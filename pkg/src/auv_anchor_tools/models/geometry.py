"""Anchor cluster geometry models."""

import math
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from .base import DomainModel

DEFAULT_DESIGN_ELEVATION_DEG = 46.0


class AnchorPosition(DomainModel):
    """Seafloor anchor; z is depth, positive down."""

    x: float
    y: float
    z: float = Field(..., ge=0)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


class CoverageRule(DomainModel):
    """Decides whether a point receives an acoustic fix from a cluster.

    ``min_anchors=None`` requires every anchor of the cluster in range.
    ``range_metric`` selects whether the comm range is measured along the
    slant line or on the horizontal plane.
    """

    min_anchors: Optional[int] = Field(3, ge=1)
    range_metric: Literal["slant", "horizontal"] = "slant"

    def required(self, n_anchors: int) -> int:
        return n_anchors if self.min_anchors is None else self.min_anchors

    @property
    def label(self) -> str:
        need = "all" if self.min_anchors is None else f"min{self.min_anchors}"
        return f"{need}-{self.range_metric}"


class ClusterTopology(DomainModel):
    """One anchor ring: N_ca anchors evenly spaced in azimuth at anchor depth."""

    center: Tuple[float, float] = (0.0, 0.0)
    anchor_depth: float = Field(3000.0, gt=0)
    target_design_depth: float = Field(500.0, ge=0)
    n_anchors: int = Field(..., ge=1)
    design_elevation: float = Field(math.radians(DEFAULT_DESIGN_ELEVATION_DEG), gt=0)
    ring_radius: float = Field(..., ge=0)
    anchors: Tuple[AnchorPosition, ...]

    @model_validator(mode="after")
    def validate_ring(self):
        if self.target_design_depth >= self.anchor_depth:
            raise ValueError("target design depth must be above the anchors")
        if len(self.anchors) != self.n_anchors:
            raise ValueError(
                f"expected {self.n_anchors} anchors, got {len(self.anchors)}"
            )
        return self

    @classmethod
    def ring(
        cls,
        n_anchors: int,
        center: Tuple[float, float] = (0.0, 0.0),
        anchor_depth: float = 3000.0,
        target_design_depth: float = 500.0,
        design_elevation: float = math.radians(DEFAULT_DESIGN_ELEVATION_DEG),
        ring_radius: Optional[float] = None,
    ) -> "ClusterTopology":
        """Build the ring so the design-depth center sees every anchor at the
        design elevation. Azimuth origin is east (0 rad).
        """
        if ring_radius is None:
            if not 0 < design_elevation <= math.pi / 2:
                raise ValueError(f"design elevation {design_elevation} out of (0, pi/2]")
            ring_radius = (anchor_depth - target_design_depth) / math.tan(design_elevation)
        cx, cy = center
        anchors = tuple(
            AnchorPosition(
                x=cx + ring_radius * math.cos(2 * math.pi * j / n_anchors),
                y=cy + ring_radius * math.sin(2 * math.pi * j / n_anchors),
                z=anchor_depth,
            )
            for j in range(n_anchors)
        )
        return cls(
            center=(float(cx), float(cy)),
            anchor_depth=anchor_depth,
            target_design_depth=target_design_depth,
            n_anchors=n_anchors,
            design_elevation=design_elevation,
            ring_radius=float(ring_radius),
            anchors=anchors,
        )

    def moved_to(self, center: Tuple[float, float]) -> "ClusterTopology":
        """Same ring geometry about a different center."""
        return ClusterTopology.ring(
            self.n_anchors,
            center=center,
            anchor_depth=self.anchor_depth,
            target_design_depth=self.target_design_depth,
            design_elevation=self.design_elevation,
            ring_radius=self.ring_radius,
        )

    def anchor_array(self) -> np.ndarray:
        """Anchors as an (N, 3) array."""
        return np.array([a.as_array() for a in self.anchors], dtype=float)


class MeasurementCovariance(DomainModel):
    """Diagonal range measurement covariance, one variance per anchor."""

    variances: Tuple[float, ...]

    @field_validator("variances")
    @classmethod
    def validate_variances(cls, v):
        if any(not (s > 0 and math.isfinite(s)) for s in v):
            raise ValueError("measurement variances must be finite and positive")
        return tuple(float(s) for s in v)

    def __len__(self) -> int:
        return len(self.variances)


class Region(DomainModel):
    """Axis-aligned rectangle in meters."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    @model_validator(mode="after")
    def validate_bounds(self):
        if self.x_max < self.x_min or self.y_max < self.y_min:
            raise ValueError("region bounds are inverted")
        return self

    @classmethod
    def around(cls, center: Tuple[float, float], half_width: float) -> "Region":
        cx, cy = center
        return cls(
            x_min=cx - half_width,
            x_max=cx + half_width,
            y_min=cy - half_width,
            y_max=cy + half_width,
        )


class CrlbField(DomainModel):
    """Expected-CRLB grid sampled at cell centers.

    ``crlb`` holds NaN for uncovered cells.
    """

    xs: Tuple[float, ...]
    ys: Tuple[float, ...]
    crlb: Tuple[Tuple[float, ...], ...] = Field(..., description="indexed [iy][ix]")
    covered: Tuple[Tuple[bool, ...], ...]
    step: float
    q: float = Field(..., description="Mean CRLB over covered cells, m^2")
    rule: CoverageRule

    def cells(self) -> List[Tuple[float, float, float, bool]]:
        """Rows of (x, y, crlb, covered) in row-major order (y outer)."""
        out = []
        for iy, y in enumerate(self.ys):
            for ix, x in enumerate(self.xs):
                out.append((x, y, self.crlb[iy][ix], self.covered[iy][ix]))
        return out

    @property
    def covered_count(self) -> int:
        return sum(sum(row) for row in self.covered)
