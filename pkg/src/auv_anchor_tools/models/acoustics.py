"""Sound speed profile and range error models."""

import math
from pathlib import Path
from typing import Tuple, Union

import numpy as np
import pandas as pd
from pydantic import Field, field_validator

from .base import DomainModel

PROFILE_CSV_COLUMNS = ("depth_m", "speed_mps")

# Piecewise-linear stand-in for a deep-water channel: speed falls to the
# channel axis at 1300 m, then rises with the adiabatic gradient.
_MUNK_LIKE = ((0.0, 1520.0), (1300.0, 1490.0), (6000.0, 1566.0))


class SoundSpeedProfile(DomainModel):
    """Layered sound speed table.

    Layer 1 is the shallowest entry; for a slab produced by :meth:`slab`
    that is the target's layer, with indices increasing toward the anchor.
    """

    layers: Tuple[Tuple[float, float], ...] = Field(
        ..., description="(depth m, speed m/s) pairs, depth increasing"
    )

    @field_validator("layers")
    @classmethod
    def validate_layers(cls, v):
        if len(v) < 1:
            raise ValueError("profile needs at least one layer")
        depths = [d for d, _ in v]
        if any(b <= a for a, b in zip(depths, depths[1:])):
            raise ValueError("profile depths must be strictly increasing")
        if any(not (s > 0 and math.isfinite(s)) for _, s in v):
            raise ValueError("profile speeds must be finite and positive")
        return tuple((float(d), float(s)) for d, s in v)

    @property
    def depths(self) -> np.ndarray:
        return np.array([d for d, _ in self.layers], dtype=float)

    @property
    def speeds(self) -> np.ndarray:
        return np.array([s for _, s in self.layers], dtype=float)

    def __len__(self) -> int:
        return len(self.layers)

    def slab(self, top: float, bottom: float, thickness: float = 100.0) -> "SoundSpeedProfile":
        """Resample onto uniform layers spanning ``[top, bottom)``.

        Layer tops are ``top, top + thickness, ...`` strictly above
        ``bottom``; each layer takes the interpolated speed at its top.
        """
        if thickness <= 0:
            raise ValueError(f"layer thickness must be positive, got {thickness}")
        if bottom <= top:
            raise ValueError(f"slab bottom {bottom} must be below top {top}")
        count = max(1, math.ceil((bottom - top) / thickness - 1e-9))
        tops = top + thickness * np.arange(count)
        speeds = np.interp(tops, self.depths, self.speeds)
        return SoundSpeedProfile(layers=tuple(zip(tops.tolist(), speeds.tolist())))

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "SoundSpeedProfile":
        """Read a ``depth_m,speed_mps`` CSV."""
        frame = pd.read_csv(path)
        missing = [c for c in PROFILE_CSV_COLUMNS if c not in frame.columns]
        if missing:
            raise ValueError(f"{path}: missing columns {', '.join(missing)}")
        return cls(
            layers=tuple(
                zip(frame["depth_m"].astype(float), frame["speed_mps"].astype(float))
            )
        )

    @classmethod
    def builtin(cls, name: str) -> "SoundSpeedProfile":
        """Construct one of the named built-in profiles."""
        if name == "iso1500":
            return cls(layers=((0.0, 1500.0),))
        if name == "default-munk-like":
            return cls(layers=_MUNK_LIKE)
        raise ValueError(
            f"Unknown profile '{name}'. Built-ins: {', '.join(BUILTIN_PROFILES)}"
        )


BUILTIN_PROFILES = ("iso1500", "default-munk-like")


class RangeErrorParams(DomainModel):
    """Timing error model; per-layer path std is gamma times layer path length."""

    gamma: float = Field(0.001, gt=0, description="Dimensionless timing error scale")
