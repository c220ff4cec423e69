"""Refraction-aware range measurement variance.

The line-of-sight range error between an anchor and a target is the
sum over depth layers i = 2..I of

    gamma^2 s_{i-1}^2 / (s_1^2 - s_{i-1}^2 cos^2(alpha))

where s_1 is the speed in the target's layer and alpha the elevation of
the anchor seen from the target. The ray turns back before layer i when
s_1^2 - s_i^2 cos^2(alpha) <= 0 (Snell); that check over i = 2..I also
keeps every denominator of the sum positive.
"""

import logging
import math
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from ..core.errors import InvalidAngle, TotalReflection
from ..models import RangeErrorParams, SoundSpeedProfile

logger = logging.getLogger("auv_anchor_tools.profile_acoustics")


def _check_elevation(elevation: float) -> None:
    if not (0.0 < elevation <= math.pi / 2) or math.isnan(elevation):
        raise InvalidAngle(elevation)


def los_variance_terms(
    profile: SoundSpeedProfile, elevation: float, params: RangeErrorParams
) -> np.ndarray:
    """Per-layer summands for layers 2..I; empty for a single-layer profile."""
    _check_elevation(elevation)
    speeds = profile.speeds
    s1_sq = speeds[0] ** 2
    cos_sq = math.cos(elevation) ** 2
    entering = np.flatnonzero(s1_sq - speeds[1:] ** 2 * cos_sq <= 0)
    if entering.size:
        raise TotalReflection(int(entering[0]) + 2, elevation)
    upper_sq = speeds[:-1] ** 2
    return params.gamma**2 * upper_sq / (s1_sq - upper_sq * cos_sq)


def los_variance(
    profile: SoundSpeedProfile, elevation: float, params: RangeErrorParams
) -> float:
    """LOS range variance sigma_d^2 in m^2 at the given elevation (radians)."""
    return float(np.sum(los_variance_terms(profile, elevation, params)))


def los_variance_many(
    profile: SoundSpeedProfile, elevations: np.ndarray, params: RangeErrorParams
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`los_variance` over an array of elevations.

    Returns ``(variances, reflected)``; entries where any layer reflects
    hold NaN and are flagged in ``reflected`` instead of raising.
    Elevations must already lie in (0, pi/2].
    """
    elevations = np.asarray(elevations, dtype=float)
    if np.any(~((elevations > 0) & (elevations <= math.pi / 2))):
        bad = elevations[~((elevations > 0) & (elevations <= math.pi / 2))]
        raise InvalidAngle(float(bad.flat[0]))
    speeds = profile.speeds
    upper_sq = speeds[:-1] ** 2
    cos_sq = np.cos(elevations)[..., None] ** 2
    denominators = speeds[0] ** 2 - upper_sq * cos_sq
    reflected = np.any(speeds[0] ** 2 - speeds[1:] ** 2 * cos_sq <= 0, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = params.gamma**2 * upper_sq / denominators
    variances = np.where(reflected, np.nan, np.sum(terms, axis=-1))
    return variances, reflected


def resolve_profile(
    name: str = "iso1500", csv_path: Optional[Union[str, Path]] = None
) -> SoundSpeedProfile:
    """Profile from a CSV file when given, otherwise a built-in by name."""
    if csv_path:
        logger.debug("Loading sound speed profile from %s", csv_path)
        return SoundSpeedProfile.from_csv(csv_path)
    return SoundSpeedProfile.builtin(name)


def slab_for(
    profile: SoundSpeedProfile,
    target_depth: float,
    anchor_depth: float,
    thickness: float = 100.0,
) -> SoundSpeedProfile:
    """Layers between the target and the anchors, target layer first."""
    return profile.slab(target_depth, anchor_depth, thickness)
