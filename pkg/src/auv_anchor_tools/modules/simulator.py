"""Seeded voyage simulation across a deployment plan.

The AUV moves on a straight line at constant depth and is sampled every
``speed * slot`` meters. Inside coverage its error variance is the local
CRLB and the drift odometer resets; outside it the per-axis INS variance
grows with the distance traveled since the last fix.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import Diverged, InputError, PathOutsideRegion
from ..core.parallel import parallel_map
from ..models import (
    DeploymentPlan,
    InsDivergenceModel,
    LegSampling,
    MonteCarloSummary,
    PathSample,
    PathSpec,
    SimulationReport,
    SimulationSetup,
)
from .ins_drift import position_variance_many
from .localization import center_crlb, crlb_many
from .profile_acoustics import los_variance, slab_for

logger = logging.getLogger("auv_anchor_tools.simulator")

MASK64 = (1 << 64) - 1
_EDGE_TOLERANCE = 1e-6


def splitmix64(value: int) -> int:
    """One round of the SplitMix64 finalizer over a 64-bit integer."""
    z = (value + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_seed(master_seed: int, trial: int) -> int:
    """Per-trial seed: SplitMix64 of ``master_seed XOR trial``."""
    return splitmix64((master_seed ^ trial) & MASK64)


def path_axes(kind: str) -> Tuple[str, ...]:
    return {"r1": ("x",), "r2": ("y",)}.get(kind, ("x", "y"))


def resolve_path(plan: DeploymentPlan, path: PathSpec, seed: int) -> PathSpec:
    """Fill in endpoints: middle row (r1), middle column (r2), main
    diagonal (r3), or a left-to-right crossing with uniform heights
    drawn from ``seed`` (random)."""
    if path.start is not None:
        return path
    side = plan.side_m
    if path.kind == "random":
        rng = np.random.default_rng(seed)
        y0, y1 = rng.uniform(0.0, side, size=2)
        start, dest = (0.0, float(y0)), (side, float(y1))
    else:
        middle = plan.per_axis // 2
        row = plan.cluster_centers[middle * plan.per_axis][1]
        column = plan.cluster_centers[middle][0]
        start, dest = {
            "r1": ((0.0, row), (side, row)),
            "r2": ((column, 0.0), (column, side)),
            "r3": ((0.0, 0.0), (side, side)),
        }[path.kind]
    return PathSpec(kind=path.kind, start=start, dest=dest, depth=path.depth)


def _check_inside(plan: DeploymentPlan, path: PathSpec) -> None:
    side = plan.side_m
    for label, (x, y) in (("start", path.start), ("dest", path.dest)):
        if not (-_EDGE_TOLERANCE <= x <= side + _EDGE_TOLERANCE and -_EDGE_TOLERANCE <= y <= side + _EDGE_TOLERANCE):
            raise PathOutsideRegion(f"path {label} ({x:.1f}, {y:.1f}) lies outside the {side:.0f} m region")


def _coverage_errors(
    plan: DeploymentPlan, points: np.ndarray, depth: float, setup: SimulationSetup
) -> Tuple[np.ndarray, np.ndarray]:
    """Error variance and coverage flag for every sample point."""
    design = setup.design
    slab = slab_for(setup.profile, depth, design.anchor_depth, design.layer_thickness)
    template = design.cluster(plan.per_cluster)
    centers = np.asarray(plan.cluster_centers, dtype=float)

    pinned = None
    if setup.pin_center_error:
        # Elevation of the ring seen from the center at the path depth
        elevation = math.atan2(design.anchor_depth - depth, template.ring_radius)
        pinned = center_crlb(plan.per_cluster, elevation, los_variance(slab, elevation, setup.params))

    errors = np.full(points.shape[0], np.inf)
    if setup.coverage_model == "disc":
        dist = np.hypot(points[:, None, 0] - centers[None, :, 0], points[:, None, 1] - centers[None, :, 1])
        nearest = np.argmin(dist, axis=1)
        inside = dist[np.arange(points.shape[0]), nearest] <= plan.d_com
        for k in np.unique(nearest[inside]):
            idx = np.flatnonzero(inside & (nearest == k))
            if pinned is not None:
                errors[idx] = pinned
                continue
            cluster = template.moved_to(tuple(centers[k]))
            crlb, ok = crlb_many(points[idx], depth, cluster, slab, setup.params, design.comm_range, design.rule)
            errors[idx[ok]] = crlb[ok]
    else:
        for center in centers:
            cluster = template.moved_to(tuple(center))
            crlb, ok = crlb_many(points, depth, cluster, slab, setup.params, design.comm_range, design.rule)
            if pinned is not None:
                crlb = np.where(ok, pinned, crlb)
            errors = np.where(ok, np.minimum(errors, crlb), errors)
    covered = np.isfinite(errors)
    return errors, covered


def simulate_path(
    plan: DeploymentPlan,
    setup: SimulationSetup,
    path: PathSpec,
    model: InsDivergenceModel,
    leg: LegSampling,
    seed: int,
) -> SimulationReport:
    """Sample one voyage and report per-sample error variance."""
    if path.depth >= setup.design.anchor_depth:
        raise InputError(f"path depth {path.depth} m must be above the anchors")
    path = resolve_path(plan, path, seed)
    _check_inside(plan, path)

    start = np.asarray(path.start, dtype=float)
    heading = np.asarray(path.dest, dtype=float) - start
    length = float(np.linalg.norm(heading))
    heading /= length
    count = int(math.floor(length / leg.step + 1e-9))
    s = np.arange(count + 1, dtype=float) * leg.step
    points = start[None, :] + s[:, None] * heading[None, :]

    errors, covered = _coverage_errors(plan, points, path.depth, setup)

    # Arc length of the most recent fix; the voyage starts with a zeroed odometer
    last_fix = np.maximum.accumulate(np.where(covered, s, 0.0))
    since_fix = s - last_fix
    drift = np.zeros_like(s)
    for axis in path_axes(path.kind):
        share = abs(heading[0] if axis == "x" else heading[1])
        drift += position_variance_many(model, since_fix * share)
    errors = np.where(covered, errors, drift)
    if not np.all(np.isfinite(errors)):
        raise Diverged(f"INS variance overflows along a {length:.0f} m {path.kind} path")

    samples = tuple(
        PathSample(s=si, error_var=ei, in_coverage=ci)
        for si, ei, ci in zip(s.tolist(), errors.tolist(), covered.tolist())
    )
    return SimulationReport(
        per_sample=samples,
        mean_error_var=float(np.mean(errors)),
        trial_seed=seed,
        path=path,
    )


def summarize(reports: Sequence[SimulationReport], master_seed: int) -> MonteCarloSummary:
    """Statistics of per-trial mean variance, computed on the sorted values."""
    values = sorted(r.mean_error_var for r in reports)
    n = len(values)
    mean = math.fsum(values) / n
    std = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / n)
    return MonteCarloSummary(
        trials=n,
        mean=mean,
        std=std,
        min=values[0],
        max=values[-1],
        master_seed=master_seed,
        rmse_mean=math.fsum(sorted(r.mean_error_rmse for r in reports)) / n,
    )


def monte_carlo(
    plan: DeploymentPlan,
    setup: SimulationSetup,
    kind: str,
    trials: int,
    model: InsDivergenceModel,
    leg: LegSampling,
    master_seed: int,
    depth: Optional[float] = None,
    max_workers: Optional[int] = None,
) -> Tuple[List[SimulationReport], MonteCarloSummary]:
    """Run ``trials`` independent voyages; reports keep trial order."""
    if trials < 1:
        raise InputError(f"trials must be >= 1, got {trials}")
    path = PathSpec(kind=kind, depth=setup.design.target_depth if depth is None else depth)
    seeds = [trial_seed(master_seed, t) for t in range(trials)]
    logger.debug("Monte Carlo: %d %s trials, master seed %d", trials, kind, master_seed)
    reports = parallel_map(
        lambda seed: simulate_path(plan, setup, path, model, leg, seed),
        seeds,
        max_workers=max_workers,
    )
    return reports, summarize(reports, master_seed)
