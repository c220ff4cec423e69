"""Localization geometry: Jacobians, Fisher information and CRLB.

A target observed by J anchors has Jacobian rows
``[cos(a) cos(b), cos(a) sin(b), sin(a)]`` (elevation a, azimuth b of the
anchor seen from the target). With a diagonal range covariance C the
Fisher information is ``J^T C^-1 J`` and the bound reported throughout is
the trace of its inverse, in m^2.
"""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from ..core.errors import (
    CoincidentPoints,
    DimensionMismatch,
    InvalidAngle,
    NoCoverage,
    SingularFim,
    TooFewAnchors,
)
from ..core.parallel import parallel_map
from ..models import (
    AnchorPosition,
    ClusterTopology,
    CoverageRule,
    CrlbField,
    MeasurementCovariance,
    RangeErrorParams,
    Region,
    SoundSpeedProfile,
)
from .profile_acoustics import los_variance, los_variance_many

logger = logging.getLogger("auv_anchor_tools.localization")

MAX_CONDITION = 1e12
COVERAGE_DIRECTIONS = 720
_COARSE_STEPS = 400
_BISECTION_ITERATIONS = 60

Point3 = Tuple[float, float, float]


def _as_point(target) -> np.ndarray:
    p = np.asarray(target, dtype=float)
    if p.shape != (3,):
        raise DimensionMismatch(f"target must be (x, y, z), got shape {p.shape}")
    return p


def _anchor_xyz(anchor) -> np.ndarray:
    if isinstance(anchor, AnchorPosition):
        return anchor.as_array()
    return _as_point(anchor)


def elevation_azimuth(target: Point3, anchor: AnchorPosition) -> Tuple[float, float]:
    """Elevation in [0, pi/2] and azimuth in (-pi, pi] of ``anchor`` seen
    from ``target``. A vertical line of sight has azimuth 0."""
    delta = _anchor_xyz(anchor) - _as_point(target)
    distance = float(np.linalg.norm(delta))
    if distance == 0.0:
        raise CoincidentPoints(_anchor_xyz(anchor))
    elevation = math.asin(min(1.0, abs(delta[2]) / distance))
    azimuth = math.atan2(delta[1], delta[0])
    return elevation, azimuth


def jacobian(target: Point3, anchors: Sequence[AnchorPosition]) -> np.ndarray:
    """J x 3 matrix of unit direction cosines from the target to each anchor."""
    if len(anchors) < 1:
        raise TooFewAnchors("jacobian needs at least one anchor")
    rows = []
    for anchor in anchors:
        alpha, beta = elevation_azimuth(target, anchor)
        rows.append(
            [
                math.cos(alpha) * math.cos(beta),
                math.cos(alpha) * math.sin(beta),
                math.sin(alpha),
            ]
        )
    return np.array(rows, dtype=float)


def fim(jac: np.ndarray, cov: MeasurementCovariance) -> np.ndarray:
    """Fisher information ``J^T C^-1 J`` for a diagonal covariance."""
    jac = np.asarray(jac, dtype=float)
    if jac.ndim != 2 or jac.shape[1] != 3:
        raise DimensionMismatch(f"jacobian must be J x 3, got {jac.shape}")
    if len(cov) != jac.shape[0]:
        raise DimensionMismatch(
            f"{len(cov)} variances for {jac.shape[0]} Jacobian rows"
        )
    weights = 1.0 / np.asarray(cov.variances, dtype=float)
    phi = jac.T @ (weights[:, None] * jac)
    return 0.5 * (phi + phi.T)


def _checked_inverse(phi: np.ndarray) -> np.ndarray:
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (3, 3):
        raise DimensionMismatch(f"FIM must be 3 x 3, got {phi.shape}")
    with np.errstate(divide="ignore", invalid="ignore"):
        condition = float(np.linalg.cond(phi))
    if not math.isfinite(condition) or condition > MAX_CONDITION:
        raise SingularFim(condition)
    return np.linalg.inv(phi)


def crlb_trace(phi: np.ndarray) -> float:
    """Trace of the inverse FIM, m^2."""
    return float(np.trace(_checked_inverse(phi)))


def crlb_components(phi: np.ndarray) -> Tuple[float, float]:
    """Horizontal (xx + yy) and vertical (zz) parts of the inverse FIM."""
    inv = _checked_inverse(phi)
    return float(inv[0, 0] + inv[1, 1]), float(inv[2, 2])


def center_crlb(n_anchors: int, elevation: float, sigma_d_sq: float) -> float:
    """Closed-form bound at the center of a symmetric ring:
    4 s^2 / (N cos^2 a) + s^2 / (N sin^2 a)."""
    if n_anchors < 3:
        raise TooFewAnchors(f"closed form needs >= 3 anchors, got {n_anchors}")
    if not 0.0 < elevation < math.pi / 2:
        raise InvalidAngle(elevation, "(0, pi/2)")
    cos_sq = math.cos(elevation) ** 2
    sin_sq = math.sin(elevation) ** 2
    return 4.0 * sigma_d_sq / (n_anchors * cos_sq) + sigma_d_sq / (n_anchors * sin_sq)


def cluster_sigma_d_sq(
    cluster: ClusterTopology,
    profile: SoundSpeedProfile,
    params: RangeErrorParams,
    layer_thickness: float = 100.0,
) -> float:
    """Range variance at the cluster's design elevation over its depth slab."""
    slab = profile.slab(cluster.target_design_depth, cluster.anchor_depth, layer_thickness)
    return los_variance(slab, cluster.design_elevation, params)


# Coverage


def _range_distances(points: np.ndarray, anchors: np.ndarray, depth: float, metric: str) -> np.ndarray:
    """(M, J) distances from horizontal points at ``depth`` to anchors."""
    dx = anchors[None, :, 0] - points[:, None, 0]
    dy = anchors[None, :, 1] - points[:, None, 1]
    horizontal_sq = dx * dx + dy * dy
    if metric == "horizontal":
        return np.sqrt(horizontal_sq)
    dz = anchors[None, :, 2] - depth
    return np.sqrt(horizontal_sq + dz * dz)


def anchors_in_range(
    points: np.ndarray,
    cluster: ClusterTopology,
    comm_range: float,
    rule: CoverageRule,
) -> np.ndarray:
    """(M, J) mask of anchors within comm range of each point."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))[:, :2]
    dist = _range_distances(
        pts, cluster.anchor_array(), cluster.target_design_depth, rule.range_metric
    )
    return dist <= comm_range


def covered(
    points: np.ndarray,
    cluster: ClusterTopology,
    comm_range: float,
    rule: CoverageRule,
) -> np.ndarray:
    """Boolean mask of points (M, 2) satisfying the coverage rule."""
    in_range = anchors_in_range(points, cluster, comm_range, rule)
    return in_range.sum(axis=1) >= rule.required(cluster.n_anchors)


def _horizontal_reach(cluster: ClusterTopology, comm_range: float, rule: CoverageRule) -> float:
    if rule.range_metric == "horizontal":
        return comm_range
    dz = cluster.anchor_depth - cluster.target_design_depth
    if comm_range <= dz:
        raise NoCoverage(
            f"comm range {comm_range} m does not reach anchors {dz} m below the target"
        )
    return math.sqrt(comm_range**2 - dz**2)


def coverage_radius(
    cluster: ClusterTopology,
    comm_range: float = 5000.0,
    rule: CoverageRule = CoverageRule(),
) -> float:
    """Radius of the largest disc about the cluster center, at the design
    depth, whose every point satisfies ``rule``.

    Each of 720 rays is scanned outward on a coarse grid up to the first
    uncovered sample, the crossing is refined by bisection, and the
    minimum over rays is returned.
    """
    dz = cluster.anchor_depth - cluster.target_design_depth
    if comm_range <= dz:
        raise NoCoverage(
            f"comm range {comm_range} m does not reach anchors {dz} m below the target"
        )
    center = np.array([cluster.center], dtype=float)
    if not covered(center, cluster, comm_range, rule)[0]:
        raise NoCoverage(f"cluster center fails coverage rule {rule.label}")

    limit = (_horizontal_reach(cluster, comm_range, rule) + cluster.ring_radius) * 1.01 + 1.0
    theta = 2 * math.pi * np.arange(COVERAGE_DIRECTIONS) / COVERAGE_DIRECTIONS
    ux, uy = np.cos(theta), np.sin(theta)
    radii = np.linspace(0.0, limit, _COARSE_STEPS + 1)

    cx, cy = cluster.center
    grid_x = cx + ux[:, None] * radii[None, :]
    grid_y = cy + uy[:, None] * radii[None, :]
    pts = np.column_stack([grid_x.ravel(), grid_y.ravel()])
    ok = covered(pts, cluster, comm_range, rule).reshape(COVERAGE_DIRECTIONS, -1)

    # The last sample on every ray lies beyond every anchor's reach
    first_fail = np.argmin(ok, axis=1)
    lo = radii[first_fail - 1]
    hi = radii[first_fail]
    for _ in range(_BISECTION_ITERATIONS):
        mid = 0.5 * (lo + hi)
        mid_pts = np.column_stack([cx + ux * mid, cy + uy * mid])
        inside = covered(mid_pts, cluster, comm_range, rule)
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)

    radius = float(np.min(lo))
    logger.debug(
        "Coverage radius %.2f m for N=%d rule=%s (worst ray %.1f deg)",
        radius,
        cluster.n_anchors,
        rule.label,
        math.degrees(theta[int(np.argmin(lo))]),
    )
    return radius


# Expected CRLB field


def point_crlb(
    target: Point3,
    cluster: ClusterTopology,
    slab: SoundSpeedProfile,
    params: RangeErrorParams,
    comm_range: float = 5000.0,
    rule: CoverageRule = CoverageRule(),
) -> float:
    """CRLB trace at one target from the in-range anchors of ``cluster``."""
    target = _as_point(target)
    mask = anchors_in_range(target[None, :2], cluster, comm_range, rule)[0]
    anchors = [a for a, keep in zip(cluster.anchors, mask) if keep]
    if len(anchors) < rule.required(cluster.n_anchors):
        raise NoCoverage(f"point {tuple(target)} fails coverage rule {rule.label}")
    variances = []
    for anchor in anchors:
        alpha, _ = elevation_azimuth(target, anchor)
        variances.append(los_variance(slab, alpha, params))
    jac = jacobian(target, anchors)
    return crlb_trace(fim(jac, MeasurementCovariance(variances=tuple(variances))))


def crlb_many(
    points: np.ndarray,
    depth: float,
    cluster: ClusterTopology,
    slab: SoundSpeedProfile,
    params: RangeErrorParams,
    comm_range: float,
    rule: CoverageRule,
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized CRLB trace for horizontal points (M, 2) at ``depth``.

    Returns ``(crlb, covered)``; uncovered points hold NaN. Anchors whose
    ray reflects are left out of the measurement set, and points whose
    remaining geometry is singular count as uncovered.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))[:, :2]
    anchors = cluster.anchor_array()
    delta = np.empty((pts.shape[0], anchors.shape[0], 3))
    delta[..., 0] = anchors[None, :, 0] - pts[:, None, 0]
    delta[..., 1] = anchors[None, :, 1] - pts[:, None, 1]
    delta[..., 2] = anchors[None, :, 2] - depth
    slant = np.linalg.norm(delta, axis=-1)
    if np.any(slant == 0):
        raise CoincidentPoints(anchors[np.argwhere(slant == 0)[0][1]])

    metric = np.hypot(delta[..., 0], delta[..., 1]) if rule.range_metric == "horizontal" else slant
    in_range = metric <= comm_range
    elevation = np.arcsin(np.minimum(1.0, np.abs(delta[..., 2]) / slant))
    variances, reflected = los_variance_many(slab, elevation, params)
    if np.any(reflected & in_range):
        logger.warning("%d anchor links dropped for total reflection", int(np.sum(reflected & in_range)))
    usable = in_range & ~reflected
    is_covered = usable.sum(axis=1) >= rule.required(cluster.n_anchors)

    rows = delta / slant[..., None]
    rows[..., 2] = np.abs(rows[..., 2])
    weights = np.where(usable, 1.0 / np.where(usable, variances, 1.0), 0.0)
    phi = np.einsum("mj,mja,mjb->mab", weights, rows, rows)

    crlb = np.full(pts.shape[0], np.nan)
    idx = np.flatnonzero(is_covered)
    if idx.size:
        with np.errstate(divide="ignore", invalid="ignore"):
            condition = np.linalg.cond(phi[idx])
        good = np.isfinite(condition) & (condition <= MAX_CONDITION)
        is_covered[idx[~good]] = False
        idx = idx[good]
        if idx.size:
            crlb[idx] = np.trace(np.linalg.inv(phi[idx]), axis1=1, axis2=2)
    return crlb, is_covered


def _cell_centers(lo: float, hi: float, step: float) -> np.ndarray:
    count = max(1, math.ceil((hi - lo) / step - 1e-9))
    mid = 0.5 * (lo + hi)
    return mid + (np.arange(count) - (count - 1) / 2.0) * step


def expected_crlb_field(
    cluster: ClusterTopology,
    profile: SoundSpeedProfile,
    params: RangeErrorParams,
    region: Region,
    step: float = 100.0,
    comm_range: float = 5000.0,
    rule: CoverageRule = CoverageRule(),
    layer_thickness: float = 100.0,
    max_workers: Optional[int] = None,
) -> CrlbField:
    """Traverse ``region`` on a ``step`` grid at the design depth.

    Q is the mean CRLB over covered cells. Rows are evaluated in parallel;
    the mean is an exactly rounded sum over the row-major enumeration.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    slab = profile.slab(cluster.target_design_depth, cluster.anchor_depth, layer_thickness)
    xs = _cell_centers(region.x_min, region.x_max, step)
    ys = _cell_centers(region.y_min, region.y_max, step)

    def evaluate_row(y: float):
        pts = np.column_stack([xs, np.full(xs.shape, y)])
        return crlb_many(
            pts, cluster.target_design_depth, cluster, slab, params, comm_range, rule
        )

    rows = parallel_map(evaluate_row, ys.tolist(), max_workers=max_workers)
    values = [v for crlb, mask in rows for v, m in zip(crlb.tolist(), mask.tolist()) if m]
    if not values:
        raise NoCoverage(f"no cell of the region satisfies coverage rule {rule.label}")
    q = math.fsum(values) / len(values)
    logger.debug("Field %dx%d, %d covered cells, Q=%.6e m^2", len(xs), len(ys), len(values), q)

    return CrlbField(
        xs=tuple(xs.tolist()),
        ys=tuple(ys.tolist()),
        crlb=tuple(tuple(crlb.tolist()) for crlb, _ in rows),
        covered=tuple(tuple(bool(m) for m in mask.tolist()) for _, mask in rows),
        step=step,
        q=q,
        rule=rule,
    )


def coverage_region(cluster: ClusterTopology, comm_range: float, rule: CoverageRule) -> Region:
    """Square around the cluster enclosing every point that could be covered."""
    half = _horizontal_reach(cluster, comm_range, rule) + cluster.ring_radius
    return Region.around(cluster.center, half)
