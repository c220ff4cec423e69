"""Cluster grid layout and the stable-navigation feasibility condition."""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from ..core.errors import Infeasible, InputError, TooFewAnchors
from ..core.parallel import parallel_map
from ..models import DeploymentPlan, InsDivergenceModel

logger = logging.getLogger("auv_anchor_tools.deployment")

SCAN_STEPS = 1000
SIDE_TOLERANCE_M = 0.1


def grid_counts(n_total: int, per_cluster: int) -> Tuple[int, int]:
    if per_cluster < 3:
        raise TooFewAnchors(f"a cluster needs at least 3 anchors, got {per_cluster}")
    n_clusters = n_total // per_cluster
    if n_clusters < 1:
        raise TooFewAnchors(
            f"{n_total} anchors cannot form one cluster of {per_cluster}"
        )
    return n_clusters, math.isqrt(n_clusters)


def navigation_gap(side_m: float, per_axis: int, d_com: float) -> float:
    """Equal gap left between coverage discs along a row: (side - 2 d_com N) / (N + 1)."""
    return (side_m - 2.0 * d_com * per_axis) / (per_axis + 1)


def layout_clusters(
    side_km: float, n_total: int, per_cluster: int, d_com: float
) -> DeploymentPlan:
    """Place floor(sqrt(n_total // per_cluster))^2 clusters on a uniform grid."""
    if side_km <= 0:
        raise InputError(f"side_km must be positive, got {side_km}")
    if d_com <= 0:
        raise InputError(f"d_com must be positive, got {d_com}")
    n_clusters, per_axis = grid_counts(n_total, per_cluster)

    side_m = side_km * 1000.0
    d_c = side_m / per_axis
    offset = d_c / 2.0 + (side_m - per_axis * d_c) / 2.0
    coords = [offset + i * d_c for i in range(per_axis)]
    centers = tuple((x, y) for y in coords for x in coords)

    leftover = n_total % per_cluster
    unplaced = n_clusters - per_axis**2
    if leftover or unplaced:
        logger.warning(
            "%d leftover anchor(s) and %d unplaced cluster(s) for n_total=%d per_cluster=%d",
            leftover,
            unplaced,
            n_total,
            per_cluster,
        )

    return DeploymentPlan(
        side_km=side_km,
        n_total=n_total,
        per_cluster=per_cluster,
        n_clusters=n_clusters,
        per_axis=per_axis,
        cluster_centers=centers,
        d_c=d_c,
        d_com=d_com,
        d_h=d_c - 2.0 * d_com,
        d_h1=navigation_gap(side_m, per_axis, d_com),
        leftover=leftover,
    )


def stable_navigation_margin(d_com: float, d_h1: float, model: InsDivergenceModel) -> float:
    """d_com^2 - d_com^4/(d_com + d_h1)^2 - (beta1 + 1) e^(beta2 d_h1) - 2 sigma0^2.

    Positive when an AUV leaving one cluster still reaches the next
    cluster's coverage. Returns ``-inf`` when the exponential overflows.
    """
    if d_com <= 0:
        raise InputError(f"d_com must be positive, got {d_com}")
    if d_h1 < 0:
        raise InputError(f"d_h1 must be >= 0, got {d_h1}")
    try:
        divergence = (model.beta1 + 1.0) * math.exp(model.rate_per_meter() * d_h1)
    except OverflowError:
        return -math.inf
    geometric = d_com**2 - d_com**4 / (d_com + d_h1) ** 2
    return geometric - divergence - 2.0 * model.sigma0_sq


def stable_navigation_margin_derivative(
    d_com: float, d_h1: float, model: InsDivergenceModel
) -> float:
    """d/d(d_h1) of :func:`stable_navigation_margin`."""
    rate = model.rate_per_meter()
    try:
        divergence = (model.beta1 + 1.0) * rate * math.exp(rate * d_h1)
    except OverflowError:
        return -math.inf
    return 2.0 * d_com**4 / (d_com + d_h1) ** 3 - divergence


def _margin_array(d_com: float, gaps: np.ndarray, model: InsDivergenceModel) -> np.ndarray:
    with np.errstate(over="ignore"):
        divergence = (model.beta1 + 1.0) * np.exp(model.rate_per_meter() * gaps)
    return d_com**2 - d_com**4 / (d_com + gaps) ** 2 - divergence - 2.0 * model.sigma0_sq


def max_feasible_gap(d_com: float, model: InsDivergenceModel) -> float:
    """Upper end b of the feasible gap interval, to within 0.1 m.

    Raises :class:`Infeasible` when the margin is nonpositive for every gap;
    returns ``inf`` when the margin stays positive for unbounded gaps.
    """
    rate = model.rate_per_meter()
    floor = model.beta1 + 1.0
    if d_com**2 <= floor:
        raise Infeasible(
            f"d_com={d_com:.1f} m cannot outgrow the divergence floor beta1+1={floor:g}"
        )
    if rate == 0.0:
        limit = d_com**2 - floor - 2.0 * model.sigma0_sq
        if limit > 0:
            return math.inf
        raise Infeasible("margin never becomes positive with beta2 = 0")

    # Past this gap the divergence term alone exceeds d_com^2
    gap_limit = math.log(d_com**2 / floor) / rate
    gaps = np.linspace(0.0, gap_limit, SCAN_STEPS + 1)
    margins = _margin_array(d_com, gaps, model)
    feasible = np.flatnonzero(margins > 0)

    if feasible.size:
        lo, hi = float(gaps[feasible[-1]]), float(gaps[feasible[-1] + 1])
    else:
        slope_at_zero = stable_navigation_margin_derivative(d_com, 0.0, model)
        if slope_at_zero <= 0:
            raise Infeasible("stable navigation margin is nonpositive for every gap")
        peak = brentq(
            lambda h: stable_navigation_margin_derivative(d_com, h, model),
            0.0,
            gap_limit,
        )
        if stable_navigation_margin(d_com, peak, model) <= 0:
            raise Infeasible("stable navigation margin is nonpositive for every gap")
        logger.debug("Coarse scan missed the feasible interval, peak at %.3f m", peak)
        lo, hi = peak, gap_limit

    while hi - lo > SIDE_TOLERANCE_M:
        mid = 0.5 * (lo + hi)
        if stable_navigation_margin(d_com, mid, model) > 0:
            lo = mid
        else:
            hi = mid
    logger.debug("Feasible gap upper bound %.1f m for d_com=%.1f m", lo, d_com)
    return lo


def max_coverage_side(
    n_total: int, per_cluster: int, d_com: float, model: InsDivergenceModel
) -> float:
    """Largest region side in km whose equal gap keeps the margin positive."""
    if d_com <= 0:
        raise InputError(f"d_com must be positive, got {d_com}")
    _, per_axis = grid_counts(n_total, per_cluster)
    gap = max_feasible_gap(d_com, model)
    if math.isinf(gap):
        return math.inf
    return (2.0 * d_com * per_axis + gap * (per_axis + 1)) / 1000.0


def feasibility_sweep(
    n_totals: Sequence[int],
    per_cluster: int,
    d_com: float,
    model: InsDivergenceModel,
    max_workers: Optional[int] = None,
) -> List[Tuple[int, Optional[float]]]:
    """``(n_total, max_side_km)`` per input, ``None`` where infeasible."""

    def evaluate(n_total: int) -> Tuple[int, Optional[float]]:
        try:
            return n_total, max_coverage_side(n_total, per_cluster, d_com, model)
        except Infeasible as e:
            logger.debug("n_total=%d per_cluster=%d infeasible: %s", n_total, per_cluster, e)
            return n_total, None

    return parallel_map(evaluate, list(n_totals), max_workers=max_workers)


def segment_fractions(plan: DeploymentPlan) -> Tuple[float, float]:
    """Share of a row crossing spent inside coverage and in pure navigation."""
    covered = 2.0 * plan.d_com * plan.per_axis / plan.side_m
    navigating = plan.d_h1 * (plan.per_axis + 1) / plan.side_m
    return covered, navigating
