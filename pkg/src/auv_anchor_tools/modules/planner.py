"""Anchors-per-cluster planning.

Inside coverage the AUV error is the expected CRLB Q of one cluster;
between clusters it is the INS leg expectation. The weighted objective
is evaluated for straight row (r1), column (r2) and diagonal (r3)
crossings and minimized over candidate cluster sizes.
"""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

from ..core.errors import (
    AllInfeasible,
    InfeasibleError,
    InputError,
    NegativeGap,
    TooFewAnchors,
)
from ..core.parallel import parallel_map
from ..models import (
    PATH_KINDS,
    CandidateAssessment,
    ClusterDesign,
    DeploymentPlan,
    InsDivergenceModel,
    LegSampling,
    ObjectiveWeights,
    PlanEvaluation,
    RangeErrorParams,
    SoundSpeedProfile,
)
from .deployment import grid_counts, layout_clusters, navigation_gap
from .ins_drift import leg_error_expectation
from .localization import center_crlb, coverage_radius, coverage_region, expected_crlb_field

logger = logging.getLogger("auv_anchor_tools.planner")

PATH_AXES: Dict[str, Tuple[str, ...]] = {
    "r1": ("x",),
    "r2": ("y",),
    "r3": ("x", "y"),
}


def hybrid_objective(
    weights: ObjectiveWeights, q: float, nav_covered: float, nav_uncovered: float
) -> float:
    """(1 - l1) nav_uncovered + l1 (l2 q + (1 - l2) nav_covered)."""
    if min(q, nav_covered, nav_uncovered) < 0:
        raise InputError("objective terms must be nonnegative")
    inside = weights.lambda2 * q + (1.0 - weights.lambda2) * nav_covered
    return (1.0 - weights.lambda1) * nav_uncovered + weights.lambda1 * inside


def path_objective(
    plan: DeploymentPlan,
    q: float,
    model: InsDivergenceModel,
    leg: LegSampling,
    path_kind: str,
    lambda1: float = 1.0,
    lambda2: float = 1.0,
) -> PlanEvaluation:
    """Objective for one crossing kind over the inter-cluster gap d_h.

    Overlapping coverage (d_h < 0) leaves a zero-length leg.
    """
    if path_kind not in PATH_AXES:
        raise InputError(f"path_kind must be one of {', '.join(PATH_KINDS)}, got {path_kind!r}")
    gap = plan.d_h
    if gap < 0:
        logger.warning("d_h=%.1f m < 0 for N_ca=%d, navigation leg clamped to 0", gap, plan.per_cluster)
        gap = 0.0
    nav = leg_error_expectation(model, leg.with_distance(gap), PATH_AXES[path_kind])
    weights = ObjectiveWeights(lambda1=lambda1, lambda2=lambda2)
    objective = hybrid_objective(weights, q, model.sigma0_sq, nav)
    return PlanEvaluation(
        q_term=q,
        nav_term=nav,
        objective=objective,
        path_kind=path_kind,
        lambda1=lambda1,
    )


def mean_evaluation(evaluations: Sequence[PlanEvaluation]) -> PlanEvaluation:
    """Uniform mean over path kinds."""
    n = len(evaluations)
    return PlanEvaluation(
        q_term=math.fsum(e.q_term for e in evaluations) / n,
        nav_term=math.fsum(e.nav_term for e in evaluations) / n,
        objective=math.fsum(e.objective for e in evaluations) / n,
        path_kind=None,
        lambda1=evaluations[0].lambda1,
    )


def assess_candidate(
    per_cluster: int,
    side_km: float,
    n_total: int,
    profile: SoundSpeedProfile,
    params: RangeErrorParams,
    design: ClusterDesign,
    max_workers: Optional[int] = None,
) -> CandidateAssessment:
    """Cluster ring, coverage radius, traversal Q and grid layout."""
    grid_counts(n_total, per_cluster)
    cluster = design.cluster(per_cluster)
    d_com = coverage_radius(cluster, design.comm_range, design.rule)
    field = expected_crlb_field(
        cluster,
        profile,
        params,
        coverage_region(cluster, design.comm_range, design.rule),
        step=design.traversal_step,
        comm_range=design.comm_range,
        rule=design.rule,
        layer_thickness=design.layer_thickness,
        max_workers=max_workers,
    )
    plan = layout_clusters(side_km, n_total, per_cluster, d_com)
    logger.debug(
        "N_ca=%d: d_com=%.1f m, Q=%.4e m^2 over %d cells, d_h=%.1f m",
        per_cluster,
        d_com,
        field.q,
        field.covered_count,
        plan.d_h,
    )
    return CandidateAssessment(per_cluster=per_cluster, d_com=d_com, q=field.q, plan=plan)


def assess_candidates(
    candidates: Sequence[int],
    side_km: float,
    n_total: int,
    profile: SoundSpeedProfile,
    params: RangeErrorParams,
    design: ClusterDesign,
    max_workers: Optional[int] = None,
) -> List[Tuple[int, Optional[CandidateAssessment], Optional[str]]]:
    """Assess every candidate in parallel; failures are kept with their reason."""
    if not candidates:
        raise InputError("candidates must not be empty")
    if any(c < 3 for c in candidates):
        raise TooFewAnchors(f"every candidate needs >= 3 anchors, got {list(candidates)}")

    def run(count: int):
        try:
            # Field rows stay serial inside a candidate task
            return count, assess_candidate(count, side_km, n_total, profile, params, design, 1), None
        except (InfeasibleError, TooFewAnchors) as e:
            logger.warning("N_ca=%d is infeasible: %s", count, e)
            return count, None, str(e)

    return parallel_map(run, list(candidates), max_workers=max_workers)


def evaluate_paths(
    assessment: CandidateAssessment,
    model: InsDivergenceModel,
    leg: LegSampling,
    lambda1: float,
    lambda2: float = 1.0,
) -> List[PlanEvaluation]:
    """One evaluation per path kind, in r1, r2, r3 order."""
    return [
        path_objective(assessment.plan, assessment.q, model, leg, kind, lambda1, lambda2)
        for kind in PATH_KINDS
    ]


def optimize_per_cluster(
    side_km: float,
    n_total: int,
    candidates: Sequence[int],
    weights: ObjectiveWeights,
    model: InsDivergenceModel,
    profile: SoundSpeedProfile,
    params: RangeErrorParams,
    leg: LegSampling,
    design: ClusterDesign = ClusterDesign(),
    max_workers: Optional[int] = None,
) -> Tuple[int, List[Tuple[int, PlanEvaluation]]]:
    """Candidate minimizing the path-averaged objective.

    The table lists feasible candidates in input order; ties go to the
    smallest count.
    """
    assessed = assess_candidates(candidates, side_km, n_total, profile, params, design, max_workers)
    table = []
    for count, assessment, _ in assessed:
        if assessment is None:
            continue
        evaluations = evaluate_paths(assessment, model, leg, weights.lambda1, weights.lambda2)
        table.append((count, mean_evaluation(evaluations)))
    if not table:
        raise AllInfeasible(f"no candidate in {list(candidates)} admits a deployment")
    best, _ = min(table, key=lambda row: (row[1].objective, row[0]))
    return best, table


def lambda_sweep(
    assessments: Sequence[CandidateAssessment],
    lambda1_grid: Sequence[float],
    model: InsDivergenceModel,
    leg: LegSampling,
    lambda2: float = 1.0,
) -> Tuple[List[Dict], Dict]:
    """Rows per candidate x lambda1 x path plus the verdict.

    The verdict names the (n_ca, lambda1) pair with the smallest
    path-averaged objective, ties to the smaller n_ca then the larger
    lambda1, and the best lambda1 of every candidate.
    """
    if not assessments:
        raise AllInfeasible("no feasible candidate to sweep")
    rows: List[Dict] = []
    scored = []
    per_candidate: Dict[int, float] = {}
    for assessment in assessments:
        best_for_candidate = None
        for lambda1 in lambda1_grid:
            evaluations = evaluate_paths(assessment, model, leg, lambda1, lambda2)
            for evaluation in evaluations:
                rows.append(
                    {
                        "n_ca": assessment.per_cluster,
                        "lambda1": lambda1,
                        "q_m2": evaluation.q_term,
                        "nav_m2": evaluation.nav_term,
                        "objective_m2": evaluation.objective,
                        "path": evaluation.path_kind,
                    }
                )
            mean = mean_evaluation(evaluations).objective
            scored.append((mean, assessment.per_cluster, -lambda1))
            key = (mean, -lambda1)
            if best_for_candidate is None or key < best_for_candidate:
                best_for_candidate = key
        per_candidate[assessment.per_cluster] = -best_for_candidate[1]
    objective, n_ca, neg_lambda1 = min(scored)
    verdict = {
        "best_n_ca": n_ca,
        "best_lambda1": -neg_lambda1,
        "best_objective_m2": objective,
        "best_lambda1_per_candidate": {str(k): v for k, v in per_candidate.items()},
    }
    return rows, verdict


def scaling_fractions(n_total: int, per_cluster: int, side_km: float, d_com: float) -> Tuple[float, float]:
    """Covered and pure-navigation shares of a crossing with equal gaps."""
    _, per_axis = grid_counts(n_total, per_cluster)
    side_m = side_km * 1000.0
    gap = navigation_gap(side_m, per_axis, d_com)
    if gap < 0:
        raise NegativeGap(gap)
    return 2.0 * d_com * per_axis / side_m, gap * (per_axis + 1) / side_m


def scaling_law(
    n_total: int,
    per_cluster: int,
    side_km: float,
    d_com: float,
    elevation: float,
    sigma_d_sq: float,
    model: InsDivergenceModel,
    leg: LegSampling,
) -> float:
    """Length-weighted mix of the ring-center bound and the x-axis leg
    expectation over the equal gap."""
    covered, navigating = scaling_fractions(n_total, per_cluster, side_km, d_com)
    _, per_axis = grid_counts(n_total, per_cluster)
    gap = navigation_gap(side_km * 1000.0, per_axis, d_com)
    center = center_crlb(per_cluster, elevation, sigma_d_sq)
    nav = leg_error_expectation(model, leg.with_distance(gap), ("x",))
    return covered * center + navigating * nav
