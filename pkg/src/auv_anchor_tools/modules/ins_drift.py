"""Inertial position-error divergence over traveled distance."""

import logging
import math
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.optimize import least_squares

from ..core.errors import Diverged, FitDiverged, InsufficientData
from ..models import AXES_ALL, DivergenceFit, InsDivergenceModel, LegSampling

logger = logging.getLogger("auv_anchor_tools.ins_drift")

BETA2_GRID = np.logspace(-3.0, 0.0, 20)
SERIES_COLUMNS = ("delta_p", "variance_m2")


def position_variance_many(model: InsDivergenceModel, distances: np.ndarray) -> np.ndarray:
    """Vectorized :func:`position_variance`; overflow gives inf."""
    distances = np.asarray(distances, dtype=float)
    if model.beta1 == 0.0:
        return np.full(distances.shape, model.sigma0_sq)
    with np.errstate(over="ignore"):
        growth = np.exp(model.beta2 * distances / model.distance_unit_m)
    return model.sigma0_sq + model.beta1 * growth


def position_variance(model: InsDivergenceModel, delta_p: float) -> float:
    """Per-axis variance after ``delta_p`` meters without a fix.

    Overflow saturates to ``inf``; callers that need a finite value treat
    that as divergence.
    """
    if delta_p < 0 or math.isnan(delta_p):
        raise ValueError(f"delta_p must be >= 0, got {delta_p}")
    return float(position_variance_many(model, np.array([float(delta_p)]))[0])


def leg_error_expectation(
    model: InsDivergenceModel,
    leg: LegSampling,
    axes: Iterable[str] = ("x",),
    projection: Optional[Mapping[str, float]] = None,
) -> float:
    """Mean over samples n = 1..N of the summed per-axis variances.

    Sample n sits at arc length ``n * speed * slot``. Each active axis
    accumulates that arc length scaled by ``projection[axis]`` (default 1,
    i.e. axis-aligned legs and the diagonal r3 combination).
    """
    axes = tuple(dict.fromkeys(axes))
    if not axes:
        raise ValueError("axes must be a nonempty subset of {x, y}")
    unknown = set(axes) - AXES_ALL
    if unknown:
        raise ValueError(f"unknown axes {sorted(unknown)}")
    projection = projection or {}

    arc = np.arange(1, leg.sample_count + 1, dtype=float) * leg.step
    total = np.zeros_like(arc)
    for axis in axes:
        total += position_variance_many(model, arc * float(projection.get(axis, 1.0)))
    if not np.all(np.isfinite(total)):
        raise Diverged(
            f"INS variance overflows within a {leg.distance:.1f} m leg "
            f"(beta2={model.beta2}/{model.distance_unit_m:g} m)"
        )
    return float(np.mean(total))


# Fitting


def _validate_series(series: Sequence[Tuple[float, float]]) -> Tuple[np.ndarray, np.ndarray]:
    data = np.asarray(series, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise InsufficientData("series must be a list of (delta_p, variance) pairs")
    if data.shape[0] < 3:
        raise InsufficientData(f"need at least 3 points, got {data.shape[0]}")
    if not np.all(np.isfinite(data)):
        raise InsufficientData("series contains non-finite values")
    x, y = data[:, 0], data[:, 1]
    if np.any(x < 0):
        raise InsufficientData("delta_p values must be nonnegative")
    if np.unique(x).size != x.size:
        raise InsufficientData("delta_p values must be distinct")
    return x, y


def _profiled_residual(params: np.ndarray, u: np.ndarray, y: np.ndarray) -> np.ndarray:
    beta1, beta2 = params
    shaped = beta1 * np.exp(beta2 * u)
    rest = y - shaped
    return rest - rest.mean()


def _anchored_residual(params: np.ndarray, u: np.ndarray, y: np.ndarray) -> np.ndarray:
    beta1, beta2 = params
    return y - beta1 * np.exp(beta2 * u)


def _solve(residual, start: np.ndarray, u: np.ndarray, y: np.ndarray):
    try:
        result = least_squares(
            residual,
            start,
            args=(u, y),
            bounds=([0.0, 0.0], [np.inf, np.inf]),
            method="trf",
            x_scale="jac",
            xtol=1e-15,
            ftol=1e-15,
            gtol=1e-15,
            max_nfev=2000,
        )
    except (ValueError, FloatingPointError) as e:
        logger.debug("Fit start %s failed: %s", start, e)
        return None
    if not np.all(np.isfinite(result.x)) or not np.isfinite(result.cost):
        return None
    return result


def fit_divergence(
    series: Sequence[Tuple[float, float]], distance_unit_m: float = 1000.0
) -> DivergenceFit:
    """Least-squares fit of sigma0^2 + beta1 * exp(beta2 * d / unit).

    sigma0^2 is profiled out as the mean residual while (beta1, beta2) are
    solved from every start of a log-spaced beta2 grid; beta1 starts from
    the linear regression at that beta2. A constant model (beta1 = 0)
    competes with the exponential one and wins ties.
    """
    x, y = _validate_series(series)
    u = x / distance_unit_m

    best = None
    for beta2 in BETA2_GRID:
        design = np.column_stack([np.ones_like(u), np.exp(beta2 * u)])
        (_, beta1), *_ = np.linalg.lstsq(design, y, rcond=None)
        result = _solve(_profiled_residual, np.array([max(beta1, 0.0), beta2]), u, y)
        if result is not None and (best is None or result.cost < best.cost):
            best = result
    if best is None:
        raise FitDiverged("least squares failed from every beta2 start")

    beta1, beta2 = (float(v) for v in best.x)
    sigma0_sq = float(np.mean(y - beta1 * np.exp(beta2 * u)))
    if sigma0_sq < 0:
        logger.debug("Profiled sigma0^2=%.3e < 0, refitting with sigma0^2 = 0", sigma0_sq)
        anchored = _solve(_anchored_residual, best.x, u, y)
        if anchored is None:
            raise FitDiverged("refit with sigma0^2 = 0 failed")
        beta1, beta2 = (float(v) for v in anchored.x)
        sigma0_sq = 0.0
    ssr = float(np.sum((y - sigma0_sq - beta1 * np.exp(beta2 * u)) ** 2))

    constant_ssr = float(np.sum((y - y.mean()) ** 2))
    if constant_ssr <= ssr + 1e-12 * float(np.sum(y**2)):
        logger.debug("Constant model selected (ssr %.3e vs %.3e)", constant_ssr, ssr)
        sigma0_sq, beta1, beta2, ssr = float(y.mean()), 0.0, 0.0, constant_ssr

    model = InsDivergenceModel(
        sigma0_sq=max(sigma0_sq, 0.0),
        beta1=beta1,
        beta2=beta2,
        distance_unit_m=distance_unit_m,
    )
    logger.debug(
        "Fitted sigma0^2=%.6g beta1=%.6g beta2=%.6g residual=%.3e over %d points",
        model.sigma0_sq,
        model.beta1,
        model.beta2,
        math.sqrt(ssr),
        len(y),
    )
    return DivergenceFit(model=model, residual=math.sqrt(ssr), points=len(y))


def load_error_series(path: Union[str, Path]) -> list:
    """Read a ``delta_p,variance_m2`` CSV into (delta_p, variance) pairs."""
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise InsufficientData(f"cannot read error series {path}: {e}") from e
    missing = [c for c in SERIES_COLUMNS if c not in frame.columns]
    if missing:
        raise InsufficientData(f"{path}: missing column(s) {', '.join(missing)}")
    return list(zip(frame["delta_p"].astype(float), frame["variance_m2"].astype(float)))
