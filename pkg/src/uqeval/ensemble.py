"""Ensemble aggregation and the scalar uncertainty measures.

For an ensemble of Gaussian members N(mu_m, s_m^2):

    mean_hat = mean(mu_m)
    mvar     = mean(s_m^2)                 expected data uncertainty
    varm     = mean((mu_m - mean_hat)^2)   knowledge uncertainty (1/M normalization)
    tvar     = mvar + varm                 total variance
    epkl     = mean over ordered pairs i != j of KL(N_i || N_j)
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from uqeval.data import EvaluationSet, Measure, PredictionRecord, UncertaintyVector
from uqeval.errors import InsufficientMembers, MeasureUnavailable, ZeroVariance


@dataclass(frozen=True)
class AggregatedPrediction:
    mean_hat: float
    mvar: float
    varm: float
    tvar: float
    epkl: Optional[float] = None


def _moments(means: np.ndarray, variances: np.ndarray):
    m = means.shape[1]
    # explicit left-to-right sums over members keep the reduction order fixed
    mean_hat = _rowsum(means) / m
    mvar = _rowsum(variances) / m
    varm = _rowsum((means - mean_hat[:, None]) ** 2) / m
    tvar = mvar + varm
    return mean_hat, mvar, varm, tvar


def _rowsum(a: np.ndarray) -> np.ndarray:
    out = a[:, 0].copy()
    for j in range(1, a.shape[1]):
        out += a[:, j]
    return out


def _epkl_rows(means: np.ndarray, variances: np.ndarray) -> np.ndarray:
    """Closed-form expected pairwise KL, one value per row.

    Summing the Gaussian KL over ordered pairs, the log terms cancel and

        epkl = sum_j w_j * (vbar - s_j^2 + varm + (mean_hat - mu_j)^2) / (2 (M - 1))

    with w_j = 1 / s_j^2 and vbar the mean member variance.
    """
    m = means.shape[1]
    mean_hat, mvar, varm, _ = _moments(means, variances)
    w = 1.0 / variances
    terms = w * (
        (mvar[:, None] - variances) + varm[:, None] + (mean_hat[:, None] - means) ** 2
    )
    out = _rowsum(terms) / (2.0 * (m - 1))
    identical = (means == means[:, :1]).all(axis=1) & (
        variances == variances[:, :1]
    ).all(axis=1)
    out[identical] = 0.0
    return np.maximum(out, 0.0)


def _check_epkl(variances: np.ndarray, ids=None) -> None:
    if variances.shape[1] < 2:
        raise InsufficientMembers("epkl needs at least two ensemble members")
    zero = (variances == 0).any(axis=1)
    if zero.any():
        where = f" (record {ids[int(np.argmax(zero))]!r})" if ids is not None else ""
        raise ZeroVariance(f"epkl is undefined for a zero member variance{where}")


def _record_arrays(record: PredictionRecord):
    pairs = np.asarray(record.members, dtype=np.float64).reshape(1, -1, 2)
    return pairs[:, :, 0], pairs[:, :, 1]


def aggregate(record: PredictionRecord) -> AggregatedPrediction:
    means, variances = _record_arrays(record)
    mean_hat, mvar, varm, tvar = _moments(means, variances)
    kl = None
    if means.shape[1] >= 2 and (variances > 0).all():
        kl = float(_epkl_rows(means, variances)[0])
    return AggregatedPrediction(
        float(mean_hat[0]), float(mvar[0]), float(varm[0]), float(tvar[0]), kl
    )


def epkl(record: PredictionRecord) -> float:
    means, variances = _record_arrays(record)
    _check_epkl(variances, (record.id,))
    return float(_epkl_rows(means, variances)[0])


def predictive_mean(es: EvaluationSet) -> np.ndarray:
    return _moments(es.means, es.variances)[0]


def moments(es: EvaluationSet) -> dict:
    """Vectorized ``mean_hat``, ``mvar``, ``varm``, ``tvar`` for every record."""
    mean_hat, mvar, varm, tvar = _moments(es.means, es.variances)
    return {"mean_hat": mean_hat, "mvar": mvar, "varm": varm, "tvar": tvar}


def default_variance_measure(es: EvaluationSet) -> Measure:
    return Measure.VARIANCE if es.member_count == 1 else Measure.TVAR


def uncertainty_vector(es: EvaluationSet, measure) -> UncertaintyVector:
    measure = Measure(measure)
    m = es.member_count
    if measure is Measure.LLFU:
        raise MeasureUnavailable("llfu is computed by pointwise.llfu_vector")
    if measure is Measure.VARIANCE:
        if m != 1:
            raise MeasureUnavailable(
                f"'variance' is the raw single-model variance; set has M={m}"
            )
        return UncertaintyVector(measure, es.variances[:, 0])
    if measure is Measure.EPKL:
        if m < 2:
            raise MeasureUnavailable(f"epkl needs M >= 2; set has M={m}")
        _check_epkl(es.variances, es.ids)
        return UncertaintyVector(measure, _epkl_rows(es.means, es.variances))
    return UncertaintyVector(measure, moments(es)[measure.value])
