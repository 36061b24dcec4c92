"""LL-Fisher uncertainty (LL-FU) and mean weighted squared error (MWSE)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from uqeval.data import (
    EvaluationSet,
    LlfuMode,
    Measure,
    UncertaintyVector,
    check_aligned,
)
from uqeval.ensemble import moments, predictive_mean
from uqeval.errors import InvalidConfig, NonPositiveVariance

_LOG_2PI = np.log(2.0 * np.pi)


@dataclass(frozen=True)
class LlfuConfig:
    mode: LlfuMode = LlfuMode.TARGET
    variance_floor: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "mode", LlfuMode(self.mode))
        if self.variance_floor is not None and not self.variance_floor > 0:
            raise InvalidConfig("variance_floor must be strictly positive")


def _llfu(x, mu, sigma2):
    log_term = np.maximum(0.0, 0.5 * (_LOG_2PI + np.log(sigma2)))
    return log_term + (x - mu) ** 2 / (2.0 * sigma2)


def llfu(x, mu, sigma2, variance_floor: Optional[float] = None):
    """max(0, 0.5 ln(2 pi sigma2)) + (x - mu)^2 / (2 sigma2).

    Works elementwise on arrays; returns a float for scalar input.
    """
    sigma2 = np.asarray(sigma2, dtype=np.float64)
    if variance_floor is not None:
        sigma2 = np.maximum(sigma2, variance_floor)
    if (sigma2 <= 0).any():
        raise NonPositiveVariance("LL-FU needs a strictly positive variance")
    out = _llfu(np.asarray(x, dtype=np.float64), np.asarray(mu, dtype=np.float64), sigma2)
    return float(out) if out.ndim == 0 else out


def _floored(var: np.ndarray, es: EvaluationSet, floor: Optional[float]) -> np.ndarray:
    if floor is not None:
        var = np.maximum(var, floor)
    bad = var <= 0
    if var.ndim > 1:
        bad = bad.any(axis=1)
    if bad.any():
        rid = es.ids[int(np.argmax(bad))]
        raise NonPositiveVariance(
            f"record {rid!r} has a non-positive variance; LL-FU is undefined",
            record_id=rid,
        )
    return var


def llfu_vector(es: EvaluationSet, config: LlfuConfig = LlfuConfig()) -> UncertaintyVector:
    """Per-record LL-FU.

    ``target`` mode scores the observed target under the aggregated predictive
    Gaussian (mean_hat, tvar); ``ensemble-mean`` averages each member's score of
    the ensemble mean and needs no ground truth.
    """
    mom = moments(es)
    if config.mode is LlfuMode.TARGET:
        var = _floored(mom["tvar"], es, config.variance_floor)
        values = _llfu(es.y_true, mom["mean_hat"], var)
    else:
        var = _floored(es.variances, es, config.variance_floor)
        per_member = _llfu(mom["mean_hat"][:, None], es.means, var)
        values = per_member[:, 0].copy()
        for j in range(1, es.member_count):
            values += per_member[:, j]
        values /= es.member_count
    return UncertaintyVector(Measure.LLFU, values, config.mode)


def squared_errors(es: EvaluationSet) -> np.ndarray:
    return (predictive_mean(es) - es.y_true) ** 2


def mwse(es: EvaluationSet, unc: UncertaintyVector) -> float:
    check_aligned(es, unc)
    return float(np.mean(squared_errors(es) * unc.values))
