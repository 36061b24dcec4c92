"""Uncertainty-ranked retention curves and their summary scores.

All curves retain the ``ceil(f * T)`` least-uncertain records at fraction ``f``
of a uniform grid. The MSE curve replaces rejected predictions with the ground
truth (error 0, averaged over all T); the R3 and MWSE curves use statistics of
the retained subset only and therefore skip ``f = 0``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from uqeval.data import EvaluationSet, Measure, UncertaintyVector, check_aligned
from uqeval.ensemble import predictive_mean
from uqeval.errors import InvalidGrid, InvalidThreshold, WrongCurveKind, ZeroRMVSubset


class CurveKind(str, enum.Enum):
    MSE = "mse"
    F1 = "f1"
    R3 = "r3"
    MWSE = "mwse"


@dataclass(frozen=True, eq=False)
class RetentionCurve:
    kind: CurveKind
    fractions: np.ndarray
    values: np.ndarray
    auc: float
    measure: Optional[Measure] = None
    threshold: Optional[float] = None

    @property
    def points(self) -> list:
        return list(zip(self.fractions.tolist(), self.values.tolist()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RetentionCurve):
            return NotImplemented
        return (
            self.kind == other.kind
            and np.array_equal(self.fractions, other.fractions)
            and np.array_equal(self.values, other.values)
            and self.auc == other.auc
            and self.measure == other.measure
            and self.threshold == other.threshold
        )

    __hash__ = None


def trapezoid_auc(fractions, values) -> float:
    return float(np.trapezoid(values, fractions))


def _curve(kind, fractions, values, measure=None, threshold=None) -> RetentionCurve:
    fractions = np.asarray(fractions, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(fractions, kind="stable")
    fractions, values = fractions[order], values[order]
    for a in (fractions, values):
        a.setflags(write=False)
    return RetentionCurve(
        CurveKind(kind),
        fractions,
        values,
        trapezoid_auc(fractions, values),
        Measure(measure) if measure is not None else None,
        threshold,
    )


def rank_by_uncertainty(unc: UncertaintyVector) -> np.ndarray:
    """Record indices, least uncertain first; ties keep record order."""
    return np.argsort(unc.values, kind="stable")


def retention_grid(total: int, grid_size: int, include_zero: bool = True):
    """Uniform fractions and exact retained counts ``ceil(f * total)``."""
    if grid_size < 2:
        raise InvalidGrid(f"grid_size must be >= 2, got {grid_size}")
    k = np.arange(grid_size, dtype=np.int64)
    denom = grid_size - 1
    counts = -((-k * total) // denom)  # integer ceil avoids float rounding of f*T
    fractions = k / denom
    if not include_zero:
        fractions, counts = fractions[1:], counts[1:]
    return fractions, counts


def _prefix(a: np.ndarray) -> np.ndarray:
    # leading zero so that _prefix(a)[n] is the sum of the first n entries
    out = np.empty(a.size + 1, dtype=np.float64)
    out[0] = 0.0
    np.cumsum(a, out=out[1:])
    return out


def mse_retention_curve(
    es: EvaluationSet, unc: UncertaintyVector, grid_size: int = 101
) -> RetentionCurve:
    check_aligned(es, unc)
    order = rank_by_uncertainty(unc)
    sq_err = ((predictive_mean(es) - es.y_true) ** 2)[order]
    fractions, counts = retention_grid(len(es), grid_size)
    values = _prefix(sq_err)[counts] / len(es)
    return _curve(CurveKind.MSE, fractions, values, unc.measure)


def _require(curve: RetentionCurve, kind: CurveKind) -> None:
    if curve.kind is not kind:
        raise WrongCurveKind(f"expected a {kind.value} curve, got {curve.kind.value}")


def r_auc(curve: RetentionCurve) -> float:
    _require(curve, CurveKind.MSE)
    return curve.auc


def f1_auc(curve: RetentionCurve) -> float:
    _require(curve, CurveKind.F1)
    return curve.auc


def acceptability(es: EvaluationSet, tau: float) -> np.ndarray:
    if not tau > 0:
        raise InvalidThreshold(f"acceptability threshold must be > 0, got {tau}")
    return np.abs(predictive_mean(es) - es.y_true) <= tau


def f1_retention_curve(
    es: EvaluationSet, unc: UncertaintyVector, tau: float = 1.0, grid_size: int = 101
) -> RetentionCurve:
    """F1 of "retained" as a detector of acceptable (|error| <= tau) predictions."""
    check_aligned(es, unc)
    ok = acceptability(es, tau)
    order = rank_by_uncertainty(unc)
    fractions, counts = retention_grid(len(es), grid_size)
    tp = np.concatenate([[0], np.cumsum(ok[order], dtype=np.int64)])[counts]
    fp = counts - tp
    fn = int(ok.sum()) - tp
    denom = 2 * tp + fp + fn
    with np.errstate(invalid="ignore", divide="ignore"):
        values = np.where(denom == 0, 1.0, 2.0 * tp / denom)
    return _curve(CurveKind.F1, fractions, values, unc.measure, float(tau))


def f1_at(curve: RetentionCurve, r: float = 0.95) -> float:
    _require(curve, CurveKind.F1)
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"retention fraction must be in [0, 1], got {r}")
    return float(np.interp(r, curve.fractions, curve.values))


def r3_curve(
    es: EvaluationSet,
    unc: UncertaintyVector,
    variance_vector: UncertaintyVector,
    grid_size: int = 101,
) -> RetentionCurve:
    """RMSE/RMV of the retained subset; ideally flat at 1."""
    check_aligned(es, unc)
    check_aligned(es, variance_vector)
    order = rank_by_uncertainty(unc)
    sq_err = ((predictive_mean(es) - es.y_true) ** 2)[order]
    var = variance_vector.values[order]
    fractions, counts = retention_grid(len(es), grid_size, include_zero=False)
    err_sum = _prefix(sq_err)[counts]
    var_sum = _prefix(var)[counts]
    if (var_sum == 0).any():
        f = fractions[int(np.argmax(var_sum == 0))]
        raise ZeroRMVSubset(f"retained subset at fraction {f:g} has zero RMV")
    values = np.sqrt(err_sum / counts) / np.sqrt(var_sum / counts)
    return _curve(CurveKind.R3, fractions, values, unc.measure)


def mwse_retention_curve(
    es: EvaluationSet,
    unc: UncertaintyVector,
    grid_size: int = 101,
    weights: Optional[UncertaintyVector] = None,
) -> RetentionCurve:
    """MWSE over the retained subset.

    ``unc`` ranks the records; ``weights`` (default: ``unc`` itself) supplies
    the per-record uncertainty multiplying each squared error.
    """
    check_aligned(es, unc)
    weights = unc if weights is None else weights
    check_aligned(es, weights)
    order = rank_by_uncertainty(unc)
    weighted = (((predictive_mean(es) - es.y_true) ** 2) * weights.values)[order]
    fractions, counts = retention_grid(len(es), grid_size, include_zero=False)
    values = _prefix(weighted)[counts] / counts
    return _curve(CurveKind.MWSE, fractions, values, unc.measure)
