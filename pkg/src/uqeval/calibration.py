"""Variance-sorted binning and calibration scores (ENCE, Cv, LENCE)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from uqeval.data import EvaluationSet, Measure, UncertaintyVector, check_aligned
from uqeval.ensemble import predictive_mean
from uqeval.errors import (
    EmptySubset,
    InsufficientData,
    InvalidBinCount,
    TooManyBins,
    ZeroMeanSigma,
    ZeroRMVBin,
)


@dataclass(frozen=True)
class BinStats:
    rmse: float
    rmv: float
    sigma_lo: float
    sigma_hi: float
    size: int


@dataclass(frozen=True)
class BinPartition:
    bins: tuple  # tuple of index arrays, lowest variance first
    stats: tuple  # BinStats per bin
    source_measure: Measure

    def __len__(self) -> int:
        return len(self.bins)


@dataclass(frozen=True)
class CalibrationReport:
    ence: float
    cv: float
    lence: float
    partition: BinPartition


def _subset(indices) -> np.ndarray:
    idx = np.asarray(indices, dtype=np.intp)
    if idx.size == 0:
        raise EmptySubset("cannot compute a statistic over an empty subset")
    return idx


def rmse(es: EvaluationSet, indices) -> float:
    idx = _subset(indices)
    err = es.y_true[idx] - predictive_mean(es)[idx]
    return math.sqrt(float(np.mean(err**2)))


def rmv(variance_vector: UncertaintyVector, indices) -> float:
    idx = _subset(indices)
    return math.sqrt(float(np.mean(variance_vector.values[idx])))


def bin_sizes(total: int, n_bins: int) -> list:
    base, extra = divmod(total, n_bins)
    return [base + 1 if b < extra else base for b in range(n_bins)]


def partition_by_variance(
    es: EvaluationSet, variance_vector: UncertaintyVector, n_bins: int
) -> BinPartition:
    check_aligned(es, variance_vector)
    total = len(es)
    if n_bins < 1:
        raise InvalidBinCount(f"need at least one bin, got {n_bins}")
    if n_bins > total:
        raise TooManyBins(f"{n_bins} bins requested for {total} records")
    var = variance_vector.values
    order = np.argsort(var, kind="stable")
    sq_err = (es.y_true - predictive_mean(es)) ** 2

    bins, stats = [], []
    start = 0
    for size in bin_sizes(total, n_bins):
        idx = order[start : start + size]
        start += size
        v = var[idx]
        stats.append(
            BinStats(
                rmse=math.sqrt(float(np.mean(sq_err[idx]))),
                rmv=math.sqrt(float(np.mean(v))),
                sigma_lo=math.sqrt(float(v[0])),
                sigma_hi=math.sqrt(float(v[-1])),
                size=int(size),
            )
        )
        idx = idx.copy()
        idx.setflags(write=False)
        bins.append(idx)
    return BinPartition(tuple(bins), tuple(stats), variance_vector.measure)


def ence(partition: BinPartition) -> float:
    total = 0.0
    for b, s in enumerate(partition.stats):
        if s.rmv == 0:
            raise ZeroRMVBin(f"bin {b} has zero RMV; ENCE is undefined", bin_index=b)
        total += abs(s.rmv - s.rmse) / s.rmv
    return total / len(partition.stats)


def variation_coefficient(variance_vector: UncertaintyVector) -> float:
    """Sample std (divisor T-1) of the predicted sigmas over their mean."""
    sigma = np.sqrt(variance_vector.values)
    if sigma.size < 2:
        raise InsufficientData("Cv needs at least two predictions")
    mu = float(np.mean(sigma))
    if mu == 0:
        raise ZeroMeanSigma("all predicted variances are zero; Cv is undefined")
    if sigma.min() == sigma.max():
        # exact zero; the float mean of equal values can drift by an ulp
        return 0.0
    return float(np.std(sigma, ddof=1)) / mu


def lence(ence_value: float, cv_value: float) -> float:
    if cv_value == 0:
        return math.inf
    return math.log(abs(ence_value + 1.0 / cv_value))


def calibration_report(
    es: EvaluationSet, variance_vector: UncertaintyVector, n_bins: int = 20
) -> CalibrationReport:
    partition = partition_by_variance(es, variance_vector, n_bins)
    e = ence(partition)
    cv = variation_coefficient(variance_vector)
    return CalibrationReport(e, cv, lence(e, cv), partition)
