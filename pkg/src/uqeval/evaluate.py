"""Defaults layer and report assembly shared by the CLI and scripts."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from uqeval import calibration, ensemble, pointwise, retention
from uqeval.data import EvaluationSet, LlfuMode, Measure, UncertaintyVector
from uqeval.errors import InvalidConfig, MeasureUnavailable
from uqeval.fileio import BinRow, MetricReport

THREADS_ENV = "UQEVAL_THREADS"


@dataclass(frozen=True)
class EvalConfig:
    n_bins: int = 20
    threshold: float = 1.0
    grid_size: int = 101
    llfu_mode: LlfuMode = LlfuMode.TARGET
    variance_floor: Optional[float] = None
    f1_fraction: float = 0.95

    def __post_init__(self):
        object.__setattr__(self, "llfu_mode", LlfuMode(self.llfu_mode))

    @property
    def llfu(self) -> pointwise.LlfuConfig:
        return pointwise.LlfuConfig(self.llfu_mode, self.variance_floor)

    def echo(self) -> dict:
        return {
            "bins": self.n_bins,
            "threshold": float(self.threshold),
            "grid_size": self.grid_size,
            "llfu_mode": self.llfu_mode.value,
            "variance_floor": self.variance_floor,
            "f1_fraction": float(self.f1_fraction),
        }


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise InvalidConfig(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InvalidConfig(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def available_measures(es: EvaluationSet) -> list:
    if es.member_count == 1:
        return [Measure.VARIANCE, Measure.LLFU]
    return [Measure.MVAR, Measure.TVAR, Measure.VARM, Measure.EPKL, Measure.LLFU]


def measure_vector(
    es: EvaluationSet, measure, config: EvalConfig = EvalConfig()
) -> UncertaintyVector:
    measure = Measure(measure)
    if measure is Measure.LLFU:
        return pointwise.llfu_vector(es, config.llfu)
    return ensemble.uncertainty_vector(es, measure)


def parse_measures(spec: str, es: EvaluationSet) -> list:
    if spec.strip() in ("", "auto"):
        return available_measures(es)
    out = []
    for name in spec.split(","):
        name = name.strip()
        try:
            m = Measure(name)
        except ValueError:
            raise MeasureUnavailable(f"unknown measure {name!r}") from None
        if m not in out:
            out.append(m)
    return out


def measure_summary(es: EvaluationSet, unc: UncertaintyVector, config: EvalConfig) -> dict:
    mse_curve = retention.mse_retention_curve(es, unc, config.grid_size)
    f1_curve = retention.f1_retention_curve(es, unc, config.threshold, config.grid_size)
    return {
        "r_auc": retention.r_auc(mse_curve),
        "f1_auc": retention.f1_auc(f1_curve),
        "f1_at_95": retention.f1_at(f1_curve, config.f1_fraction),
        "mwse": pointwise.mwse(es, unc),
    }


def evaluate_set(
    es: EvaluationSet,
    measures: Sequence = (),
    config: EvalConfig = EvalConfig(),
    dataset: str = "",
    extra_echo: Optional[dict] = None,
    threads: Optional[int] = None,
) -> MetricReport:
    measures = [Measure(m) for m in measures] or available_measures(es)
    variance = ensemble.uncertainty_vector(es, ensemble.default_variance_measure(es))
    cal = calibration.calibration_report(es, variance, config.n_bins)

    def summarize(m):
        return measure_summary(es, measure_vector(es, m, config), config)

    threads = thread_count() if threads is None else threads
    if threads > 1 and len(measures) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            summaries = list(pool.map(summarize, measures))
    else:
        summaries = [summarize(m) for m in measures]

    echo = config.echo()
    echo["variance_measure"] = variance.measure.value
    echo["measures"] = [m.value for m in measures]
    echo["seed"] = None
    echo.update(extra_echo or {})
    bins = [
        BinRow(s.rmse, s.rmv, s.sigma_lo, s.sigma_hi, s.size) for s in cal.partition.stats
    ]
    return MetricReport(
        dataset=dataset,
        member_count=es.member_count,
        measures={m.value: s for m, s in zip(measures, summaries)},
        ence=cal.ence,
        cv=cal.cv,
        lence=cal.lence,
        bins=bins,
        mwse=pointwise.mwse(es, variance),
        config=echo,
    )


def build_curve(
    es: EvaluationSet, kind, measure=None, config: EvalConfig = EvalConfig()
) -> retention.RetentionCurve:
    kind = retention.CurveKind(kind)
    measure = Measure(measure) if measure is not None else ensemble.default_variance_measure(es)
    unc = measure_vector(es, measure, config)
    if kind is retention.CurveKind.MSE:
        return retention.mse_retention_curve(es, unc, config.grid_size)
    if kind is retention.CurveKind.F1:
        return retention.f1_retention_curve(es, unc, config.threshold, config.grid_size)
    if kind is retention.CurveKind.R3:
        variance = ensemble.uncertainty_vector(es, ensemble.default_variance_measure(es))
        return retention.r3_curve(es, unc, variance, config.grid_size)
    return retention.mwse_retention_curve(es, unc, config.grid_size)
