"""Uncertainty and distribution-shift robustness metrics for regression."""
from uqeval.calibration import (
    BinPartition,
    CalibrationReport,
    calibration_report,
    ence,
    lence,
    partition_by_variance,
    rmse,
    rmv,
    variation_coefficient,
)
from uqeval.data import (
    EvaluationSet,
    LlfuMode,
    Measure,
    PredictionRecord,
    UncertaintyVector,
    validate_set,
)
from uqeval.ensemble import AggregatedPrediction, aggregate, epkl, uncertainty_vector
from uqeval.pointwise import LlfuConfig, llfu, llfu_vector, mwse
from uqeval.retention import (
    CurveKind,
    RetentionCurve,
    acceptability,
    f1_at,
    f1_retention_curve,
    mse_retention_curve,
    mwse_retention_curve,
    r3_curve,
    r_auc,
    rank_by_uncertainty,
)
from uqeval.synth import SynthConfig, generate

__version__ = "0.1.0"
