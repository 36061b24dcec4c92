"""Core record types and the validation gate.

Everything downstream consumes an :class:`EvaluationSet`; the only ways to get
one are :func:`validate_set` and :meth:`EvaluationSet.from_arrays`, both of
which enforce the same invariants.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from uqeval.errors import (
    DuplicateId,
    EmptySet,
    LengthMismatch,
    NegativeVariance,
    NonFinite,
    RaggedEnsemble,
)


class Measure(str, enum.Enum):
    MVAR = "mvar"
    TVAR = "tvar"
    VARM = "varm"
    EPKL = "epkl"
    LLFU = "llfu"
    VARIANCE = "variance"


class LlfuMode(str, enum.Enum):
    TARGET = "target"
    ENSEMBLE_MEAN = "ensemble-mean"


@dataclass(frozen=True)
class PredictionRecord:
    id: str
    y_true: float
    members: tuple  # ((mean, variance), ...)

    @property
    def member_count(self) -> int:
        return len(self.members)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class EvaluationSet:
    """Validated, immutable column-store of prediction records.

    ``means`` and ``variances`` have shape ``(T, M)``; row order is the input
    record order.
    """

    ids: tuple
    y_true: np.ndarray
    means: np.ndarray
    variances: np.ndarray

    @property
    def member_count(self) -> int:
        return self.means.shape[1]

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def records(self) -> list:
        return list(self)

    def __iter__(self) -> Iterator[PredictionRecord]:
        for i, rid in enumerate(self.ids):
            members = tuple(
                (float(m), float(v)) for m, v in zip(self.means[i], self.variances[i])
            )
            yield PredictionRecord(rid, float(self.y_true[i]), members)

    def record(self, i: int) -> PredictionRecord:
        members = tuple(
            (float(m), float(v)) for m, v in zip(self.means[i], self.variances[i])
        )
        return PredictionRecord(self.ids[i], float(self.y_true[i]), members)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EvaluationSet):
            return NotImplemented
        return (
            self.ids == other.ids
            and np.array_equal(self.y_true, other.y_true)
            and np.array_equal(self.means, other.means)
            and np.array_equal(self.variances, other.variances)
        )

    __hash__ = None

    def subset_members(self, members: Sequence[int]) -> "EvaluationSet":
        """Keep only the given ensemble members (e.g. ``[0]`` for a single model)."""
        idx = list(members)
        return EvaluationSet.from_arrays(
            self.ids, self.y_true, self.means[:, idx], self.variances[:, idx]
        )

    @classmethod
    def from_arrays(cls, ids, y_true, means, variances) -> "EvaluationSet":
        ids = tuple(str(i) for i in ids)
        y_true = np.asarray(y_true, dtype=np.float64)
        means = np.asarray(means, dtype=np.float64)
        variances = np.asarray(variances, dtype=np.float64)
        if means.ndim == 1:
            means = means[:, None]
        if variances.ndim == 1:
            variances = variances[:, None]
        if len(ids) == 0:
            raise EmptySet("evaluation set has no records")
        if means.shape != variances.shape or means.shape[1] < 1:
            raise RaggedEnsemble(
                f"means shape {means.shape} and variances shape {variances.shape} disagree"
            )
        if not (len(ids) == y_true.shape[0] == means.shape[0]):
            raise LengthMismatch("ids, y_true and member arrays differ in length")
        _check_values(ids, y_true, means, variances)
        return cls(ids, _readonly(y_true), _readonly(means), _readonly(variances))


def _check_values(ids, y_true, means, variances) -> None:
    finite = np.isfinite(y_true) & np.isfinite(means).all(axis=1) & np.isfinite(
        variances
    ).all(axis=1)
    if not finite.all():
        i = int(np.argmin(finite))
        raise NonFinite(f"record {ids[i]!r} has a non-finite value", record_id=ids[i])
    negative = (variances < 0).any(axis=1)
    if negative.any():
        i = int(np.argmax(negative))
        raise NegativeVariance(
            f"record {ids[i]!r} has a negative variance", record_id=ids[i]
        )
    if len(set(ids)) != len(ids):
        seen = set()
        for rid in ids:
            if rid in seen:
                raise DuplicateId(f"duplicate record id {rid!r}")
            seen.add(rid)


def validate_set(records: Sequence[PredictionRecord]) -> EvaluationSet:
    records = list(records)
    if not records:
        raise EmptySet("evaluation set has no records")
    m = len(records[0].members)
    for r in records:
        if len(r.members) != m or len(r.members) == 0:
            raise RaggedEnsemble(
                f"record {r.id!r} has {len(r.members)} members, expected {m}"
            )
    ids = tuple(str(r.id) for r in records)
    y_true = np.array([r.y_true for r in records], dtype=np.float64)
    pairs = np.array([r.members for r in records], dtype=np.float64)
    return EvaluationSet.from_arrays(ids, y_true, pairs[:, :, 0], pairs[:, :, 1])


@dataclass(frozen=True, eq=False)
class UncertaintyVector:
    measure: Measure
    values: np.ndarray
    mode: Optional[LlfuMode] = None

    def __post_init__(self):
        object.__setattr__(self, "measure", Measure(self.measure))
        if self.mode is not None:
            object.__setattr__(self, "mode", LlfuMode(self.mode))
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError("uncertainty values must be one-dimensional")
        if not np.isfinite(values).all():
            raise NonFinite(f"{self.measure.value} uncertainty has non-finite values")
        object.__setattr__(self, "values", _readonly(values))

    def __len__(self) -> int:
        return self.values.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, UncertaintyVector):
            return NotImplemented
        return (
            self.measure == other.measure
            and self.mode == other.mode
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def transformed(self, fn) -> "UncertaintyVector":
        return UncertaintyVector(self.measure, fn(self.values), self.mode)


def check_aligned(es: EvaluationSet, unc: UncertaintyVector) -> None:
    if len(unc) != len(es):
        raise LengthMismatch(
            f"uncertainty vector has {len(unc)} values for {len(es)} records"
        )
