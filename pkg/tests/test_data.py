import numpy as np
import pytest
from hypothesis import given, strategies as st

from uqeval.data import EvaluationSet, PredictionRecord, UncertaintyVector, validate_set
from uqeval.errors import (
    DuplicateId,
    EmptySet,
    NegativeVariance,
    NonFinite,
    RaggedEnsemble,
)


def test_minimal_valid_set():
    es = validate_set([PredictionRecord("a", 0.0, ((0.0, 1.0),))])
    assert len(es) == 1
    assert es.member_count == 1


def test_empty_set_rejected():
    with pytest.raises(EmptySet):
        validate_set([])


def test_ragged_ensemble_rejected():
    records = [
        PredictionRecord("a", 0.0, ((0.0, 1.0), (0.0, 1.0))),
        PredictionRecord("b", 0.0, ((0.0, 1.0), (0.0, 1.0), (0.0, 1.0))),
    ]
    with pytest.raises(RaggedEnsemble):
        validate_set(records)


def test_negative_variance_names_record():
    records = [
        PredictionRecord("ok", 0.0, ((0.0, 1.0),)),
        PredictionRecord("bad", 0.0, ((0.0, -1.0),)),
    ]
    with pytest.raises(NegativeVariance) as info:
        validate_set(records)
    assert info.value.record_id == "bad"
    assert "bad" in str(info.value)


@pytest.mark.parametrize("field", ["y", "mean", "var"])
@pytest.mark.parametrize("bad", [float("nan"), float("inf"), -float("inf")])
def test_non_finite_rejected(field, bad):
    y, mean, var = 0.0, 0.0, 1.0
    if field == "y":
        y = bad
    elif field == "mean":
        mean = bad
    else:
        var = bad
    with pytest.raises(NonFinite):
        validate_set([PredictionRecord("a", y, ((mean, var),))])


def test_duplicate_id_rejected():
    records = [PredictionRecord("a", 0.0, ((0.0, 1.0),))] * 2
    with pytest.raises(DuplicateId):
        validate_set(records)


def test_zero_variance_is_accepted():
    es = validate_set([PredictionRecord("a", 0.0, ((0.0, 0.0),))])
    assert es.variances[0, 0] == 0.0


def test_set_is_immutable(tiny_set):
    with pytest.raises(ValueError):
        tiny_set.means[0, 0] = 5.0
    with pytest.raises(AttributeError):
        tiny_set.ids = ()


def test_uncertainty_vector_rejects_non_finite():
    with pytest.raises(NonFinite):
        UncertaintyVector("tvar", [1.0, float("nan")])


def test_subset_members(tiny_set):
    single = tiny_set.subset_members([1])
    assert single.member_count == 1
    assert single.means[:, 0].tolist() == [2.0, 1.5, -2.0]


finite = st.floats(-1e6, 1e6, allow_nan=False)
variance = st.floats(0, 1e6, allow_nan=False)


@st.composite
def record_lists(draw):
    m = draw(st.integers(1, 4))
    n = draw(st.integers(1, 12))
    return [
        PredictionRecord(
            f"r{i}",
            draw(finite),
            tuple((draw(finite), draw(variance)) for _ in range(m)),
        )
        for i in range(n)
    ]


@given(record_lists())
def test_validate_is_idempotent_and_order_preserving(records):
    es = validate_set(records)
    assert list(es.ids) == [r.id for r in records]
    again = validate_set(es.records)
    assert again == es
    assert es.records == records
