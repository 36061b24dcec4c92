import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from uqeval.data import PredictionRecord, validate_set
from uqeval.ensemble import aggregate, epkl, uncertainty_vector
from uqeval.errors import InsufficientMembers, MeasureUnavailable, ZeroVariance


def kl_gauss(mu_i, v_i, mu_j, v_j):
    return 0.5 * math.log(v_j / v_i) + (v_i + (mu_i - mu_j) ** 2) / (2 * v_j) - 0.5


def epkl_oracle(members):
    """Naive average over ordered pairs i != j."""
    m = len(members)
    total = 0.0
    for i, (mu_i, v_i) in enumerate(members):
        for j, (mu_j, v_j) in enumerate(members):
            if i != j:
                total += kl_gauss(mu_i, v_i, mu_j, v_j)
    return total / (m * (m - 1))


def rec(*members, y=0.0):
    return PredictionRecord("r", y, tuple(members))


def test_aggregate_two_members():
    agg = aggregate(rec((0.0, 1.0), (2.0, 1.0)))
    assert (agg.mean_hat, agg.mvar, agg.varm, agg.tvar) == (1.0, 1.0, 1.0, 2.0)
    assert agg.epkl == pytest.approx(2.0, abs=1e-12)


def test_aggregate_identical_members():
    agg = aggregate(rec(*[(3.3, 0.7)] * 4))
    assert agg.mean_hat == pytest.approx(3.3)
    assert agg.mvar == pytest.approx(0.7)
    assert agg.varm == pytest.approx(0.0, abs=1e-15)
    assert agg.epkl == 0.0


def test_aggregate_single_member():
    agg = aggregate(rec((3.0, 0.5)))
    assert (agg.mean_hat, agg.mvar, agg.varm, agg.tvar, agg.epkl) == (3.0, 0.5, 0.0, 0.5, None)


def test_epkl_hand_values():
    assert epkl(rec((0.0, 1.0), (2.0, 1.0))) == pytest.approx(2.0, abs=1e-12)
    assert epkl(rec((0.0, 1.0), (0.0, 2.0))) == pytest.approx(0.125, abs=1e-12)
    # the two directed divergences behind 0.125
    assert kl_gauss(0, 1, 0, 2) == pytest.approx(0.096574, abs=1e-6)
    assert kl_gauss(0, 2, 0, 1) == pytest.approx(0.153426, abs=1e-6)


def test_epkl_errors():
    with pytest.raises(InsufficientMembers):
        epkl(rec((0.0, 1.0)))
    with pytest.raises(ZeroVariance):
        epkl(rec((0.0, 1.0), (0.0, 0.0)))


def test_uncertainty_vector_measures(tiny_set):
    tvar = uncertainty_vector(tiny_set, "tvar").values
    mvar = uncertainty_vector(tiny_set, "mvar").values
    varm = uncertainty_vector(tiny_set, "varm").values
    assert len(tvar) == 3
    np.testing.assert_array_equal(tvar, mvar + varm)
    ep = uncertainty_vector(tiny_set, "epkl").values
    for i, r in enumerate(tiny_set):
        assert ep[i] == pytest.approx(epkl_oracle(r.members), rel=1e-12)


def test_measure_availability():
    single = validate_set([rec((1.0, 0.3)), PredictionRecord("s", 0.0, ((2.0, 0.4),))])
    with pytest.raises(MeasureUnavailable):
        uncertainty_vector(single, "epkl")
    np.testing.assert_array_equal(uncertainty_vector(single, "variance").values, [0.3, 0.4])
    pair = validate_set([rec((1.0, 0.3), (2.0, 0.1))])
    with pytest.raises(MeasureUnavailable):
        uncertainty_vector(pair, "variance")


means = st.floats(-100, 100, allow_nan=False)
variances = st.floats(1e-3, 100, allow_nan=False)
member = st.tuples(means, variances)
members = st.lists(member, min_size=2, max_size=10)


@given(members)
def test_tvar_is_exact_sum(ms):
    agg = aggregate(rec(*ms))
    assert agg.tvar == agg.mvar + agg.varm


@given(members)
def test_closed_form_matches_double_loop(ms):
    expected = epkl_oracle(ms)
    assert epkl(rec(*ms)) == pytest.approx(expected, rel=1e-10, abs=1e-10)


@given(members, st.randoms(use_true_random=False))
def test_epkl_permutation_invariant(ms, rnd):
    shuffled = list(ms)
    rnd.shuffle(shuffled)
    assert epkl(rec(*shuffled)) == pytest.approx(epkl(rec(*ms)), rel=1e-12, abs=1e-12)


coarse = st.lists(
    st.tuples(st.integers(-3, 3).map(float), st.sampled_from([0.5, 1.0, 2.0, 4.0])),
    min_size=2,
    max_size=5,
)


@given(coarse)
def test_epkl_zero_iff_identical(ms):
    identical = len(set(ms)) == 1
    value = epkl(rec(*ms))
    assert value >= 0
    if identical:
        assert value == 0
    else:
        assert value > 0


@given(member, st.integers(2, 10))
def test_epkl_identical_members_zero(m, k):
    assert epkl(rec(*[m] * k)) == 0


@given(members, st.floats(-1e3, 1e3, allow_nan=False))
def test_translation_invariance(ms, c):
    base = aggregate(rec(*ms))
    moved = aggregate(rec(*[(mu + c, v) for mu, v in ms], y=c))
    assert moved.mvar == base.mvar
    for name in ("varm", "tvar", "epkl"):
        a, b = getattr(base, name), getattr(moved, name)
        assert b == pytest.approx(a, rel=1e-12, abs=1e-12 * (1 + abs(c)) ** 2)
