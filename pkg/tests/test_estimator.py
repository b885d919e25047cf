import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import assert_snapshots_close, mixed_family_sample, rel_close
from seqgini.errors import InsufficientDataError, InvalidObservationError, UndefinedGiniError
from seqgini.estimator import REBUILD_EVERY, RunningState, pairwise_totals
from seqgini.oracle import brute_force_statistics


def state_of(xs):
    return RunningState().extend(xs)


def pair_loop(xs, kernel):
    return sum(kernel(a, b) for a, b in itertools.combinations(xs, 2))


# --- push ---------------------------------------------------------------------


def test_push_single_observation():
    s = state_of([5])
    assert s.n == 1
    assert s.pair_abs_sum == 0
    assert list(s.sorted_values) == [5.0]


def test_push_123_pair_sums():
    s = state_of([3, 1, 2])
    assert s.pair_abs_sum == pair_loop([1, 2, 3], lambda a, b: abs(a - b)) == 4
    assert s.pair_weighted_sum == pair_loop([1, 2, 3], lambda a, b: (a + b) / 2 * abs(a - b)) == 8
    assert list(s.sorted_values) == [1, 2, 3]
    assert list(s.prefix_sums) == [0, 1, 3, 6]
    assert list(s.prefix_sq_sums) == [0, 1, 5, 14]
    assert list(s.t_values) == [3, 2, 3]


@pytest.mark.parametrize("bad", [-1.0, -1e-300, math.nan, math.inf, -math.inf])
def test_push_rejects_invalid(bad):
    s = state_of([1, 2])
    with pytest.raises(InvalidObservationError):
        s.push(bad)
    assert s.n == 2


def test_push_grows_capacity():
    s = RunningState(capacity=4)
    s.extend(range(1, 40))
    assert s.n == 39
    assert s.pair_abs_sum == pair_loop(range(1, 40), lambda a, b: abs(a - b))


def test_ties_are_inserted_after_equal_values():
    s = state_of([2, 1, 2, 2, 0])
    assert list(s.sorted_values) == [0, 1, 2, 2, 2]
    assert s.pair_abs_sum == pair_loop([2, 1, 2, 2, 0], lambda a, b: abs(a - b))


# --- gmd / gini / tau ----------------------------------------------------------


def test_gmd_examples():
    assert state_of([1, 2, 3]).gmd() == pytest.approx(4 / 3, rel=1e-15)
    assert state_of([7.5] * 6).gmd() == 0
    assert state_of([0, 3.25]).gmd() == 3.25


def test_gini_examples():
    assert state_of([4.0] * 5).gini() == 0
    assert state_of([0, 9.0]).gini() == 1
    assert state_of([1, 2, 3]).gini() == pytest.approx(1 / 3, rel=1e-15)


def test_tau_examples():
    assert state_of([1, 2, 3]).tau_hat() == pytest.approx(8 / 3, rel=1e-15)
    assert state_of([6, 6]).tau_hat() == 0
    assert state_of([0, 6]).tau_hat() == 18  # c^2/2


def test_statistics_need_enough_data():
    s = state_of([1])
    for fn in (s.gmd, s.gini, s.tau_hat, s.variance):
        with pytest.raises(InsufficientDataError):
            fn()
    s = state_of([1, 2, 3])
    with pytest.raises(InsufficientDataError):
        s.s_w_sq()
    with pytest.raises(InsufficientDataError):
        s.snapshot()


def test_zero_mean_is_undefined():
    s = state_of([0, 0, 0, 0])
    assert s.gmd() == 0
    with pytest.raises(UndefinedGiniError):
        s.gini()
    with pytest.raises(UndefinedGiniError):
        s.snapshot()


# --- jackknife and V^2 ---------------------------------------------------------


def exact_reference(xs):
    """Exact rational evaluation of every statistic straight from the definitions."""
    xs = [Fraction(x) for x in xs]
    n = len(xs)
    pairs = Fraction(n * (n - 1), 2)
    mean = sum(xs) / n
    gmd = pair_loop(xs, lambda a, b: abs(a - b)) / pairs
    var = sum((x - mean) ** 2 for x in xs) / (n - 1)
    tau = Fraction(2, n * (n - 1)) * pair_loop(xs, lambda a, b: (a + b) / 2 * abs(a - b))
    w = []
    for j in range(n):
        rest = xs[:j] + xs[j + 1 :]
        gmd_j = pair_loop(rest, lambda a, b: abs(a - b)) / Fraction((n - 1) * (n - 2), 2)
        w.append(n * gmd - (n - 2) * gmd_j)
    wbar = sum(w) / n
    sw = sum((wi - wbar) ** 2 for wi in w) / (n - 1)
    v = gmd**2 * var / (4 * mean**4) - gmd * tau / mean**3 + gmd**2 / mean**2 + sw / (4 * mean**2)
    return dict(mean=mean, variance=var, gmd=gmd, tau=tau, s_w_sq=sw, v_sq=v, gini=gmd / (2 * mean))


def test_s_w_sq_constant_sample():
    assert state_of([3.0] * 4).s_w_sq() == 0


def test_s_w_sq_1234_matches_exact_jackknife():
    ref = exact_reference([1, 2, 3, 4])
    assert ref["s_w_sq"] == Fraction(16, 27)
    assert state_of([1, 2, 3, 4]).s_w_sq() == pytest.approx(float(ref["s_w_sq"]), rel=1e-14)


def test_s_w_sq_shifted_symmetric_data():
    # not location invariant: check each shift against the exact jackknife
    base = [-2.0, 2.0, -1.0, 1.0, 0.5, -0.5]
    values = set()
    for shift in (2.0, 5.0, 40.0):
        xs = [x + shift for x in base]
        got = state_of(xs).s_w_sq()
        assert got == pytest.approx(float(exact_reference(xs)["s_w_sq"]), rel=1e-12)
        values.add(round(got, 12))


@pytest.mark.parametrize("xs", [[1, 2, 3, 4], [0, 0, 1, 5, 5, 9], [3, 1, 4, 1, 5, 9, 2, 6]])
def test_snapshot_matches_exact_rationals(xs):
    snap = state_of(xs).snapshot()
    ref = exact_reference(xs)
    for name, value in ref.items():
        assert getattr(snap, name) == pytest.approx(float(value), rel=1e-12, abs=1e-15), name


def test_snapshot_constant_sample_has_zero_v_sq():
    snap = state_of([2.5] * 4).snapshot()
    assert snap.v_sq == 0 and snap.gini == 0 and snap.s_w_sq == 0


# --- invariants -----------------------------------------------------------------


nonneg = st.floats(min_value=0, max_value=1e6, allow_nan=False, allow_infinity=False, allow_subnormal=False)


@given(st.lists(nonneg, min_size=4, max_size=60).filter(lambda xs: sum(xs) > 0))
def test_incremental_matches_brute_force(xs):
    assert_snapshots_close(state_of(xs).snapshot(), brute_force_statistics(xs), rel=1e-9, conditioned=True)


@given(st.lists(nonneg, min_size=2, max_size=40).filter(lambda xs: sum(xs) > 0))
def test_gini_in_unit_interval(xs):
    s = RunningState()
    for x in xs:
        s.push(x)
        if s.n >= 2 and s.sum > 0:
            assert 0.0 <= s.gini() <= 1.0


@given(
    st.lists(st.floats(min_value=1e-3, max_value=1e4), min_size=2, max_size=40),
    st.floats(min_value=1e-3, max_value=1e3),
)
def test_gini_scale_invariant(xs, c):
    g = state_of(xs).gini()
    gc = state_of([c * x for x in xs]).gini()
    assert rel_close(g, gc, 1e-12, scale=1e-300) or abs(g - gc) < 1e-15


@given(st.lists(st.integers(min_value=0, max_value=10**6), min_size=1, max_size=80))
def test_pair_identities_exact_for_integers(xs):
    s = state_of(xs)
    y = sorted(xs)
    n = len(y)
    assert s.pair_abs_sum == sum((2 * i - n - 1) * v for i, v in enumerate(y, start=1))
    assert s.t_values.sum() == 2 * s.pair_abs_sum
    assert 2 * s.pair_weighted_sum == sum(abs(a * a - b * b) for a, b in itertools.combinations(xs, 2))


@settings(max_examples=50)
@given(st.lists(nonneg, min_size=4, max_size=50).filter(lambda xs: sum(xs) > 0), st.randoms())
def test_permutation_invariance(xs, rnd):
    shuffled = list(xs)
    rnd.shuffle(shuffled)
    assert_snapshots_close(state_of(xs).snapshot(), state_of(shuffled).snapshot(), rel=1e-12, conditioned=True)


def test_pairwise_totals_matches_running_state(rng):
    x = rng.gamma(2.0, 3.0, 500)
    s = state_of(x)
    p, w, t = pairwise_totals(np.sort(x))
    assert rel_close(p, s.pair_abs_sum, 1e-12)
    assert rel_close(w, s.pair_weighted_sum, 1e-12)
    np.testing.assert_allclose(t, s.t_values, rtol=1e-12)


def test_rebuild_keeps_long_runs_exact(rng):
    x = rng.lognormal(2.0, 0.8, 3 * REBUILD_EVERY + 17)
    s = state_of(x)
    fresh = RunningState.from_values(x)
    assert_snapshots_close(s.snapshot(), fresh.snapshot(), rel=1e-12)


def test_random_families_against_brute_force(rng):
    for _ in range(40):
        x = mixed_family_sample(rng, int(rng.integers(4, 120)))
        assert_snapshots_close(state_of(x).snapshot(), brute_force_statistics(x), rel=1e-9)
