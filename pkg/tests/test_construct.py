import pytest
from hypothesis import given, settings, strategies as st

from bhr.construct import build_12x_single, reduce_246, reduce_36x, sigma
from bhr.core import (
    InadmissibleInput,
    InvalidArgument,
    LengthMultiset,
    apply_unit_automorphism,
    check_admissibility,
    induced_multiset,
    verify_realization,
)


def test_sigma():
    assert sigma(5).values == (0, 2, 4, 5, 3, 1)
    assert sigma(4).values == (0, 2, 4, 3, 1)
    assert sigma(1).values == (0, 1)
    assert sigma(5).shifted(1) == (1, 3, 5, 6, 4, 2)
    with pytest.raises(InvalidArgument):
        sigma(0)


@given(st.integers(1, 40))
def test_sigma_steps(k):
    s = sigma(k).values
    assert sorted(s) == list(range(k + 1))
    steps = [abs(b - a) for a, b in zip(s, s[1:])]
    assert steps.count(1) == 1 and steps.count(2) == k - 1


def test_worked_paths():
    assert build_12x_single(16, 7, 14).path == (15, 14, 13, 12, 11, 10, 9, 8, 7, 0, 1, 2, 3, 4, 5, 6)
    assert build_12x_single(16, 7, 10).path == (15, 14, 13, 12, 11, 10, 9, 8, 7, 0, 1, 3, 5, 6, 4, 2)
    assert build_12x_single(16, 7, 7).path == (12, 14, 15, 13, 11, 10, 9, 8, 7, 0, 1, 3, 5, 6, 4, 2)
    assert build_12x_single(16, 7, 1).path == (14, 12, 10, 8, 6, 5, 3, 1, 15, 13, 11, 9, 7, 0, 2, 4)


def test_builder_rejects_bad_parameters():
    for args in [(16, 8, 3), (16, 5, 3), (12, 7, 3), (16, 7, 0), (16, 7, 15)]:
        with pytest.raises(InvalidArgument):
            build_12x_single(*args)


@settings(max_examples=200)
@given(st.integers(14, 80).flatmap(
    lambda v: st.tuples(st.just(v), st.sampled_from(range(7, v // 2 + 1, 2)), st.integers(1, v - 2))))
def test_builder_realizes_its_multiset(vxa):
    v, x, a = vxa
    L = LengthMultiset.from_counts(v, {1: a, 2: v - 2 - a, x: 1})
    if not check_admissibility(L).admissible:
        with pytest.raises(InvalidArgument):
            build_12x_single(v, x, a)
        return
    assert verify_realization(build_12x_single(v, x, a), L)


def test_reduce_36x_through_closed_form():
    # x' = 5 * 3^{-1} mod 16 = 7, odd and above 6
    L = LengthMultiset.from_counts(16, {3: 7, 6: 7, 5: 1})
    r = reduce_36x(L)
    assert verify_realization(r, L)
    back = apply_unit_automorphism(r, pow(3, -1, 16))
    assert induced_multiset(back) == LengthMultiset.from_counts(16, {1: 7, 2: 7, 7: 1})
    assert back == build_12x_single(16, 7, 7)


def test_reduce_36x_by_search():
    L = LengthMultiset.from_counts(13, {3: 5, 6: 6, 4: 1})
    assert verify_realization(reduce_36x(L), L)


def test_reduce_36x_errors():
    with pytest.raises(InadmissibleInput):
        reduce_36x(LengthMultiset.from_counts(15, {3: 6, 6: 7, 4: 1}))
    with pytest.raises(InvalidArgument):
        reduce_36x(LengthMultiset.from_counts(13, {3: 5, 6: 5, 4: 2}))


def test_reduce_246():
    L = LengthMultiset.from_counts(13, {2: 4, 4: 4, 6: 4})
    r = reduce_246(L)
    assert verify_realization(r, L)
    half = apply_unit_automorphism(r, 7)
    assert induced_multiset(half) == LengthMultiset.from_counts(13, {1: 4, 2: 4, 3: 4})
    with pytest.raises(InadmissibleInput):
        reduce_246(LengthMultiset.from_counts(14, {2: 5, 4: 4, 6: 4}))
