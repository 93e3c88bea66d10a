from fractions import Fraction
import math

from hypothesis import given, strategies as st
import pytest

from factorlens.lengthsets import (
    LengthSet, delta_set, dilate, elasticity_of_set, gcd_of, inf, is_ap,
    minimal_aap_bound, nfold, sumset, sup,
)

small_sets = st.sets(st.integers(0, 30), min_size=1, max_size=10).map(LengthSet.of)


def test_conventions_for_empty_set():
    E = LengthSet()
    assert sup(E) == 0
    assert inf(E) == math.inf
    assert delta_set(E) == E


def test_delta_and_elasticity():
    L = LengthSet.of([2, 3, 5])
    assert delta_set(L) == LengthSet.of([1, 2])
    assert elasticity_of_set(L) == Fraction(5, 2)


def test_brace_and_json_round_trip():
    L = LengthSet.of([5, 2, 3])
    assert L.brace() == "{2,3,5}"
    assert LengthSet.of(L.to_json()) == L
    assert LengthSet.from_mask(L.mask) == L


def test_aap_bound_known_values():
    # {2,3,5}: trimming one from each end leaves {3}
    assert minimal_aap_bound(LengthSet.of([2, 3, 5]), 1).bound == 1
    assert minimal_aap_bound(LengthSet.interval(3, 9), 1).bound == 0
    assert minimal_aap_bound(LengthSet.of([1, 3, 4]), 2) is None


def test_aap_rejects_bad_input():
    with pytest.raises(ValueError):
        minimal_aap_bound(LengthSet(), 1)
    with pytest.raises(ValueError):
        minimal_aap_bound(LengthSet.of([1]), 0)


def brute_aap(L, d):
    vals = set(L)
    if len({v % d for v in vals}) > 1:
        return None
    for M in range(0, L.max - L.min + 2):
        mid = sorted(v for v in vals if L.min + M <= v <= L.max - M)
        if mid and all(b - a == d for a, b in zip(mid, mid[1:])):
            return M
    return None


@given(small_sets, st.integers(1, 4))
def test_aap_bound_matches_scan(L, d):
    w = minimal_aap_bound(L, d)
    assert (w.bound if w else None) == brute_aap(L, d)


@given(small_sets, small_sets)
def test_sumset_matches_pairs(A, B):
    assert sumset(A, B) == LengthSet.of(a + b for a in A for b in B)


@given(small_sets, st.integers(1, 3))
def test_nfold_and_dilate(A, n):
    want = LengthSet((0,))
    for _ in range(n):
        want = sumset(want, A)
    assert nfold(n, A) == want
    assert dilate(n, A) == LengthSet.of(n * a for a in A)


@given(small_sets)
def test_ap_iff_one_gap(L):
    assert is_ap(L) == (len(delta_set(L)) <= 1)


@given(st.lists(st.integers(0, 50), max_size=6))
def test_gcd_of(values):
    assert gcd_of(values) == (math.gcd(*values) if values else 0)
