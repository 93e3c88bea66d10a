from hypothesis import given, settings, strategies as st
import pytest

from factorlens import krull, monoid as fm
from factorlens.lengthsets import LengthSet

length_lists = st.sets(st.integers(2, 6), min_size=2, max_size=3).map(LengthSet.of)


def test_realize_rejects_bad_sets():
    with pytest.raises(ValueError):
        krull.realize([3])
    with pytest.raises(ValueError):
        krull.realize([1, 3])


def test_realizer_shape_for_two_three():
    R = krull.realize([2, 3])
    assert R.m == (2, 2)
    assert R.dim == 4
    assert fm.verify_atoms(R.presentation)[0]


@settings(max_examples=8, deadline=None)
@given(length_lists)
def test_closed_form_matches_brute_force(L):
    R = krull.realize(L)
    P = R.presentation
    for x in fm.elements_up_to(P, 3):
        assert krull.closed_length_set(R, x) == fm.length_set(P, x)


@settings(max_examples=8, deadline=None)
@given(length_lists)
def test_union_at_min_is_L(L):
    R = krull.realize(L)
    assert fm.unions(R.presentation, L.min).union == L
    assert krull.closed_form_unions(R, L.min) == L


@pytest.mark.parametrize("L", [(2, 3), (2, 5), (3, 4, 6)])
def test_closed_unions_match_brute(L):
    R = krull.realize(L)
    for k in range(1, 6):
        assert krull.closed_form_unions(R, k) == fm.unions(R.presentation, k).union


def test_membership_outside_monoid():
    R = krull.realize([2, 3])
    x = [0] * R.dim
    x[R.block(2)[0]] = 1
    assert krull.membership(R, x)  # a unit-vector atom
    x[R.block(1)[0]] = -1
    assert not krull.membership(R, x)
    with pytest.raises(krull.NotInMonoid):
        krull.closed_length_set(R, x)


def test_jump_sums():
    masks = krull.jump_sums([1, 3], 2)
    assert [LengthSet.from_mask(m) for m in masks] == [
        LengthSet.of([0]), LengthSet.of([0, 1, 3]), LengthSet.of([0, 1, 2, 3, 4, 6])]


# the counterexample ---------------------------------------------------------

SPEC = krull.admissible_instance(2, 4)


def test_instance_values():
    assert SPEC.m == (0, 1, 5, 19, 57)
    assert krull.validate(SPEC) is None
    assert SPEC.L(2) == LengthSet.of([2, 3, 5])


def test_validate_flags_growth_failure():
    bad = krull.CounterexampleSpec(2, (0, 1, 3, 5), SPEC.U[:1] + (LengthSet.of([3]), LengthSet.of([5])), 3)
    assert krull.validate(bad) is not None


@pytest.mark.parametrize("k", [1, 2])
def test_closed_and_brute_unions_agree(k):
    assert (krull.counterexample_unions(SPEC, k, "closed")
            == krull.counterexample_unions(SPEC, k, "brute"))


def test_reports_show_holes_and_growth():
    reps = krull.counterexample_report(SPEC)
    for r in reps:
        assert r.upper == r.expected_upper
    assert all(r.hole_present for r in reps[1:])
    assert [r.aap_bound_upper for r in reps] == [0, 1, 7, 26]
    assert krull.strictly_increasing([r.aap_bound_upper for r in reps[1:]])


def test_prefix_elasticity():
    assert [krull.rho_of_prefix(SPEC, k) for k in (2, 3, 4)] == [2, 6, 20]


def test_strictly_increasing_reads_none_as_infinity():
    assert krull.strictly_increasing([1, 3, None])
    assert not krull.strictly_increasing([1, None, 4])
