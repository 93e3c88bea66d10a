from fractions import Fraction

from hypothesis import given, settings, strategies as st
import pytest

from factorlens import family as fam
from factorlens import monoid as fm
from factorlens.lengthsets import LengthSet

generator_sets = st.lists(
    st.sets(st.integers(1, 8), min_size=1, max_size=4), min_size=1, max_size=3,
).map(lambda gs: [sorted(g) for g in gs] + [[1, 2]])


def naive_unions(gens, depth, k):
    members = [frozenset([0])]
    frontier = list(members)
    for _ in range(depth):
        frontier = [frozenset(a + b for a in m for b in g) for m in frontier for g in gens]
        members += frontier
    out = set()
    for m in members:
        if k in m:
            out |= m
    return LengthSet.of(out)


@settings(max_examples=20, deadline=None)
@given(generator_sets)
def test_spec_unions_match_naive_closure(gens):
    view = fam.FamilyView.from_spec(fam.FamilySpec(tuple(gens), 4))
    for k in range(1, 5):
        assert view.union(k) == naive_unions(gens, 4, k)


@settings(max_examples=20, deadline=None)
@given(generator_sets)
def test_lemma_checks_hold(gens):
    view = fam.FamilyView.from_spec(fam.FamilySpec(tuple(gens), 6))
    for name, check in [("reciprocity", fam.reciprocity_violations),
                        ("superadditivity", fam.superadditivity_violations),
                        ("chain", fam.monotone_chain_violations),
                        ("residue", fam.residue_violations),
                        ("gaps", fam.gap_violations),
                        ("fekete", fam.fekete_violations),
                        ("lambda", fam.lambda_bound_violations)]:
        assert check(view, 6) == [], name


def test_horizon_is_enforced():
    view = fam.FamilyView.from_spec(fam.FamilySpec(([1, 2],), 3))
    with pytest.raises(fam.HorizonExceeded):
        view.union(4)


def test_spec_validation():
    with pytest.raises(ValueError):
        fam.FamilySpec(([2, 3],), 4)
    with pytest.raises(ValueError):
        fam.FamilySpec((), 4)
    spec = fam.FamilySpec(([1, 3],), 5)
    assert fam.FamilySpec.from_json(spec.to_json()) == spec


def test_chain_check_catches_a_fake_family():
    fake = fam.FamilyView.from_unions(
        lambda k: LengthSet.of([k]) if k != 2 else LengthSet.of([2, 9]),
        fam.DeltaReport(LengthSet.of([7]), True, LengthSet.of([7])))
    assert fam.monotone_chain_violations(fake, 3)
    assert fam.reciprocity_violations(fake, 9)


def test_numerical_monoid_structure():
    view = fam.FamilyView.from_monoid(fm.numerical_monoid([2, 3]))
    v = fam.structure_check(view, 8)
    assert not v.trivial
    assert v.delta == 1 and v.q == 1
    assert v.bounds == (0,) * 8
    assert v.stabilized


def test_free_monoid_is_trivial():
    view = fam.FamilyView.from_monoid(fm.free_monoid(2))
    assert fam.structure_check(view, 4).trivial
    assert [view.union(k) for k in range(1, 4)] == [LengthSet.of([k]) for k in range(1, 4)]


def test_fekete_lower_bound_below_elasticity():
    view = fam.FamilyView.from_monoid(fm.zero_sum_presentation([3]))
    lo = fam.fekete_elasticity(view, 6).lower
    assert lo <= view.elasticity == Fraction(3, 2)
    assert fam.accepted_elasticity_check(view, 6) == 2
    assert fam.gcd_min_delta_check(view)


def test_power_example_view():
    view = fam.FamilyView.from_power_example(2)
    rep = view.delta()
    assert rep.values == LengthSet.of([3]) and rep.exact
    assert fam.smallest_delta_start(view, 3, 8) is not None
    assert fam.limit_of_size(Fraction(4), 3) == Fraction(5, 4)


def test_doubling_monotone():
    assert fam.doubling_monotone([Fraction(1), Fraction(1), Fraction(2), Fraction(2)])
    assert not fam.doubling_monotone([Fraction(2), Fraction(1)])
