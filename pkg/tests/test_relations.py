from fractions import Fraction

import pytest

from factorlens import monoid as fm
from factorlens import relations as rel
from factorlens.lengthsets import delta_set, elasticity_of_set

from conftest import brute_min_solutions

EXAMPLES = [
    fm.numerical_monoid([2, 3]),
    fm.numerical_monoid([3, 5, 7]),
    fm.zero_sum_presentation([3]),
    fm.zero_sum_presentation([2, 2]),
]


def test_minimal_relations_match_box_scan():
    P = fm.numerical_monoid([2, 3])
    cols = [(2,), (3,), (-2,), (-3,)]
    want = [(v[:2], v[2:]) for v in brute_min_solutions(cols, 3)]
    assert sorted(rel.minimal_relations(P)) == sorted(want)


@pytest.mark.parametrize("P", EXAMPLES, ids=lambda P: P.name)
def test_elasticity_is_attained_and_not_exceeded(P):
    el = rel.exact_elasticity(P)
    x, y = el.witness
    assert P.evaluate(x) == P.evaluate(y)
    assert Fraction(sum(x), sum(y)) == el.value
    seen = max(elasticity_of_set(fm.length_set(P, a)) for a in fm.elements_up_to(P, 4))
    assert seen <= el.value


@pytest.mark.parametrize("P", EXAMPLES, ids=lambda P: P.name)
def test_delta_bound_covers_observed_distances(P):
    K = rel.delta_bound(P).value
    for a in fm.elements_up_to(P, 4):
        d = delta_set(fm.length_set(P, a))
        assert not d or d.max <= K


def test_known_elasticities():
    assert rel.exact_elasticity(fm.numerical_monoid([2, 3])).value == Fraction(3, 2)
    assert rel.exact_elasticity(fm.zero_sum_presentation([3])).value == Fraction(3, 2)
    assert rel.exact_elasticity(fm.free_monoid(2)).value == 1


def test_half_factorial_has_no_length_differences():
    assert set(rel.uniform_lengths(fm.zero_sum_presentation([2]))) <= {0}


def test_increment_search_reports_violations():
    assert rel.omega_increment_violations([0, 1, 3, 9], 3) == [2]
    assert rel.omega_increment_violations([0, 1, 2, 3], 2) == []
