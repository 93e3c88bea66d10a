import itertools

from hypothesis import given, settings, strategies as st
import pytest

from factorlens import monoid as fm
from factorlens.diophantine import BudgetExceeded
from factorlens.lengthsets import LengthSet

from conftest import numerical_lengths

H23 = fm.numerical_monoid([2, 3])


def test_factorizations_of_six():
    assert sorted(fm.factorizations(H23, (6,))) == [(0, 2), (3, 0)]
    assert fm.length_set(H23, (6,)) == LengthSet.of([2, 3])
    assert not fm.is_member(H23, (1,))


@settings(max_examples=30, deadline=None)
@given(st.sets(st.integers(2, 9), min_size=1, max_size=3), st.integers(0, 40))
def test_numerical_length_sets_match_dp(gens, x):
    gens = sorted(gens)
    P = fm.numerical_monoid(gens)
    assert fm.length_set(P, (x,)) == numerical_lengths(gens, x)


def test_verify_atoms_catches_reducible_generator():
    ok, wit = fm.verify_atoms(fm.numerical_monoid([2, 3, 5]))
    assert not ok
    assert wit == (2, (1, 1, 0))
    assert fm.verify_atoms(H23) == (True, None)


def test_catenary_degree_and_distance():
    assert fm.distance((3, 0), (0, 2)) == 3
    assert fm.catenary_degree(H23, (6,)) == 3
    # a single factorization has catenary degree 0
    assert fm.catenary_degree(H23, (2,)) == 0


def test_unions_of_two_three():
    assert fm.unions(H23, 2).union == LengthSet.of([2, 3])
    assert fm.unions(H23, 3).union == LengthSet.of([2, 3, 4])


def test_unions_threads_do_not_change_results():
    P = fm.zero_sum_presentation([3])
    for k in range(1, 4):
        assert fm.unions(P, k, threads=1).union == fm.unions(P, k, threads=2).union


def test_budget_exceeded_carries_estimate():
    with pytest.raises(BudgetExceeded) as info:
        fm.atom_sums(fm.zero_sum_presentation([3]), 3, budget=3)
    assert info.value.estimate == fm.count_multisets(4, 3)


def brute_zero_sum_atoms(n):
    """Minimal zero-sum sequences over Z_n as multiplicity vectors (length <= n)."""
    found = []
    for size in range(1, n + 1):
        for seq in itertools.combinations_with_replacement(range(n), size):
            if sum(seq) % n:
                continue
            proper = any(sum(sub) % n == 0
                         for m in range(1, size) for sub in itertools.combinations(seq, m))
            if not proper:
                found.append(tuple(seq.count(g) for g in range(n)))
    return sorted(found)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_zero_sum_atoms_match_brute(n):
    P = fm.zero_sum_presentation([n])
    assert sorted(P.atoms) == brute_zero_sum_atoms(n)
    assert fm.davenport_constant([n]) == n


def test_davenport_of_klein_group():
    assert fm.davenport_constant([2, 2]) == 3


@pytest.mark.parametrize("P", [H23, fm.zero_sum_presentation([3]), fm.numerical_monoid([3, 5, 7])],
                         ids=lambda P: P.name)
def test_omega_matches_definition(P):
    for u in range(P.size):
        w = fm.omega(P, u)
        assert fm.omega_by_definition(P, u, w + 1) == w


def test_omega_values_two_three():
    assert [fm.omega(H23, u) for u in range(2)] == [2, 3]


def test_omega_of_element_agrees_on_atoms():
    P = fm.zero_sum_presentation([3])
    for u, a in enumerate(P.atoms):
        assert fm.omega_element(P, a) == fm.omega(P, u)
    assert fm.omega_element(P, P.zero) == 0


def test_tame_degree_bounds():
    for u in range(H23.size):
        t = fm.tame_degree(H23, u)
        assert t.closed
        assert t.explored_lower_bound <= t.value == 3


def test_product_unions_match_flattened_brute_force():
    A, B = fm.numerical_monoid([2, 3]), fm.free_monoid(1)
    flat = fm.product([A, B]).flatten()
    comps = [[fm.unions(A, j).union if j else LengthSet((0,)) for j in range(4)],
             [fm.unions(B, j).union if j else LengthSet((0,)) for j in range(4)]]
    for k in range(1, 4):
        assert fm.product_unions(comps, k) == fm.unions(flat, k).union


def test_prime_split_of_free_factor():
    flat = fm.product([fm.free_monoid(1), H23]).flatten()
    assert fm.prime_atoms(flat) == [0]


def test_grading_found_and_checked():
    g = fm.find_grading([(1, 0), (1, -1), (0, 1)])
    assert g is not None
    assert all(sum(a * b for a, b in zip(g, v)) > 0 for v in [(1, 0), (1, -1), (0, 1)])
    # a vector and its negative cannot both be positive
    assert fm.find_grading([(1, 0), (-1, 0)]) is None
