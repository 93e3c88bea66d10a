import itertools
from fractions import Fraction

from hypothesis import given, settings, strategies as st
import pytest

from factorlens import power as pw

N = 2
A01, A = pw.example_atoms(N)


def naive_sum(sets):
    out = {0}
    for S in sets:
        out = {a + b for a in out for b in S}
    return frozenset(out)


def naive_lengths(atoms, X, top=20):
    """Lengths of X by trying every multiset of at most ``top`` atoms."""
    target = frozenset(X.elements)
    found = set()
    for k in range(1, top + 1):
        for combo in itertools.combinations_with_replacement(range(len(atoms)), k):
            if naive_sum(atoms[i].elements for i in combo) == target:
                found.add(k)
    return found


def test_finset_basics():
    X = pw.FinSet.of([3, 0, 1])
    assert X.elements == (0, 1, 3)
    assert pw.FinSet.from_mask(X.mask) == X
    assert pw.setsum(pw.FinSet.of([0, 1]), pw.FinSet.of([0, 2])) == pw.FinSet.interval(0, 3)
    assert pw.multiple(0, X) == pw.IDENTITY


def test_atoms_of_example():
    M = pw.example_monoid(N, 20)
    assert pw.atoms_of(M) == sorted([A01, A])
    assert pw.unit_cancellative_on_store(M)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 6), st.integers(0, 2))
def test_closed_length_set_matches_naive(h, l):
    if h + l == 0:
        return
    X = pw.combine((h, l), [A01, A])
    want = naive_lengths([A01, A], X, top=h + l + 2 * N * l + 2)
    assert set(pw.example_length_set(N, h, l)) == want
    assert pw.length_set_pm([A01, A], X) == pw.example_length_set(N, h, l)


@pytest.mark.parametrize("n", [2, 3])
def test_rho_formula_on_range(n):
    for k in range(2 * n, 2 * n + 3):
        assert pw.example_unions(n, k).max == pw.example_rho_k(n, k)
        assert pw.example_unions(n, k) == pw.example_unions(n, k, closed=True)


def test_omega_of_example():
    M = pw.example_monoid(N, 40)
    atoms = pw.atoms_of(M)
    res = {a: pw.omega_pm(M, atoms, i) for i, a in enumerate(atoms)}
    assert res[A].value == pw.example_omega(N) == 5
    assert res[A].certified
    assert res[A01].value == 1


def test_relation_atoms_fast_path_agrees_with_search():
    for k in range(1, 3):
        assert pw.relations_atom_check(N, k) == pw.relations_atom_check(N, k, exhaustive=True) is True


def test_no_element_reaches_elasticity_four():
    M = pw.example_monoid(N, 40)
    els = pw.store_elasticities(M, pw.atoms_of(M))
    assert max(els.values()) < 2 * N
    # [0,37] = 37 [0,1] has lengths 3x + 10 for x <= 9
    assert max(els.values()) == Fraction(37, 10)


def test_length_set_rejects_non_members():
    with pytest.raises(ValueError):
        pw.length_set_pm([A01, A], pw.FinSet.of([0, 2]))
