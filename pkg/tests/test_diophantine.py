from hypothesis import given, settings, strategies as st
import pytest

from factorlens.diophantine import BudgetExceeded, hilbert_basis

from conftest import brute_min_solutions


def test_two_three_kernel():
    # 2a + 3b = 2c + 3d style system: columns [A | -A] for A = (2, 3)
    basis = hilbert_basis([(2,), (3,), (-2,), (-3,)])
    assert basis == brute_min_solutions([(2,), (3,), (-2,), (-3,)], 3)


def test_single_equation_known_basis():
    assert hilbert_basis([(1,), (-2,)]) == [(2, 1)]
    assert hilbert_basis([(1,), (1,)]) == []


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        hilbert_basis([(7,), (11,), (-5,), (-13,)], max_nodes=5)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=4))
def test_matches_box_scan(coeffs):
    cols = [(c,) for c in coeffs]
    basis = hilbert_basis(cols)
    # basis entries of a single equation with |coefficients| <= 3 stay below 4
    assert basis == brute_min_solutions(cols, 3)
