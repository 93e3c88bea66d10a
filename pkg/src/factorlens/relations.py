"""Minimal relations between atoms and the invariants read off them.

For a cancellative monoid given by atoms a_1..a_s, a relation is a pair of
exponent vectors (x, y) with sum x_i a_i == sum y_i a_i.  The relations form
the monoid of non-negative solutions of [A | -A] (x, y) = 0; its Hilbert basis
is finite and every relation is a sum of basis elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .diophantine import hilbert_basis
from .lengthsets import LengthSet
from .monoid import AtomPresentation, length_set

Vector = tuple[int, ...]


def _key(P: AtomPresentation) -> tuple:
    return tuple(P.atoms)


@lru_cache(maxsize=64)
def _relations_cached(atoms: tuple) -> tuple:
    s = len(atoms)
    dim = len(atoms[0])
    cols = [atoms[i] for i in range(s)] + [tuple(-x for x in atoms[i]) for i in range(s)]
    # coordinates that are zero in every atom carry no constraint
    live = [p for p in range(dim) if any(c[p] for c in cols)]
    cols = [tuple(c[p] for p in live) for c in cols]
    basis = hilbert_basis(cols)
    return tuple((v[:s], v[s:]) for v in basis)


def minimal_relations(P: AtomPresentation) -> list[tuple[Vector, Vector]]:
    """Hilbert basis of the relation monoid, including the trivial pairs (e_i, e_i)."""
    return list(_relations_cached(_key(P)))


@dataclass(frozen=True)
class Elasticity:
    value: Fraction
    witness: Optional[tuple[Vector, Vector]]


def exact_elasticity(P: AtomPresentation) -> Elasticity:
    """rho(H) = max |x| / |y| over the minimal relations.

    Every relation is a sum of basis relations, and a ratio of sums never
    exceeds the largest ratio of the summands.  The max is attained, so rho is
    accepted; the witness (x, y) has |x| / |y| == rho.
    """
    best = Fraction(1)
    wit = None
    for x, y in minimal_relations(P):
        r = Fraction(sum(x), sum(y))
        if r > best or wit is None and r == best:
            best, wit = r, (x, y)
    return Elasticity(best, wit)


@dataclass(frozen=True)
class DeltaBound:
    """K with Delta(H) bounded by it; one point of the minimal frontier attains it."""

    value: int
    minimal_points: tuple[Vector, ...]
    witness: Optional[Vector]


def _minimal(points) -> list[Vector]:
    pts = set(points)
    return sorted(
        (z for z in pts if not any(w != z and all(a <= b for a, b in zip(w, z)) for w in pts)),
        key=lambda z: (sum(z), z),
    )


def delta_bound(P: AtomPresentation) -> DeltaBound:
    """Upper bound K for max Delta(H) from the frontier of "can be lengthened".

    Min(M) collects the minimal x admitting a strictly longer factorization of
    the same element.  For each m in Min(M) take the jump from |m| to the next
    length of pi(m); K is the worst jump.  Any factorization z that is not of
    maximal length dominates some m, and replacing m inside z moves the
    length up by at most that jump.
    """
    pts = [x for x, y in minimal_relations(P) if sum(y) > sum(x)]
    mins = _minimal(pts)
    best, wit = 0, None
    for m in mins:
        L = length_set(P, P.evaluate(m))
        k = sum(m)
        above = [v for v in L if v > k]
        jump = above[0] - k
        if jump > best:
            best, wit = jump, m
    return DeltaBound(best, tuple(mins), wit)


def increment_bound(P: AtomPresentation) -> Fraction:
    """Bound m (2 rho - 1) on rho_{k+1} - rho_k.

    m is the length of the short side of the elasticity witness; in a
    cancellative monoid no padding factorization is needed.
    """
    el = exact_elasticity(P)
    m = sum(el.witness[1])
    return m * (2 * el.value - 1)


def omega_increment_violations(rhos: list[int], omega_value: int) -> list[int]:
    """Indices k with rho_{k+1} - rho_k > max(1, omega - 1).

    This only searches; nothing assumes the inequality holds.
    """
    cap = max(1, omega_value - 1)
    return [k for k in range(1, len(rhos) - 1) if rhos[k + 1] - rhos[k] > cap]


def uniform_lengths(P: AtomPresentation) -> LengthSet:
    """Distinct |x| - |y| over minimal relations (0 everywhere means half-factorial)."""
    return LengthSet.of(abs(sum(x) - sum(y)) for x, y in minimal_relations(P))
