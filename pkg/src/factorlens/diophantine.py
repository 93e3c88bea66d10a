"""Minimal non-negative solutions of homogeneous linear Diophantine systems.

Completion procedure of Contejean and Devie: grow candidate vectors one unit
at a time, always stepping in a direction that pulls the current defect
towards zero, and sieve against solutions already found.  Dickson's lemma
guarantees termination; the output is the Hilbert basis of the solution
monoid {v in N^n : sum_j v_j c_j = 0}.
"""

from __future__ import annotations

from typing import Sequence


class BudgetExceeded(RuntimeError):
    """A combinatorial search was stopped before it could finish."""

    def __init__(self, message: str, estimate: int | None = None):
        super().__init__(message)
        self.estimate = estimate


def _dominates(w: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x >= y for x, y in zip(w, b))


def hilbert_basis(columns: Sequence[Sequence[int]], max_nodes: int = 2_000_000) -> list[tuple[int, ...]]:
    """Minimal non-zero v >= 0 with sum_j v_j * columns[j] == 0, sorted by (|v|, v).

    ``max_nodes`` caps the total number of frontier vectors visited.
    """
    n = len(columns)
    if n == 0:
        return []
    cols = [tuple(c) for c in columns]
    # inner products between columns, reused for every step direction test
    gram = [[sum(a * b for a, b in zip(ci, cj)) for cj in cols] for ci in cols]

    basis: list[tuple[int, ...]] = []
    # frontier entries: (vector, defect, <defect, c_j> for all j)
    frontier = {}
    for j in range(n):
        v = tuple(1 if i == j else 0 for i in range(n))
        frontier[v] = (cols[j], tuple(gram[j]))
    visited = 0
    while frontier:
        solved = [v for v, (dv, _) in frontier.items() if not any(dv)]
        for v in sorted(solved):
            if not any(_dominates(v, b) for b in basis):
                basis.append(v)
        nxt = {}
        for v, (dv, dots) in frontier.items():
            if not any(dv):
                continue
            visited += 1
            if visited > max_nodes:
                raise BudgetExceeded(
                    f"Hilbert basis completion exceeded {max_nodes} nodes", visited)
            for j in range(n):
                if dots[j] >= 0:
                    continue
                w = v[:j] + (v[j] + 1,) + v[j + 1:]
                if w in nxt:
                    continue
                if any(_dominates(w, b) for b in basis):
                    continue
                cj = cols[j]
                nxt[w] = (
                    tuple(a + b for a, b in zip(dv, cj)),
                    tuple(a + b for a, b in zip(dots, gram[j])),
                )
        frontier = nxt
    basis.sort(key=lambda v: (sum(v), v))
    return basis
