"""Finitely generated monoids embedded in a lattice Z^dim.

A monoid is given by its atom vectors; an element is a lattice vector and a
factorization is an exponent vector over the atom list.  Termination of every
enumeration relies on a positive grading g (g . a > 0 for each atom), which
also makes the monoid a BF-monoid.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .diophantine import BudgetExceeded
from .lengthsets import LengthSet, delta_set, sumset

Vector = tuple[int, ...]

DEFAULT_BUDGET = int(os.environ.get("FACTORLENS_BUDGET", "2000000"))


class UnsupportedPresentation(ValueError):
    pass


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def vadd(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def find_grading(atoms: Sequence[Vector]) -> Optional[Vector]:
    """An integer vector g with g . a >= 1 for every atom, or None.

    The LP is solved in floating point; its vertex solution is rationalised,
    scaled to integers and re-checked exactly, so a returned g is always valid.
    """
    if not atoms:
        return None
    dim = len(atoms[0])
    if all(all(x >= 0 for x in a) for a in atoms):
        g = tuple(1 for _ in range(dim))
        if all(_dot(g, a) > 0 for a in atoms):
            return g
    from scipy.optimize import linprog

    # minimise sum |g| via g = p - q, subject to a . g >= 1
    c = [1.0] * (2 * dim)
    A_ub = [[-x for x in a] + [x for x in a] for a in atoms]
    b_ub = [-1.0] * len(atoms)
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=[(0, None)] * (2 * dim), method="highs")
    if not res.success:
        return None
    raw = [res.x[i] - res.x[dim + i] for i in range(dim)]
    fracs = [Fraction(v).limit_denominator(10_000) for v in raw]
    den = math.lcm(*(f.denominator for f in fracs))
    g = tuple(int(f * den) for f in fracs)
    if all(_dot(g, a) > 0 for a in atoms):
        return g
    return None


@dataclass
class AtomPresentation:
    """Monoid generated by ``atoms`` inside Z^dim."""

    atoms: list[Vector]
    grading: Optional[Vector] = None
    name: str = ""
    _engine: Optional["_Enumerator"] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.atoms = [tuple(int(x) for x in a) for a in self.atoms]
        if not self.atoms:
            raise UnsupportedPresentation("a presentation needs at least one atom")
        dims = {len(a) for a in self.atoms}
        if len(dims) != 1:
            raise UnsupportedPresentation("atoms have different dimensions")
        if len(set(self.atoms)) != len(self.atoms):
            raise UnsupportedPresentation("atoms must be pairwise distinct")
        if any(not any(a) for a in self.atoms):
            raise UnsupportedPresentation("the zero vector is not an atom")
        if self.grading is None:
            self.grading = find_grading(self.atoms)
            if self.grading is None:
                raise UnsupportedPresentation("no positive grading exists for these atoms")
        else:
            self.grading = tuple(int(x) for x in self.grading)
            if len(self.grading) != self.dim:
                raise UnsupportedPresentation("grading has the wrong dimension")
            if any(_dot(self.grading, a) <= 0 for a in self.atoms):
                raise UnsupportedPresentation("grading is not positive on every atom")

    @property
    def dim(self) -> int:
        return len(self.atoms[0])

    @property
    def size(self) -> int:
        return len(self.atoms)

    @property
    def zero(self) -> Vector:
        return (0,) * self.dim

    def evaluate(self, z: Sequence[int]) -> Vector:
        """The element sum_i z_i a_i."""
        out = [0] * self.dim
        for c, a in zip(z, self.atoms):
            if c:
                for p, x in enumerate(a):
                    if x:
                        out[p] += c * x
        return tuple(out)

    @property
    def engine(self) -> "_Enumerator":
        if self._engine is None:
            self._engine = _Enumerator(self.atoms, self.grading)
        return self._engine

    def to_json(self) -> dict:
        return {"kind": "lattice", "dim": self.dim,
                "atoms": [list(a) for a in self.atoms], "grading": list(self.grading)}


class _Enumerator:
    """Depth-first factorization search with per-coordinate feasibility pruning.

    Atoms that are not unit vectors come first so the unit-vector tail is
    almost always forced.  A coordinate is "closed below" once no remaining
    atom can lower it and "closed above" once none can raise it.
    """

    def __init__(self, atoms: list[Vector], grading: Vector):
        s = len(atoms)
        dim = len(atoms[0])
        grades = [_dot(grading, a) for a in atoms]

        def is_unit(a):
            return sum(1 for x in a if x) == 1 and max(a) == 1

        order = sorted(range(s), key=lambda i: (is_unit(atoms[i]), -grades[i], atoms[i]))
        self.order = order
        self.atoms = [atoms[i] for i in order]
        self.grades = [grades[i] for i in order]
        self.grading = grading
        self.support = [[(p, x) for p, x in enumerate(a) if x] for a in self.atoms]
        last_neg = [-1] * dim
        last_pos = [-1] * dim
        for i, a in enumerate(self.atoms):
            for p, x in enumerate(a):
                if x < 0:
                    last_neg[p] = i
                elif x > 0:
                    last_pos[p] = i
        # coordinates whose status changes on entering depth i
        self.closed_below_at = [[] for _ in range(s + 1)]
        self.closed_above_at = [[] for _ in range(s + 1)]
        for p in range(dim):
            self.closed_below_at[last_neg[p] + 1].append(p)
            self.closed_above_at[last_pos[p] + 1].append(p)
        self.last_neg = last_neg
        self.last_pos = last_pos
        self.s = s
        # the unit-vector tail is solved in one step: each count equals its coordinate
        self.unit_start = next((i for i in range(s) if is_unit(self.atoms[i])), s)
        self.unit_index = [-1] * dim
        for i in range(self.unit_start, s):
            self.unit_index[self.atoms[i].index(1)] = i

    def factorizations(self, x: Vector) -> list[Vector]:
        s = self.s
        r = list(x)
        R = _dot(self.grading, x)
        if R < 0:
            return []
        found: list[list[int]] = []
        counts = [0] * s
        grades, support = self.grades, self.support
        cb, ca = self.closed_below_at, self.closed_above_at
        last_neg, last_pos = self.last_neg, self.last_pos

        def ok_new(i):
            for p in cb[i]:
                if r[p] < 0:
                    return False
            for p in ca[i]:
                if r[p] > 0:
                    return False
            return True

        def ok_touched(i, j):
            # coordinates touched by atom j, checked against status at depth i
            for p, _ in support[j]:
                v = r[p]
                if v < 0 and last_neg[p] < i:
                    return False
                if v > 0 and last_pos[p] < i:
                    return False
            return True

        unit_start, unit_index = self.unit_start, self.unit_index

        def rec(i, R):
            if not ok_new(i):
                return
            if i == unit_start:
                for p, v in enumerate(r):
                    if v < 0 or (v and unit_index[p] < 0):
                        return
                    if v:
                        counts[unit_index[p]] = v
                found.append(counts[:])
                for p, v in enumerate(r):
                    if v:
                        counts[unit_index[p]] = 0
                return
            if i == s:
                if R == 0:
                    found.append(counts[:])
                return
            g = grades[i]
            hi = R // g
            forced = None
            for p, a in support[i]:
                if a > 0 and last_neg[p] < i + 1:
                    # later atoms never lower p, so c * a <= r[p]
                    if r[p] < 0:
                        return
                    hi = min(hi, r[p] // a)
                    if last_pos[p] == i:
                        if r[p] % a:
                            return
                        forced = r[p] // a if forced is None else (forced if forced == r[p] // a else -1)
                elif a < 0 and last_pos[p] < i + 1:
                    if r[p] > 0:
                        return
                    hi = min(hi, r[p] // a)
                    if last_neg[p] == i:
                        if r[p] % a:
                            return
                        forced = r[p] // a if forced is None else (forced if forced == r[p] // a else -1)
            if forced is not None:
                if forced < 0 or forced > hi:
                    return
                choices = (forced,)
            else:
                choices = range(hi, -1, -1)
            sup_i = support[i]
            for c in choices:
                if c:
                    for p, a in sup_i:
                        r[p] -= c * a
                counts[i] = c
                if ok_touched(i + 1, i):
                    rec(i + 1, R - c * g)
                if c:
                    for p, a in sup_i:
                        r[p] += c * a
            counts[i] = 0

        rec(0, R)
        out = []
        inv = self.order
        for f in found:
            z = [0] * s
            for pos, c in enumerate(f):
                z[inv[pos]] = c
            out.append(tuple(z))
        out.sort()
        return out


def factorizations(P: AtomPresentation, x: Sequence[int]) -> list[Vector]:
    """All exponent vectors z with sum z_i a_i == x, in lexicographic order.

    An empty list means x is not in the monoid.
    """
    x = tuple(x)
    if len(x) != P.dim:
        raise ValueError("element has the wrong dimension")
    return P.engine.factorizations(x)


def length_set(P: AtomPresentation, x: Sequence[int]) -> LengthSet:
    return LengthSet.of(sum(z) for z in factorizations(P, x))


def is_member(P: AtomPresentation, x: Sequence[int]) -> bool:
    return bool(factorizations(P, x))


def divides(P: AtomPresentation, u: Sequence[int], x: Sequence[int]) -> bool:
    """u | x in the monoid, i.e. x - u is again an element."""
    return is_member(P, vsub(x, u))


def verify_atoms(P: AtomPresentation) -> tuple[bool, Optional[tuple[int, Vector]]]:
    """Check no generator is a sum of two or more generators.

    Returns (True, None) or (False, (atom index, witnessing factorization)).
    """
    for i, a in enumerate(P.atoms):
        for z in factorizations(P, a):
            if sum(z) >= 2:
                return False, (i, z)
    return True, None


def distance(z: Sequence[int], w: Sequence[int]) -> int:
    """Distance between factorizations after cancelling their common part."""
    m = n = 0
    for a, b in zip(z, w):
        c = min(a, b)
        m += a - c
        n += b - c
    return max(m, n)


def catenary_degree(P: AtomPresentation, x: Sequence[int], Z: Optional[list[Vector]] = None) -> int:
    """Smallest N making the distance-<=N graph on Z(x) connected.

    This is the bottleneck weight of a minimum spanning tree, found with Kruskal.
    """
    if Z is None:
        Z = factorizations(P, x)
    if len(Z) <= 1:
        return 0
    edges = sorted((distance(Z[i], Z[j]), i, j)
                   for i in range(len(Z)) for j in range(i + 1, len(Z)))
    parent = list(range(len(Z)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    comps = len(Z)
    for d, i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            comps -= 1
            if comps == 1:
                return d
    raise AssertionError("complete graph must connect")


def count_multisets(s: int, k: int) -> int:
    return math.comb(s + k - 1, k)


def atom_sums(P: AtomPresentation, k: int, budget: int = DEFAULT_BUDGET) -> set[Vector]:
    """Distinct elements that are sums of exactly k atoms."""
    est = count_multisets(P.size, k)
    if est > budget:
        raise BudgetExceeded(
            f"{est} multisets of {k} atoms out of {P.size} exceed the budget {budget}", est)
    out = set()
    atoms = P.atoms

    def rec(start, k, acc):
        if k == 0:
            out.add(acc)
            return
        for i in range(start, len(atoms)):
            rec(i, k - 1, vadd(acc, atoms[i]))

    rec(0, k, P.zero)
    return out


@dataclass(frozen=True)
class UnionResult:
    k: int
    union: LengthSet
    lam: int
    rho: int


def _lengths_chunk(args):
    P, xs = args
    return [length_set(P, x) for x in xs]


def unions(P: AtomPresentation, k: int, budget: int = DEFAULT_BUDGET,
           length_fn: Optional[Callable[[Vector], LengthSet]] = None,
           threads: int = 1) -> UnionResult:
    """The union of all sets of lengths containing k.

    Every element with k in its set of lengths is a sum of k atoms, so the
    multisets of k atoms cover everything.  ``length_fn`` may replace the
    brute-force set of lengths (e.g. by a closed form).
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return UnionResult(0, LengthSet((0,)), 0, 0)
    xs = sorted(atom_sums(P, k, budget))
    if length_fn is not None:
        sets = [length_fn(x) for x in xs]
    elif threads > 1 and len(xs) > 256:
        chunks = [xs[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_lengths_chunk, [(P, c) for c in chunks]))
        sets = [s for part in parts for s in part]
    else:
        sets = [length_set(P, x) for x in xs]
    mask = 0
    for L in sets:
        mask |= L.mask
    U = LengthSet.from_mask(mask)
    return UnionResult(k, U, U.min, U.max)


def elements_up_to(P: AtomPresentation, n: int, budget: int = DEFAULT_BUDGET) -> list[Vector]:
    """Distinct non-zero elements that are sums of at most n atoms."""
    seen = set()
    for k in range(1, n + 1):
        seen |= atom_sums(P, k, budget)
    return sorted(seen)


def observed_delta(P: AtomPresentation, n: int, budget: int = DEFAULT_BUDGET,
                   length_fn: Optional[Callable[[Vector], LengthSet]] = None) -> LengthSet:
    """Union of the distance sets of all elements that are sums of <= n atoms."""
    fn = length_fn or (lambda x: length_set(P, x))
    out = set()
    for x in elements_up_to(P, n, budget):
        out |= set(delta_set(fn(x)))
    return LengthSet.of(out)


# ---------------------------------------------------------------------------
# omega and tame degree


@dataclass(frozen=True)
class DivisorFrontier:
    """The minimal exponent vectors z whose value is divisible by atom u."""

    atom: int
    minimal: tuple[Vector, ...]
    certified: bool


def divisor_frontier(P: AtomPresentation, u: int) -> DivisorFrontier:
    """Minimal points of {z : a_u divides sum z_i a_i}.

    Each minimal point is the left half of a minimal relation (x, y) with
    y_u >= 1: split any witnessing pair into minimal relations and one of them
    carries the u.  The relation basis is complete, so the result is certified.
    """
    from .relations import minimal_relations

    s = P.size
    cands = set()
    for x, y in minimal_relations(P):
        if y[u] >= 1:
            cands.add(x)
    minimal = sorted(
        (z for z in cands if not any(w != z and all(a <= b for a, b in zip(w, z)) for w in cands)),
        key=lambda z: (sum(z), z),
    )
    assert tuple(1 if i == u else 0 for i in range(s)) in minimal
    return DivisorFrontier(u, tuple(minimal), True)


def omega(P: AtomPresentation, u: int) -> int:
    """omega(H, a_u): the largest size of a minimal multiset of atoms divisible by a_u."""
    return max(sum(z) for z in divisor_frontier(P, u).minimal)


def omega_by_definition(P: AtomPresentation, u: int, n_max: int, budget: int = DEFAULT_BUDGET) -> int:
    """Bounded oracle straight from the definition of omega.

    For every multiset of n <= n_max atoms whose product is divisible by a_u,
    find the smallest sub-multiset that is still divisible; return the max.
    """
    au = P.atoms[u]
    best = 0
    for n in range(1, n_max + 1):
        if count_multisets(P.size, n) > budget:
            raise BudgetExceeded("omega oracle over budget", count_multisets(P.size, n))
        for combo in itertools.combinations_with_replacement(range(P.size), n):
            z = [0] * P.size
            for i in combo:
                z[i] += 1
            if not divides(P, au, P.evaluate(z)):
                continue
            smallest = None
            for m in range(1, n + 1):
                for sub in set(itertools.combinations(combo, m)):
                    w = [0] * P.size
                    for i in sub:
                        w[i] += 1
                    if divides(P, au, P.evaluate(w)):
                        smallest = m
                        break
                if smallest is not None:
                    break
            best = max(best, smallest)
    return best


def element_divisor_frontier(P: AtomPresentation, a: Sequence[int]) -> tuple[Vector, ...]:
    """Minimal z with a | sum z_i a_i, for an arbitrary element a.

    a | pi(z) means A z - A w = a for some w >= 0.  The minimal solutions of
    that inhomogeneous system are the Hilbert basis elements of
    [A | -A | -a] with last coordinate 1, and every solution dominates one of
    them, so the minimal z are among their z-parts.
    """
    from .diophantine import hilbert_basis

    a = tuple(a)
    s = P.size
    if not any(a):
        return ((0,) * s,)
    cols = list(P.atoms) + [tuple(-x for x in v) for v in P.atoms] + [tuple(-x for x in a)]
    live = [p for p in range(P.dim) if any(c[p] for c in cols)]
    cols = [tuple(c[p] for p in live) for c in cols]
    zs = {v[:s] for v in hilbert_basis(cols) if v[-1] == 1}
    return tuple(sorted(
        (z for z in zs if not any(w != z and all(x <= y for x, y in zip(w, z)) for w in zs)),
        key=lambda z: (sum(z), z)))


def omega_element(P: AtomPresentation, a: Sequence[int]) -> int:
    """omega(H, a) for any element a (0 for the identity)."""
    return max(sum(z) for z in element_divisor_frontier(P, a))


@dataclass(frozen=True)
class TameResult:
    atom: int
    value: int
    closed: bool
    explored_lower_bound: int
    ceiling: Optional[int] = None


def _min_distance_to_u(Z: list[Vector], z: Vector, u: int) -> Optional[int]:
    ds = [distance(z, w) for w in Z if w[u] >= 1]
    return min(ds) if ds else None


def tame_degree(P: AtomPresentation, u: int, budget: int = 4,
                max_multisets: int = DEFAULT_BUDGET) -> TameResult:
    """Tame degree t(H, a_u).

    First a bounded exploration over all elements that are sums of at most
    ``budget`` atoms, giving a lower bound.  Then the exact value is read off
    the minimal divisible multisets: any factorization containing such a
    multiset z0 can swap z0 for a factorization of the same element that uses
    a_u, so the worst z0 is the worst case overall.
    """
    best = 0
    for x in elements_up_to(P, budget, max_multisets):
        Z = factorizations(P, x)
        if not any(z[u] >= 1 for z in Z):
            continue
        for z in Z:
            d = _min_distance_to_u(Z, z, u)
            best = max(best, d)
    frontier = divisor_frontier(P, u)
    exact = 0
    for z0 in frontier.minimal:
        Z = factorizations(P, P.evaluate(z0))
        exact = max(exact, _min_distance_to_u(Z, z0, u))
    if best > exact:
        raise AssertionError("explored lower bound exceeds the certified tame degree")
    return TameResult(u, exact, frontier.certified, best)


# ---------------------------------------------------------------------------
# zero-sum sequences over finite abelian groups


def group_elements(invariant_factors: Sequence[int]) -> list[Vector]:
    return list(itertools.product(*(range(n) for n in invariant_factors)))


def minimal_zero_sum_sequences(invariant_factors: Sequence[int],
                               subset: Optional[Sequence[Sequence[int]]] = None) -> tuple[list[Vector], list[Vector]]:
    """Minimal zero-sum sequences over G0, as multiplicity vectors over G0.

    Returns (G0, atoms).  Sequences are enumerated up to length |G|, which
    bounds the Davenport constant.
    """
    ns = tuple(invariant_factors)
    G = group_elements(ns)
    G0 = [tuple(g) for g in subset] if subset is not None else G
    order = math.prod(ns)

    def add(a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, ns))

    zero = tuple(0 for _ in ns)
    atoms = []
    # combinations_with_replacement over indices of G0, by increasing length
    for length in range(1, order + 1):
        for combo in itertools.combinations_with_replacement(range(len(G0)), length):
            total = zero
            for i in combo:
                total = add(total, G0[i])
            if total != zero:
                continue
            mult = [0] * len(G0)
            for i in combo:
                mult[i] += 1
            mult = tuple(mult)
            # minimal iff it is not divisible by a shorter minimal one
            if any(all(a <= b for a, b in zip(t, mult)) for t in atoms):
                continue
            atoms.append(mult)
    return G0, atoms


def zero_sum_presentation(invariant_factors: Sequence[int],
                          subset: Optional[Sequence[Sequence[int]]] = None) -> AtomPresentation:
    G0, atoms = minimal_zero_sum_sequences(invariant_factors, subset)
    label = "+".join(f"Z{n}" for n in invariant_factors)
    return AtomPresentation(atoms, grading=tuple(1 for _ in G0), name=f"B({label})")


def davenport_constant(invariant_factors: Sequence[int]) -> int:
    _, atoms = minimal_zero_sum_sequences(invariant_factors)
    return max(sum(a) for a in atoms)


def numerical_monoid(gens: Sequence[int]) -> AtomPresentation:
    return AtomPresentation([(g,) for g in gens], grading=(1,),
                            name="<" + ",".join(map(str, gens)) + ">")


def free_monoid(rank: int) -> AtomPresentation:
    atoms = [tuple(1 if i == j else 0 for i in range(rank)) for j in range(rank)]
    return AtomPresentation(atoms, grading=(1,) * rank, name=f"N0^{rank}")


# ---------------------------------------------------------------------------
# direct products


@dataclass
class ProductPresentation:
    components: list[AtomPresentation]

    @property
    def dim(self) -> int:
        return sum(c.dim for c in self.components)

    def flatten(self) -> AtomPresentation:
        """Atoms of the product, embedded in the concatenated lattice."""
        atoms, grading = [], []
        offset = 0
        for c in self.components:
            for a in c.atoms:
                atoms.append((0,) * offset + a + (0,) * (self.dim - offset - c.dim))
            grading.extend(c.grading)
            offset += c.dim
        return AtomPresentation(atoms, grading=tuple(grading), name=" x ".join(c.name for c in self.components))


def product(Ps: Iterable[AtomPresentation]) -> ProductPresentation:
    return ProductPresentation(list(Ps))


def combine_unions(left: Sequence[LengthSet], right: Sequence[LengthSet], k: int) -> LengthSet:
    """U_k(S x T) from U_0..U_k of both factors (index = k, U_0 = {0})."""
    mask = 0
    for nu in range(k + 1):
        mask |= sumset(left[nu], right[k - nu]).mask
    return LengthSet.from_mask(mask)


def product_unions(component_unions: Sequence[Sequence[LengthSet]], k: int) -> LengthSet:
    """U_k of a direct product, given U_0..U_k for each component.

    Uses U_k(S x T) = union over nu of U_nu(S) + U_{k-nu}(T), folded left to right.
    """
    acc = list(component_unions[0][: k + 1])
    for comp in component_unions[1:]:
        acc = [combine_unions(acc, comp, j) for j in range(k + 1)]
    return acc[k]


def presentation_unions(P: AtomPresentation, k_max: int, budget: int = DEFAULT_BUDGET,
                        length_fn=None) -> list[LengthSet]:
    """[U_0, U_1, ..., U_kmax] for one presentation."""
    return [unions(P, k, budget, length_fn).union for k in range(k_max + 1)]


# ---------------------------------------------------------------------------
# primes and the free-times-rest split


def prime_atoms(P: AtomPresentation) -> list[int]:
    """Indices of atoms that are prime (omega = 1)."""
    return [u for u in range(P.size) if omega(P, u) == 1]


def prime_split(P: AtomPresentation) -> tuple[list[int], Optional[AtomPresentation]]:
    """Split off the prime atoms: H = F(P) x T.

    Returns the prime atom indices and the presentation of T generated by the
    remaining atoms (None if every atom is prime, i.e. H is factorial).
    """
    primes = prime_atoms(P)
    rest = [a for i, a in enumerate(P.atoms) if i not in primes]
    if not rest:
        return primes, None
    return primes, AtomPresentation(rest, grading=P.grading, name=f"T({P.name})")
