"""Finite subsets of N_0 under set addition.

Sets are stored as Python int bitmasks, so a sumset is a handful of shifts
and ORs.  Max and min are both additive, and every non-identity element has
max >= 1, which bounds every search by max X.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .lengthsets import LengthSet, elasticity_of_set, mask_sumset


@dataclass(frozen=True, order=True)
class FinSet:
    elements: tuple[int, ...]

    def __post_init__(self):
        e = self.elements
        if not e:
            raise ValueError("FinSet must be non-empty")
        if e[0] < 0 or any(a >= b for a, b in zip(e, e[1:])):
            raise ValueError(f"FinSet must be strictly increasing and non-negative: {e}")

    @classmethod
    def of(cls, items: Iterable[int]) -> "FinSet":
        return cls(tuple(sorted(set(int(i) for i in items))))

    @classmethod
    def interval(cls, lo: int, hi: int) -> "FinSet":
        return cls(tuple(range(lo, hi + 1)))

    @classmethod
    def from_mask(cls, mask: int) -> "FinSet":
        return cls(LengthSet.from_mask(mask).values)

    @property
    def mask(self) -> int:
        m = 0
        for v in self.elements:
            m |= 1 << v
        return m

    @property
    def min(self) -> int:
        return self.elements[0]

    @property
    def max(self) -> int:
        return self.elements[-1]

    def is_interval(self) -> bool:
        return self.max - self.min + 1 == len(self.elements)

    def __repr__(self) -> str:
        return "FinSet({" + ",".join(map(str, self.elements)) + "})"


IDENTITY = FinSet((0,))


def setsum(X: FinSet, Y: FinSet) -> FinSet:
    return FinSet.from_mask(mask_sumset(X.mask, Y.mask))


def multiple(h: int, X: FinSet) -> FinSet:
    """h X = X + ... + X (h copies), with 0 X = {0}."""
    out = 1
    for _ in range(h):
        out = mask_sumset(out, X.mask)
    return FinSet.from_mask(out)


def combine(counts: Sequence[int], atoms: Sequence[FinSet]) -> FinSet:
    out = 1
    for c, A in zip(counts, atoms):
        for _ in range(c):
            out = mask_sumset(out, A.mask)
    return FinSet.from_mask(out)


@dataclass
class PowerSubmonoid:
    """Submonoid of the power monoid of N_0 generated by ``generators``.

    ``store`` holds every element with max <= bound; because max is additive
    any decomposition of such an element only uses stored elements.
    """

    generators: list[FinSet]
    bound: int
    store: set = field(default_factory=set, repr=False)

    def __post_init__(self):
        self.generators = [g if isinstance(g, FinSet) else FinSet.of(g) for g in self.generators]
        if any(g == IDENTITY for g in self.generators):
            raise ValueError("{0} is the identity, not a generator")
        if any(g.max < 1 for g in self.generators):
            raise ValueError("generators must have max >= 1")
        self._build()

    def _build(self):
        seen = {IDENTITY.mask}
        frontier = [IDENTITY.mask]
        gens = [g.mask for g in self.generators]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = mask_sumset(x, g)
                    if y.bit_length() - 1 <= self.bound and y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        self.store = seen
        self.by_max: dict[int, list[int]] = {}
        for x in seen:
            self.by_max.setdefault(x.bit_length() - 1, []).append(x)

    def __contains__(self, X: FinSet) -> bool:
        if X.max > self.bound:
            raise ValueError(f"max {X.max} exceeds the store bound {self.bound}")
        return X.mask in self.store

    def elements(self) -> list[FinSet]:
        return sorted((FinSet.from_mask(x) for x in self.store), key=lambda X: (X.max, X.elements))

    def divides(self, U: FinSet, X: FinSet) -> bool:
        """U | X in the submonoid: X = U + Y for a stored Y."""
        if X.max > self.bound:
            raise ValueError("element beyond the store bound")
        for y in self.by_max.get(X.max - U.max, ()):
            if mask_sumset(U.mask, y) == X.mask:
                return True
        return False


def atoms_of(M: PowerSubmonoid) -> list[FinSet]:
    """Generators that are not a sum of two non-identity elements of M."""
    out = []
    for g in M.generators:
        gm = g.mask
        split = False
        for a in M.store:
            if a == 1:
                continue
            am = a.bit_length() - 1
            for b in M.by_max.get(g.max - am, ()):
                if b != 1 and mask_sumset(a, b) == gm:
                    split = True
                    break
            if split:
                break
        if not split:
            out.append(g)
    return sorted(set(out))


def factorizations_pm(atoms: Sequence[FinSet], X: FinSet) -> list[tuple[int, ...]]:
    """All count vectors c with sum c_i atoms_i == X.

    Max and min are additive, so both must add up exactly; surviving
    candidates are confirmed by computing the sumset.
    """
    s = len(atoms)
    maxes = [A.max for A in atoms]
    mins = [A.min for A in atoms]
    order = sorted(range(s), key=lambda i: -maxes[i])
    found = []
    counts = [0] * s

    def rec(pos, rmax, rmin):
        if pos == s:
            if rmax == 0 and rmin == 0 and combine(counts, atoms) == X:
                found.append(tuple(counts))
            return
        i = order[pos]
        hi = rmax // maxes[i]
        if mins[i]:
            hi = min(hi, rmin // mins[i])
        for c in range(hi + 1):
            counts[i] = c
            rec(pos + 1, rmax - c * maxes[i], rmin - c * mins[i])
        counts[i] = 0

    rec(0, X.max, X.min)
    return sorted(found)


def length_set_pm(atoms: Sequence[FinSet], X: FinSet) -> LengthSet:
    Z = factorizations_pm(atoms, X)
    if not Z:
        raise ValueError(f"{X} is not generated by the atoms")
    return LengthSet.of(sum(z) for z in Z)


def power_unions(atoms: Sequence[FinSet], k: int) -> LengthSet:
    """U_k by brute force over all multisets of k atoms."""
    if k == 0:
        return LengthSet((0,))
    mask = 0
    seen = set()
    for combo in itertools.combinations_with_replacement(range(len(atoms)), k):
        c = [0] * len(atoms)
        for i in combo:
            c[i] += 1
        X = combine(c, atoms)
        if X in seen:
            continue
        seen.add(X)
        mask |= length_set_pm(atoms, X).mask
    return LengthSet.from_mask(mask)


# ---------------------------------------------------------------------------
# the worked example: H = < [0,1], A > with A = {1} u 2.[0,n]


def example_atoms(n: int) -> tuple[FinSet, FinSet]:
    if n < 2:
        raise ValueError("the example needs n >= 2")
    return FinSet.interval(0, 1), FinSet.of([1] + [2 * j for j in range(n + 1)])


def example_monoid(n: int, bound: int) -> PowerSubmonoid:
    return PowerSubmonoid(list(example_atoms(n)), bound)


def example_length_set(n: int, h: int, l: int) -> LengthSet:
    """Closed-form L(h [0,1] + l A)."""
    if n < 2 or h < 0 or l < 0 or h + l < 1:
        raise ValueError("need n >= 2 and h + l >= 1")
    if h == 0:
        return LengthSet((l,))
    q, r = divmod(h, 2 * n)
    Q = q + l
    eps = 1 if r == 0 else 0
    return LengthSet(tuple((2 * n - 1) * x + Q + r for x in range(eps, Q + 1)))


def example_closed_length_set(n: int, X: FinSet) -> LengthSet:
    """Closed-form L(X) for a non-identity element of the example monoid.

    Elements are l A (l >= 1) and intervals [0, N] (N >= 1); the latter equal
    h [0,1] + l A whenever h >= 1 and h + 2 n l = N, and the formula depends
    on N only.
    """
    _, A = example_atoms(n)
    if X.min != 0 or X == IDENTITY:
        raise ValueError(f"{X} is not a non-identity element")
    if X.is_interval():
        return example_length_set(n, X.max, 0)
    l, rem = divmod(X.max, 2 * n)
    if rem or multiple(l, A) != X:
        raise ValueError(f"{X} is not in the example monoid")
    return LengthSet((l,))


def example_rho_k(n: int, k: int) -> int:
    if k < 2 * n:
        raise ValueError("closed form holds for k >= 2n")
    return 2 * n * (k - 1) + 1


def example_omega(n: int) -> int:
    return 2 * n + 1


def example_unions(n: int, k: int, closed: bool = False) -> LengthSet:
    """U_k of the example, by brute force (default) or the closed form."""
    if not closed:
        return power_unions(list(example_atoms(n)), k)
    if k == 0:
        return LengthSet((0,))
    mask = 0
    for h in range(k + 1):
        mask |= example_length_set(n, h, k - h).mask
    return LengthSet.from_mask(mask)


@dataclass(frozen=True)
class OmegaPM:
    atom: FinSet
    value: int
    minimal: tuple[tuple[int, ...], ...]
    certified: bool
    reason: str


def is_prime_in_store(M: PowerSubmonoid, U: FinSet) -> bool:
    """U | X + Y implies U | X or U | Y, for all stored X, Y with X + Y stored."""
    elems = [FinSet.from_mask(x) for x in M.store]
    for X in elems:
        for Y in elems:
            if X.max + Y.max > M.bound:
                continue
            S = setsum(X, Y)
            if M.divides(U, S) and not (M.divides(U, X) or M.divides(U, Y)):
                return False
    return True


def omega_pm(M: PowerSubmonoid, atoms: Sequence[FinSet], u: int) -> OmegaPM:
    """omega(H, atoms[u]) from the minimal count vectors whose sum it divides.

    Count vectors are scanned while their sum stays inside the store.  If the
    non-divisible region is finite and was exhausted, the answer is certified.
    Otherwise a prime atom still gets the certified value 1 (primality is
    checked exhaustively on the store); any other case is a lower bound.
    """
    s = len(atoms)
    U = atoms[u]
    maxes = [A.max for A in atoms]
    div, nondiv = [], []
    total = M.bound // min(maxes)
    for n in range(1, total + 1):
        for combo in itertools.combinations_with_replacement(range(s), n):
            c = [0] * s
            for i in combo:
                c[i] += 1
            if sum(ci * m for ci, m in zip(c, maxes)) > M.bound:
                continue
            c = tuple(c)
            if any(all(a >= b for a, b in zip(c, d)) for d in div):
                continue
            if M.divides(U, combine(c, atoms)):
                div.append(c)
            else:
                nondiv.append(c)
    minimal = tuple(sorted(div, key=lambda z: (sum(z), z)))
    value = max(sum(z) for z in minimal)
    # the non-divisible region is finite iff every axis carries a minimal point
    axis_hit = all(any(z[i] and sum(z) == z[i] for z in minimal) for i in range(s))
    if axis_hit:
        box = [max(z[i] for z in minimal if sum(z) == z[i]) for i in range(s)]
        exhausted = sum(b * m for b, m in zip(box, maxes)) <= M.bound
        if exhausted:
            return OmegaPM(U, value, minimal, True, "non-divisible region exhausted")
    if minimal == (tuple(1 if i == u else 0 for i in range(s)),) and is_prime_in_store(M, U):
        return OmegaPM(U, 1, minimal, True, "prime on the store")
    return OmegaPM(U, value, minimal, False, "partial: region not exhausted")


def relations_pair(n: int, k: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """The pair ([0,1] + k A, (2nk+1) [0,1]) as count vectors over ([0,1], A)."""
    return (1, k), (2 * n * k + 1, 0)


def relations_atom_exhaustive(n: int, k: int) -> bool:
    """No split of the pair into two non-trivial relations (full box search)."""
    atoms = example_atoms(n)
    x, y = relations_pair(n, k)
    for x1 in itertools.product(*(range(v + 1) for v in x)):
        for y1 in itertools.product(*(range(v + 1) for v in y)):
            if not any(x1) and not any(y1):
                continue
            if x1 == x and y1 == y:
                continue
            x2 = tuple(a - b for a, b in zip(x, x1))
            y2 = tuple(a - b for a, b in zip(y, y1))
            if combine(x1, atoms) == combine(y1, atoms) and combine(x2, atoms) == combine(y2, atoms):
                return False
    return True


def relations_atom_check(n: int, k: int, exhaustive: bool = False) -> bool:
    """Whether the pair is an atom of the monoid of relations.

    Fast path: the right side of any piece is a multiple of [0,1], hence an
    interval or {0}; the left side is b A or [0,1] + b A, and b A is never an
    interval for b >= 1.  So each piece has left side 0, or contains the
    single [0,1]; the one without it then has left side (0, b) with b = 0,
    forcing the split to be trivial.
    """
    if exhaustive:
        return relations_atom_exhaustive(n, k)
    _, A = example_atoms(n)
    return all(not multiple(b, A).is_interval() for b in range(1, k + 1))


def store_elasticities(M: PowerSubmonoid, atoms: Sequence[FinSet]) -> dict[FinSet, Fraction]:
    out = {}
    for X in M.elements():
        if X == IDENTITY:
            continue
        out[X] = elasticity_of_set(length_set_pm(atoms, X))
    return out


def unit_cancellative_on_store(M: PowerSubmonoid) -> bool:
    for x in M.store:
        for y in M.store:
            if y != 1 and mask_sumset(x, y) == x:
                return False
    return True
