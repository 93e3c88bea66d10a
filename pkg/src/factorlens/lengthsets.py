"""Finite subsets of the non-negative integers and their combinatorics.

A :class:`LengthSet` is the common currency of the package: sets of lengths,
unions of sets of lengths, distance sets.  All arithmetic is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, Optional

INF = math.inf


@dataclass(frozen=True, order=True)
class LengthSet:
    """Strictly increasing tuple of non-negative integers (possibly empty)."""

    values: tuple[int, ...] = ()

    def __post_init__(self):
        vals = self.values
        for a, b in zip(vals, vals[1:]):
            if a >= b:
                raise ValueError(f"LengthSet values must be strictly increasing: {vals}")
        if vals and vals[0] < 0:
            raise ValueError(f"LengthSet values must be non-negative: {vals}")

    @classmethod
    def of(cls, items: Iterable[int] = ()) -> "LengthSet":
        return cls(tuple(sorted(set(int(i) for i in items))))

    @classmethod
    def interval(cls, lo: int, hi: int) -> "LengthSet":
        return cls(tuple(range(max(lo, 0), hi + 1)))

    @classmethod
    def from_mask(cls, mask: int) -> "LengthSet":
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(i)
            mask >>= 1
            i += 1
        return cls(tuple(out))

    @property
    def mask(self) -> int:
        m = 0
        for v in self.values:
            m |= 1 << v
        return m

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, item) -> bool:
        return item in self._frozen

    def __bool__(self) -> bool:
        return bool(self.values)

    @property
    def _frozen(self) -> frozenset:
        # cached lazily; dataclass is frozen so go through object.__setattr__
        try:
            return self.__dict__["_fs"]
        except KeyError:
            fs = frozenset(self.values)
            object.__setattr__(self, "_fs", fs)
            return fs

    @property
    def min(self) -> int:
        return self.values[0]

    @property
    def max(self) -> int:
        return self.values[-1]

    @property
    def positive(self) -> "LengthSet":
        """The part of the set lying in N = {1, 2, ...}."""
        return LengthSet(tuple(v for v in self.values if v > 0))

    def union(self, other: "LengthSet") -> "LengthSet":
        return LengthSet.of(self._frozen | other._frozen)

    def intersect(self, other: "LengthSet") -> "LengthSet":
        return LengthSet.of(self._frozen & other._frozen)

    def restrict(self, lo=None, hi=None) -> "LengthSet":
        """Elements inside the discrete interval [lo, hi] (either end may be None)."""
        return LengthSet(tuple(
            v for v in self.values
            if (lo is None or v >= lo) and (hi is None or v <= hi)
        ))

    def shift(self, t: int) -> "LengthSet":
        return LengthSet(tuple(v + t for v in self.values))

    def issubset(self, other: "LengthSet") -> bool:
        return self._frozen <= other._frozen

    def to_json(self) -> list[int]:
        return list(self.values)

    def brace(self) -> str:
        return "{" + ",".join(str(v) for v in self.values) + "}"

    def __repr__(self) -> str:
        return f"LengthSet({self.brace()})"


def sup(L: LengthSet) -> int:
    """Supremum with the convention sup of the empty set = 0."""
    return L.max if L else 0


def inf(L: LengthSet):
    """Infimum with the convention inf of the empty set = infinity."""
    return L.min if L else INF


def delta_set(L: LengthSet) -> LengthSet:
    """Distances between consecutive elements.

    >>> delta_set(LengthSet.of([2, 4, 7]))
    LengthSet({2,3})
    """
    v = L.values
    return LengthSet.of(b - a for a, b in zip(v, v[1:]))


def elasticity_of_set(L: LengthSet) -> Fraction:
    """max L+ / min L+, or 1 when L has no positive element."""
    pos = L.positive
    if not pos:
        return Fraction(1)
    return Fraction(pos.max, pos.min)


def is_ap(L: LengthSet, d: Optional[int] = None) -> bool:
    """True if L is a non-empty arithmetic progression (with difference d if given)."""
    if not L:
        return False
    gaps = delta_set(L)
    if d is None:
        return len(gaps) <= 1
    return gaps.issubset(LengthSet((d,)))


def sumset(A: LengthSet, B: LengthSet) -> LengthSet:
    if not A or not B:
        return LengthSet()
    return LengthSet.from_mask(mask_sumset(A.mask, B.mask))


def mask_sumset(a: int, b: int) -> int:
    """Sumset of two sets encoded as bitmasks."""
    if not a or not b:
        return 0
    if a.bit_count() > b.bit_count():
        a, b = b, a
    out = 0
    i = 0
    while a:
        if a & 1:
            out |= b << i
        a >>= 1
        i += 1
    return out


def nfold(n: int, L: LengthSet) -> LengthSet:
    """The n-fold sumset L + ... + L."""
    if n < 1:
        raise ValueError("n must be positive")
    result = None
    base = L.mask
    while n:
        if n & 1:
            result = base if result is None else mask_sumset(result, base)
        n >>= 1
        if n:
            base = mask_sumset(base, base)
    return LengthSet.from_mask(result)


def dilate(n: int, L: LengthSet) -> LengthSet:
    return LengthSet(tuple(n * v for v in L.values))


@dataclass(frozen=True)
class AapWitness:
    difference: int
    bound: int
    residue: int


def minimal_aap_bound(L: LengthSet, d: int) -> Optional[AapWitness]:
    """Smallest M such that L is an almost arithmetical progression with difference d.

    Returns None if L is not contained in a single residue class mod d, or if no
    M up to the scan cutoff works.  The middle part must be a non-empty AP, so
    for M beyond ceil((max - min) / 2) the window is empty and nothing can help.
    """
    if not L:
        raise ValueError("minimal_aap_bound needs a non-empty set")
    if d < 1:
        raise ValueError("difference must be positive")
    y = L.min % d
    if any(v % d != y for v in L.values):
        return None
    lo, hi = L.min, L.max
    cutoff = -(-(hi - lo) // 2) + 1
    for M in range(cutoff + 1):
        if is_ap(L.restrict(lo + M, hi - M), d):
            return AapWitness(d, M, y)
    return None


def gcd_of(values: Iterable[int]) -> int:
    return reduce(math.gcd, values, 0)
