"""Directed families of subsets of N_0 and their unions of sets of lengths.

A :class:`FamilyView` only needs a way to produce U_k exactly; everything
else (lambda_k, rho_k, Fekete quotients, the structure checker, the lemma
checks) is computed from the unions plus a certified distance set.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .lengthsets import (
    LengthSet,
    delta_set,
    elasticity_of_set,
    gcd_of,
    is_ap,
    minimal_aap_bound,
    sumset,
)


class HorizonExceeded(ValueError):
    """The provider cannot certify exact unions that far out."""


@dataclass(frozen=True)
class FamilySpec:
    generators: tuple[LengthSet, ...]
    closure_depth: int

    def __post_init__(self):
        gens = tuple(g if isinstance(g, LengthSet) else LengthSet.of(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise ValueError("a family needs at least one generator")
        if any(not g for g in gens):
            raise ValueError("generators must be non-empty")
        if not any(1 in g for g in gens):
            raise ValueError("family is not directed: no generator contains 1")
        if self.closure_depth < 1:
            raise ValueError("closure depth must be positive")

    @classmethod
    def from_json(cls, data: dict) -> "FamilySpec":
        return cls(tuple(LengthSet.of(g) for g in data["generators"]), int(data.get("depth", 12)))

    def to_json(self) -> dict:
        return {"generators": [g.to_json() for g in self.generators], "depth": self.closure_depth}


@dataclass(frozen=True)
class DeltaReport:
    """Observed distances plus a certified superset.

    ``candidates`` is g N intersected with [1, B] where g = min Delta is
    certified; when ``exact`` is False only g and the bound B are trusted.
    """

    values: LengthSet
    exact: bool
    candidates: LengthSet

    @property
    def min_delta(self) -> Optional[int]:
        if not self.values:
            return None
        return self.candidates.min if self.candidates else self.values.min

    @property
    def max_bound(self) -> int:
        if self.exact or not self.candidates:
            return self.values.max if self.values else 0
        return self.candidates.max


@dataclass(frozen=True)
class UnionRow:
    k: int
    union: LengthSet
    lam: int
    rho: int


@dataclass
class FamilyView:
    unions_fn: Callable[[int], LengthSet]
    delta_fn: Callable[[], DeltaReport]
    horizon: Optional[int] = None
    elasticity: Optional[Fraction] = None
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)
    _delta: Optional[DeltaReport] = field(default=None, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def union(self, k: int) -> LengthSet:
        if k < 0:
            raise ValueError("k must be non-negative")
        if k == 0:
            return LengthSet((0,))
        if self.horizon is not None and k > self.horizon:
            raise HorizonExceeded(f"U_{k} is beyond the certified horizon {self.horizon}")
        hit = self._cache.get(k)
        if hit is not None:
            return hit
        with self._lock:
            if k not in self._cache:
                U = self.unions_fn(k)
                if k not in U:
                    raise AssertionError(f"U_{k} does not contain {k}")
                self._cache[k] = U
        return self._cache[k]

    def lam(self, k: int) -> int:
        return self.union(k).min

    def rho(self, k: int) -> int:
        return self.union(k).max

    def delta(self) -> DeltaReport:
        if self._delta is None:
            with self._lock:
                if self._delta is None:
                    self._delta = self.delta_fn()
        return self._delta

    # constructors -----------------------------------------------------------

    @classmethod
    def from_spec(cls, spec: FamilySpec) -> "FamilyView":
        members = _members(spec)

        def unions_fn(k):
            if any(g.min < 1 for g in spec.generators):
                raise HorizonExceeded("a generator contains 0, so unions cannot be certified")
            mask = 0
            for m in members:
                if m >> k & 1:
                    mask |= m
            return LengthSet.from_mask(mask)

        def delta_fn():
            found = set()
            for m in members:
                found |= set(delta_set(LengthSet.from_mask(m)))
            gap_sets = [delta_set(g) for g in spec.generators]
            g = gcd_of(d for s in gap_sets for d in s)
            B = max((s.max for s in gap_sets if s), default=0)
            cands = LengthSet(tuple(range(g, B + 1, g))) if g else LengthSet()
            values = LengthSet.of(found)
            if not values.issubset(cands):
                raise AssertionError("member distances escaped the generator bound")
            return DeltaReport(values, values == cands, cands)

        rho = max(elasticity_of_set(g) for g in spec.generators)
        return cls(unions_fn, delta_fn, spec.closure_depth, rho,
                   "family" + "".join(g.brace() for g in spec.generators))

    @classmethod
    def from_monoid(cls, P, length_fn=None, delta_atoms: int = 4, budget: Optional[int] = None) -> "FamilyView":
        """Family of sets of lengths of a lattice monoid.

        Delta(H) lies in g N intersected with [1, K], where g is the gcd of the
        length differences of the minimal relations (equal to gcd Delta(H)) and
        K is the certified bound from the minimal points of Min(M).
        """
        from . import monoid as fm
        from .relations import delta_bound, exact_elasticity, minimal_relations

        b = budget or fm.DEFAULT_BUDGET

        def unions_fn(k):
            return fm.unions(P, k, b, length_fn).union

        def delta_fn():
            g = gcd_of(abs(sum(x) - sum(y)) for x, y in minimal_relations(P))
            K = delta_bound(P).value
            cands = LengthSet(tuple(range(g, K + 1, g))) if g else LengthSet()
            values = fm.observed_delta(P, delta_atoms, b, length_fn)
            if not values.issubset(cands):
                raise AssertionError("observed distances escaped the certified bound")
            return DeltaReport(values, values == cands, cands)

        return cls(unions_fn, delta_fn, None, exact_elasticity(P).value, P.name or "monoid")

    @classmethod
    def from_power_example(cls, n: int, store_bound: int = 40, closed: bool = False) -> "FamilyView":
        """The worked power-monoid example; Delta comes from the closed-form sets.

        Every closed-form set of lengths is an AP with difference 2n-1, so the
        observed set {2n-1} is the whole distance set.
        """
        from . import power

        def unions_fn(k):
            return power.example_unions(n, k, closed=closed)

        def delta_fn():
            M = power.example_monoid(n, store_bound)
            found = set()
            for X in M.elements():
                if X != power.IDENTITY:
                    L = power.example_closed_length_set(n, X)
                    if len(L) > 1 and not is_ap(L, 2 * n - 1):
                        raise AssertionError("closed-form set is not an AP")
                    found |= set(delta_set(L))
            cands = LengthSet((2 * n - 1,))
            values = LengthSet.of(found)
            return DeltaReport(values, values == cands, cands)

        return cls(unions_fn, delta_fn, None, Fraction(2 * n), f"power-example(n={n})")

    @classmethod
    def from_unions(cls, unions_fn: Callable[[int], LengthSet], delta: DeltaReport,
                    horizon: Optional[int] = None, elasticity: Optional[Fraction] = None,
                    name: str = "") -> "FamilyView":
        return cls(unions_fn, lambda: delta, horizon, elasticity, name)


def _members(spec: FamilySpec) -> list[int]:
    """Bitmasks of all sums of at most D generators (the empty sum is {0})."""
    gens = sorted({g.mask for g in spec.generators})
    from .lengthsets import mask_sumset

    seen = {1}
    layer = {1}
    for _ in range(spec.closure_depth):
        nxt = set()
        for a in layer:
            for g in gens:
                nxt.add(mask_sumset(a, g))
        nxt -= seen
        seen |= nxt
        layer = nxt
    return sorted(seen)


# ---------------------------------------------------------------------------
# operations


def unions_up_to(view: FamilyView, K: int) -> list[UnionRow]:
    if K < 1:
        raise ValueError("K must be positive")
    return [UnionRow(k, view.union(k), view.lam(k), view.rho(k)) for k in range(1, K + 1)]


def family_delta(view: FamilyView) -> DeltaReport:
    return view.delta()


@dataclass(frozen=True)
class FeketeResult:
    lower: Fraction
    trend: tuple[Fraction, ...]


def fekete_elasticity(view: FamilyView, K: int) -> FeketeResult:
    """max_{k <= K} rho_k / k, a certified lower bound for rho."""
    trend = tuple(Fraction(view.rho(k), k) for k in range(1, K + 1))
    return FeketeResult(max(trend), trend)


def accepted_elasticity_check(view: FamilyView, K: int, rho: Optional[Fraction] = None) -> Optional[int]:
    """Smallest k <= K with k rho == rho_k, or None."""
    rho = rho if rho is not None else view.elasticity
    if rho is None:
        raise ValueError("an exact elasticity is required")
    for k in range(1, K + 1):
        if k * rho == view.rho(k):
            return k
    return None


def gcd_min_delta_check(view: FamilyView) -> bool:
    D = view.delta().values
    if not D:
        raise ValueError("distance set is empty")
    return gcd_of(D) == D.min


def smallest_delta_start(view: FamilyView, delta: int, K: int) -> Optional[int]:
    """Minimal l with {l, l + delta} inside one member set.

    Such a member exists iff l + delta lies in U_l.
    """
    for l in range(1, K + 1):
        if l + delta in view.union(l):
            return l
    return None


@dataclass(frozen=True)
class WindowReport:
    k: int
    window: Optional[tuple[int, int]]
    minimal_M: Optional[int]


@dataclass(frozen=True)
class StructureVerdict:
    trivial: bool
    delta: Optional[int]
    q: Optional[Fraction]
    l: Optional[int]
    bounds: tuple[Optional[int], ...]
    bounds_upper: tuple[Optional[int], ...]
    last_change: Optional[int]
    stabilized: bool
    windows: tuple[WindowReport, ...]
    report_only: bool
    delta_exact: bool

    def to_json(self) -> dict:
        return {
            "trivial": self.trivial, "delta": self.delta,
            "q": None if self.q is None else str(self.q), "l": self.l,
            "M_k": list(self.bounds), "M_k_upper": list(self.bounds_upper),
            "last_change": self.last_change, "stabilized": self.stabilized,
            "windows": [{"k": w.k, "window": list(w.window) if w.window else None,
                         "minimal_M": w.minimal_M} for w in self.windows],
            "report_only": self.report_only, "delta_exact": self.delta_exact,
        }


def _window_bound(U: LengthSet, lo: int, rho_k: int, delta: int) -> int:
    """Smallest M >= 0 making U intersected with [lo, rho_k - M] empty or an AP."""
    M = 0
    while True:
        part = U.restrict(lo, rho_k - M)
        if not part or is_ap(part, delta):
            return M
        M += 1


def structure_check(view: FamilyView, K: int) -> StructureVerdict:
    """Finite-horizon evidence for the structure theorem for unions.

    M_k is the minimal AAP bound of U_k at difference delta (None: no bound
    works for that k).  ``bounds_upper`` does the same for U_k restricted to
    N_{>=k}.  The stabilisation flag only says that M_k last changed in the
    first half of the horizon; it is not a proof.
    """
    rep = view.delta()
    if not rep.values:
        return StructureVerdict(True, None, None, None, (), (), None, True, (), False, rep.exact)
    delta = rep.min_delta
    q = Fraction(rep.max_bound, delta)
    report_only = q.denominator != 1
    l = smallest_delta_start(view, delta, K)
    bounds, upper = [], []
    for k in range(1, K + 1):
        U = view.union(k)
        w = minimal_aap_bound(U, delta)
        bounds.append(w.bound if w else None)
        wu = minimal_aap_bound(U.restrict(lo=k), delta)
        upper.append(wu.bound if wu else None)
    last = 1
    for k in range(2, K + 1):
        if bounds[k - 1] != bounds[k - 2]:
            last = k
    windows = []
    for k in range(1, K + 1):
        if report_only or l is None or k - l * int(q) < 0:
            windows.append(WindowReport(k, None, None))
            continue
        shift = l * int(q)
        lo = (view.rho(k - shift) if k - shift > 0 else 0) + shift
        U = view.union(k)
        windows.append(WindowReport(k, (lo, U.max), _window_bound(U, lo, U.max, delta)))
    return StructureVerdict(False, delta, q, l, tuple(bounds), tuple(upper), last,
                            last <= K // 2, tuple(windows), report_only, rep.exact)


# ---------------------------------------------------------------------------
# lemma checks; each returns a list of violations (empty means all good)


def reciprocity_violations(view: FamilyView, K: int) -> list[tuple[int, int]]:
    return [(h, k) for h in range(1, K + 1) for k in range(1, K + 1)
            if (h in view.union(k)) != (k in view.union(h))]


def superadditivity_violations(view: FamilyView, K: int) -> list[tuple[int, int]]:
    return [(h, k) for h in range(1, K + 1) for k in range(h, K + 1 - h)
            if not sumset(view.union(h), view.union(k)).issubset(view.union(h + k))]


def monotone_chain_violations(view: FamilyView, K: int) -> list[tuple[int, int]]:
    bad = []
    for h in range(1, K + 1):
        for k in range(1, K + 1 - h):
            lam, rho = view.lam, view.rho
            chain = [lam(h + k), lam(h) + lam(k), h + k, rho(h) + rho(k), rho(h + k)]
            if any(a > b for a, b in zip(chain, chain[1:])):
                bad.append((h, k))
    return bad


def residue_violations(view: FamilyView, K: int) -> list[int]:
    """k with U_k not inside k + delta Z."""
    d = view.delta().min_delta
    if d is None:
        return []
    return [k for k in range(1, K + 1) if any((v - k) % d for v in view.union(k))]


def gap_violations(view: FamilyView, K: int) -> list[int]:
    """k with max Delta(U_k) > max Delta."""
    top = view.delta().max_bound
    return [k for k in range(1, K + 1) if max(delta_set(view.union(k)), default=0) > top]


def fekete_violations(view: FamilyView, K: int) -> list[tuple[int, int]]:
    return [(m, k) for k in range(1, K + 1) for m in range(2, K // k + 1)
            if view.rho(m * k) < m * view.rho(k)]


def lambda_bound_violations(view: FamilyView, K: int, rho: Optional[Fraction] = None) -> list[int]:
    """k >= 1 + rho max Delta with lambda_k < k / rho."""
    rho = rho if rho is not None else view.elasticity
    rep = view.delta()
    if rho is None or not rep.values:
        return []
    start = math.ceil(1 + rho * rep.max_bound)
    return [k for k in range(start, K + 1) if view.lam(k) * rho < k]


def long_ap_witness(view: FamilyView, d: int, q: int, K: int) -> Optional[int]:
    """Some k <= K with k + d [0, q] inside U_k."""
    for k in range(1, K + 1):
        U = view.union(k)
        if all(k + d * j in U for j in range(q + 1)):
            return k
    return None


def size_ratio_trend(view: FamilyView, K: int) -> list[Fraction]:
    """(|U_k| - 1) / k for k = 1..K."""
    return [Fraction(len(view.union(k)) - 1, k) for k in range(1, K + 1)]


def doubling_monotone(values: Sequence[Fraction]) -> bool:
    """values[2k-1] >= values[k-1] whenever 2k is in range (1-based k)."""
    n = len(values)
    return all(values[2 * k - 1] >= values[k - 1] for k in range(1, n // 2 + 1))


def limit_of_size(rho: Fraction, min_delta: int) -> Fraction:
    return (rho - 1 / rho) / min_delta
