"""Explicit Krull monoids with a prescribed set of lengths, and a coproduct of
them whose unions of sets of lengths defeat the structure theorem.

Coordinates of the ambient lattice are grouped in blocks 1..s of sizes
m_1..m_s.  The atoms are the unit vectors u_{i,j} plus, for i >= 2,
u_{i,0} = (all ones on block 1) - (all ones on block i).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .lengthsets import LengthSet, delta_set, minimal_aap_bound
from .monoid import (
    DEFAULT_BUDGET,
    AtomPresentation,
    combine_unions,
    elements_up_to,
    numerical_monoid,
    product,
    unions,
)

Vector = tuple[int, ...]


class NotInMonoid(ValueError):
    pass


@dataclass(frozen=True)
class GammaProfile:
    gamma_ij: tuple[tuple[int, ...], ...]
    gamma: tuple[int, ...]
    gamma_prime: tuple[int, ...]
    C: int
    k: int


@dataclass
class RealizedKrull:
    L: LengthSet
    m: tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.m)

    @property
    def dim(self) -> int:
        return sum(self.m)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for mi in self.m:
            out.append(acc)
            acc += mi
        return tuple(out)

    def block(self, i: int) -> range:
        """Coordinates of block i (1-based, as in the construction)."""
        o = self.offsets[i - 1]
        return range(o, o + self.m[i - 1])

    @cached_property
    def labels(self) -> list[tuple[int, int]]:
        """(i, j) label of each atom, in presentation order."""
        out = [(1, j) for j in range(1, self.m[0] + 1)]
        for i in range(2, self.s + 1):
            out.append((i, 0))
            out.extend((i, j) for j in range(1, self.m[i - 1] + 1))
        return out

    def atom(self, i: int, j: int) -> Vector:
        v = [0] * self.dim
        if j == 0:
            if i < 2:
                raise ValueError("u_{i,0} exists only for i >= 2")
            for p in self.block(1):
                v[p] = 1
            for p in self.block(i):
                v[p] = -1
        else:
            v[self.block(i)[j - 1]] = 1
        return tuple(v)

    @cached_property
    def presentation(self) -> AtomPresentation:
        atoms = [self.atom(i, j) for i, j in self.labels]
        # all-ones on block 1 is too weak for u_{i,0}; weight block 1 heavier
        w1 = max(self.m) // self.m[0] + 1
        grading = tuple(w1 if p < self.m[0] else 1 for p in range(self.dim))
        return AtomPresentation(atoms, grading=grading, name=f"H{self.L.brace()}")

    @cached_property
    def jumps(self) -> tuple[int, ...]:
        """D_i = m_i + 1 - m_1 for i = 2..s."""
        return tuple(mi + 1 - self.m[0] for mi in self.m[1:])

    def base_element(self) -> Vector:
        """u_{1,1} + ... + u_{1,m_1}, whose set of lengths is L."""
        return tuple(1 if p < self.m[0] else 0 for p in range(self.dim))

    def to_json(self) -> dict:
        return {"L": self.L.to_json(), "m": list(self.m), "dim": self.dim,
                "atoms": [list(a) for a in self.presentation.atoms],
                "labels": [list(t) for t in self.labels]}


def realize(L: LengthSet | Sequence[int]) -> RealizedKrull:
    """Krull monoid having L as a set of lengths with U_{min L} = L."""
    L = L if isinstance(L, LengthSet) else LengthSet.of(L)
    if len(L) < 2:
        raise ValueError("L needs at least two elements")
    if L.min < 2:
        raise ValueError("L must lie in N_{>=2}")
    m = (L.min,) + tuple(v - 1 for v in L.values[1:])
    return RealizedKrull(L, m)


def gamma_profile(R: RealizedKrull, x: Sequence[int]) -> GammaProfile:
    if len(x) != R.dim:
        raise ValueError("vector has the wrong dimension")
    gij = tuple(tuple(x[p] for p in R.block(i)) for i in range(1, R.s + 1))
    gamma = tuple(min(b) for b in gij)
    gp = tuple(max(0, -g) for g in gamma)
    C = sum(x) + sum(D * gp[i] for i, D in enumerate(R.jumps, start=1))
    k = gamma[0] - sum(gp[1:])
    return GammaProfile(gij, gamma, gp, C, k)


def membership(R: RealizedKrull, x: Sequence[int]) -> bool:
    return gamma_profile(R, x).k >= 0


def jump_sums(jumps: Sequence[int], k: int) -> list[int]:
    """Masks S_0..S_k with S_t = {sum D_i b_i : sum b_i <= t}."""
    out = [1]
    for _ in range(k):
        prev = out[-1]
        nxt = prev
        for D in jumps:
            nxt |= prev << D
        out.append(nxt)
    return out


def closed_length_set(R: RealizedKrull, x: Sequence[int]) -> LengthSet:
    g = gamma_profile(R, x)
    if g.k < 0:
        raise NotInMonoid(f"{tuple(x)} is not in the monoid")
    return LengthSet.from_mask(jump_sums(R.jumps, g.k)[-1] << g.C)


def closed_form_unions(R: RealizedKrull, nu: int) -> LengthSet:
    """U_nu(H) from the closed form alone.

    L(x) depends only on (C(x), k(x)), and the achievable pairs are exactly
    k >= 0, C >= k m_1 (x = k (ones on block 1) + t u_{1,1} has C = k m_1 + t).
    nu in C + S_k forces k m_1 <= C <= nu.
    """
    if nu < 0:
        raise ValueError("nu must be non-negative")
    m1 = R.m[0]
    kmax = nu // m1
    S = jump_sums(R.jumps, kmax)
    mask = 0
    for k in range(kmax + 1):
        for C in range(k * m1, nu + 1):
            if S[k] >> (nu - C) & 1:
                mask |= S[k] << C
    return LengthSet.from_mask(mask)


@dataclass(frozen=True)
class RealizationReport:
    L: LengthSet
    union_at_min: LengthSet
    max_delta: int
    rho_table: dict
    rho_expected: dict
    checked_by_brute_force: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return (self.union_at_min == self.L
                and self.max_delta == max(delta_set(self.L))
                and self.rho_table == self.rho_expected)


def verify_realization(R: RealizedKrull, ell_max: int = 3, delta_atoms: int = 5,
                       brute_k: int = 7, budget: int = DEFAULT_BUDGET) -> RealizationReport:
    """Check the three advertised properties on finite ranges.

    (ii) U_{min L} over all multisets of min L atoms via the closed form,
    (i) max Delta over elements that are sums of <= delta_atoms atoms,
    (iii) rho_{l min L + nu} for l <= ell_max from closed-form unions, with
    k <= brute_k re-done by brute force factorization.
    """
    P = R.presentation
    closed = lambda x: closed_length_set(R, x)
    m1 = R.L.min
    U = unions(P, m1, budget, length_fn=closed).union
    md = 0
    for x in elements_up_to(P, delta_atoms, budget):
        d = delta_set(closed(x))
        if d:
            md = max(md, d.max)
    table, expected, brute = {}, {}, []
    for ell in range(ell_max + 1):
        for nu in range(m1):
            k = ell * m1 + nu
            if k == 0:
                continue
            table[k] = closed_form_unions(R, k).max
            expected[k] = ell * R.L.max + nu
            if k <= brute_k:
                b = unions(P, k, budget).rho
                if b != table[k]:
                    raise AssertionError(f"closed-form and brute-force rho_{k} disagree")
                brute.append(k)
    return RealizationReport(R.L, U, md, table, expected, tuple(brute))


# ---------------------------------------------------------------------------
# the counterexample coproduct


def growth_lhs(m: Sequence[int], k: int) -> Fraction:
    return sum((Fraction(k, i) * m[i] + (i - 1) for i in range(1, k - 1)), Fraction(0))


@dataclass
class CounterexampleSpec:
    d: int
    m: tuple[int, ...]
    U: tuple[LengthSet, ...]
    K: int
    _components: dict = field(default_factory=dict, repr=False, compare=False)

    def L(self, k: int) -> LengthSet:
        """L_k = [k, m_{k-1}+1] disjoint-union U_k."""
        if k < 1:
            raise ValueError("k must be positive")
        if k == 1:
            return LengthSet((1,))
        return LengthSet.interval(k, self.m[k - 1] + 1).union(self.U[k - 1])

    def component(self, k: int) -> Optional[RealizedKrull]:
        """H_k for k >= 2 (None for H_1 = (N_0, +))."""
        if k == 1:
            return None
        if k not in self._components:
            self._components[k] = realize(self.L(k))
        return self._components[k]

    def component_presentation(self, k: int) -> AtomPresentation:
        if k == 1:
            return numerical_monoid([1])
        return self.component(k).presentation

    def to_json(self) -> dict:
        return {"d": self.d, "K": self.K, "m": list(self.m),
                "U": [u.to_json() for u in self.U],
                "L": [self.L(k).to_json() for k in range(1, self.K + 1)]}


def validate(spec: CounterexampleSpec) -> Optional[str]:
    """None if all hypotheses hold on the horizon, else a description of the first failure.

    The growth condition at k involves m_1..m_{k-1}, so with m known up to
    m_K it is checked for 3 <= k <= K + 1.
    """
    m, U, d, K = spec.m, spec.U, spec.d, spec.K
    if d < 2:
        return "d must be at least 2"
    if len(m) < K + 1 or m[0] != 0 or m[1] != 1:
        return "m must start 0, 1 and reach m_K"
    if U[0]:
        return "U_1 must be empty"
    for k in range(3, K + 2):
        if growth_lhs(m, k) > m[k - 1] - (k - 1):
            return f"growth condition fails at k={k}"
    for k in range(2, K + 1):
        Uk = U[k - 1]
        if not Uk:
            return f"U_{k} is empty"
        if not (m[k - 1] + 1 < Uk.min <= m[k - 1] + d):
            return f"min U_{k} out of range"
        if Uk.max != m[k]:
            return f"max U_{k} != m_{k}"
        if len(Uk) > 1 and max(delta_set(Uk)) > d:
            return f"max Delta(U_{k}) exceeds d"
    return None


def admissible_instance(d: int, K: int) -> CounterexampleSpec:
    """Smallest admissible m_k with U_k = {m_{k-1}+2, m_{k-1}+4, ..., m_k}.

    m_k is chosen so the growth condition at k+1 holds, then bumped to the
    parity of m_{k-1}; U_k then has difference 2 and min U_k + 1 is a hole.
    """
    if d < 2 or K < 2:
        raise ValueError("need d >= 2 and K >= 2")
    m = [0, 1]
    for k in range(2, K + 1):
        need = growth_lhs(m + [0], k + 1) + k
        mk = max(int(-(-need // 1)), m[k - 1] + 2)
        if (mk - m[k - 1]) % 2:
            mk += 1
        m.append(mk)
    U = [LengthSet()] + [LengthSet(tuple(range(m[k - 1] + 2, m[k] + 1, 2))) for k in range(2, K + 1)]
    spec = CounterexampleSpec(d, tuple(m), tuple(U), K)
    err = validate(spec)
    if err:
        raise AssertionError(err)
    return spec


def component_unions_closed(spec: CounterexampleSpec, j: int, k: int) -> list[LengthSet]:
    """[U_0(H_j), ..., U_k(H_j)] from closed forms."""
    if j == 1:
        return [LengthSet((nu,)) for nu in range(k + 1)]
    R = spec.component(j)
    return [LengthSet((0,))] + [closed_form_unions(R, nu) for nu in range(1, k + 1)]


def truncated_unions(spec: CounterexampleSpec, k: int, upto: Optional[int] = None) -> list[LengthSet]:
    """U_0..U_k of H_1 x ... x H_upto (default upto = k) via closed forms."""
    upto = k if upto is None else upto
    acc = component_unions_closed(spec, 1, k)
    for j in range(2, upto + 1):
        comp = component_unions_closed(spec, j, k)
        acc = [combine_unions(acc, comp, t) for t in range(k + 1)]
    return acc


def counterexample_unions(spec: CounterexampleSpec, k: int, method: str = "closed",
                          restrict: bool = True, budget: int = DEFAULT_BUDGET) -> LengthSet:
    """U_k(H) for the coproduct H, optionally intersected with N_{>=k}.

    Components H_j with j > k have U_nu = {nu} for nu <= k, so they change
    nothing and U_k(H) = U_k(H_1 x ... x H_k) as a full set.
    ``method="brute"`` enumerates factorizations in the flattened product.
    """
    if not 1 <= k <= spec.K:
        raise ValueError(f"k must lie in [1, {spec.K}]")
    if method == "closed":
        U = truncated_unions(spec, k)[k]
    elif method == "brute":
        flat = product(spec.component_presentation(j) for j in range(1, k + 1)).flatten()
        U = unions(flat, k, budget).union
    else:
        raise ValueError(f"unknown method {method!r}")
    return U.restrict(lo=k) if restrict else U


@dataclass(frozen=True)
class CounterexampleReport:
    k: int
    full: LengthSet
    upper: LengthSet
    expected_upper: LengthSet
    hole_present: bool
    aap_bound_upper: Optional[int]
    aap_bound_full: Optional[int]


def counterexample_report(spec: CounterexampleSpec, method: str = "closed") -> list[CounterexampleReport]:
    out = []
    for k in range(1, spec.K + 1):
        full = counterexample_unions(spec, k, method, restrict=False)
        upper = full.restrict(lo=k)
        hole = True
        if k >= 2:
            h = spec.U[k - 1].min
            hole = h in full and h + 2 in full and h + 1 not in full
        wu = minimal_aap_bound(upper, 1)
        wf = minimal_aap_bound(full, 1)
        out.append(CounterexampleReport(
            k, full, upper, spec.L(k), hole,
            wu.bound if wu else None, wf.bound if wf else None))
    return out


def rho_of_prefix(spec: CounterexampleSpec, k: int) -> int:
    """rho_k(H_1 x ... x H_{k-1}) from closed forms."""
    return truncated_unions(spec, k, upto=k - 1)[k].max


def strictly_increasing(values: Sequence[Optional[int]]) -> bool:
    """Strict increase with None read as infinity (nothing follows infinity)."""
    seq = [float("inf") if v is None else v for v in values]
    return all(a < b for a, b in zip(seq, seq[1:]))
