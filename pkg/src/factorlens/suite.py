"""Reproduction suite: each criterion is a function returning a Verdict."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import family as fam
from . import krull, monoid, power
from .diophantine import BudgetExceeded
from .lengthsets import LengthSet, delta_set, is_ap
from .relations import exact_elasticity, minimal_relations

PROP41_SETS = ((2, 3), (2, 5), (3, 4, 6), (2, 3, 5))


@dataclass
class Verdict:
    number: int
    name: str
    passed: bool
    seconds: float = 0.0
    limit: Optional[float] = None
    details: list = field(default_factory=list)
    partial: bool = False

    def line(self) -> str:
        status = "PASS" if self.passed else ("PARTIAL" if self.partial else "FAIL")
        return f"[{status}] criterion {self.number}: {self.name} ({self.seconds:.1f}s)"

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "partial": self.partial,
                "seconds": round(self.seconds, 3), "limit": self.limit,
                "details": [str(d) for d in self.details]}


def _timed(number: int, name: str, limit: float, body: Callable[[list], bool]) -> Verdict:
    details: list = []
    partial = False
    t0 = time.perf_counter()
    try:
        ok = body(details)
    except BudgetExceeded as exc:  # not a pass, but not evidence of a failure either
        ok, partial = False, True
        details.append(f"budget exhausted: {exc}")
    except Exception as exc:  # a crash is a failure, reported with its message
        ok = False
        details.append(f"error: {type(exc).__name__}: {exc}")
    dt = time.perf_counter() - t0
    if dt > limit:
        details.append(f"time {dt:.1f}s over the {limit:.0f}s limit")
        ok = False
    return Verdict(number, name, ok, dt, limit, details, partial)


# ---------------------------------------------------------------------------
# 1, 2: the realizer


def check_realization(L, presentation: Optional[monoid.AtomPresentation] = None) -> tuple[bool, list]:
    """U_{min L} = L, max Delta(H) = max Delta(L), and the rho_k formula.

    ``presentation`` replaces the realizer's atoms (negative control).
    """
    R = krull.realize(L)
    P = presentation or R.presentation
    notes = []
    closed = lambda x: krull.closed_length_set(R, x)
    m1 = R.L.min
    U_closed = monoid.unions(P, m1, length_fn=closed).union
    U_brute = monoid.unions(P, m1).union
    ok = U_closed == R.L and U_brute == R.L
    notes.append(f"L={R.L.brace()} U_minL closed={U_closed.brace()} brute={U_brute.brace()}")
    md = 0
    for x in monoid.elements_up_to(P, 5):
        d = delta_set(closed(x))
        md = max(md, max(d, default=0))
    ok &= md == max(delta_set(R.L))
    notes.append(f"max Delta over sums of <= 5 atoms = {md}")
    for ell in range(4):
        for nu in range(m1):
            k = ell * m1 + nu
            if k == 0:
                continue
            want = ell * R.L.max + nu
            got = krull.closed_form_unions(R, k).max
            if k <= 7:
                per_element = monoid.unions(P, k, length_fn=closed).rho
                if per_element != got:
                    ok = False
                    notes.append(f"rho_{k}: closed-form unions {got} vs per-element {per_element}")
            if got != want:
                ok = False
                notes.append(f"rho_{k} = {got}, expected {want}")
    return ok, notes


def perturbed_presentation(L) -> monoid.AtomPresentation:
    """Realizer atoms with one coordinate of the last atom bumped by one."""
    atoms = [list(a) for a in krull.realize(L).presentation.atoms]
    atoms[-1][0] += 1
    return monoid.AtomPresentation([tuple(a) for a in atoms], name="perturbed")


def criterion_1(perturb: bool = False) -> Verdict:
    def body(details):
        ok = True
        for L in PROP41_SETS:
            t0 = time.perf_counter()
            good, notes = check_realization(L, perturbed_presentation(L) if perturb else None)
            dt = time.perf_counter() - t0
            details.extend(notes + [f"{L}: {'ok' if good else 'FAILED'} in {dt:.2f}s"])
            ok &= good and dt < 10
        return ok
    name = "realizer: U_minL = L, max Delta, rho formula"
    return _timed(1, name + (" (perturbed atoms)" if perturb else ""), 40, body)


def criterion_2() -> Verdict:
    def body(details):
        ok = True
        for L in PROP41_SETS:
            R = krull.realize(L)
            P = R.presentation
            els = monoid.elements_up_to(P, 4)
            bad = [x for x in els if krull.closed_length_set(R, x) != monoid.length_set(P, x)]
            details.append(f"{L}: {len(els)} elements, {len(bad)} mismatches")
            ok &= not bad
        return ok
    return _timed(2, "closed-form sets of lengths equal brute force", 60, body)


# ---------------------------------------------------------------------------
# 3, 8: the power monoid


def criterion_3() -> Verdict:
    def body(details):
        ok = True
        for n in (2, 3):
            ks = range(2 * n, 2 * n + 4)
            rhos = {k: power.example_unions(n, k).max for k in ks}
            want = {k: power.example_rho_k(n, k) for k in ks}
            ok &= rhos == want
            incs = [rhos[k + 1] - rhos[k] for k in ks if k + 1 in rhos]
            ok &= all(i == 2 * n for i in incs)
            M = power.example_monoid(n, 40)
            atoms = power.atoms_of(M)
            ok &= atoms == sorted(power.example_atoms(n))
            om = [power.omega_pm(M, atoms, u) for u in range(len(atoms))]
            w = max(o.value for o in om)
            ok &= w == power.example_omega(n) and all(o.certified for o in om)
            rho_store = power.store_elasticities(M, atoms)
            hits = [X for X, r in rho_store.items() if r == 2 * n]
            ok &= not hits and max(rho_store.values()) < 2 * n
            details.append(f"n={n}: rho_k={rhos} increments={incs} omega={w} atoms={atoms} "
                           f"max stored rho={max(rho_store.values())} attained={bool(hits)}")
        return ok
    return _timed(3, "power monoid: rho_k, omega, atoms, elasticity not accepted", 60, body)


def criterion_8() -> Verdict:
    def body(details):
        view = fam.FamilyView.from_power_example(2)
        trend = fam.size_ratio_trend(view, 20)
        limit = fam.limit_of_size(Fraction(4), view.delta().values.min)
        ok = limit == Fraction(5, 4)
        ok &= fam.doubling_monotone(trend)
        ok &= all(v <= limit for v in trend)
        ok &= trend[-1] >= limit * Fraction(85, 100)
        details.append(f"limit={limit} partials={[str(v) for v in trend]}")
        return ok
    return _timed(8, "size of unions approaches (rho - 1/rho)/min Delta", 60, body)


# ---------------------------------------------------------------------------
# 4: the counterexample


def criterion_4() -> Verdict:
    def body(details):
        spec = krull.admissible_instance(2, 4)
        ok = spec.m == (0, 1, 5, 19, 57) and krull.validate(spec) is None
        details.append(f"m={spec.m}")
        closed = krull.counterexample_report(spec, "closed")
        for r in closed:
            ok &= r.upper == r.expected_upper and r.hole_present
            details.append(f"k={r.k} upper={r.upper.brace()} full={r.full.brace()} "
                           f"M_upper={r.aap_bound_upper} M_full={r.aap_bound_full}")
        for k in (1, 2, 3):
            brute = krull.counterexample_unions(spec, k, "brute", restrict=False)
            same = brute == closed[k - 1].full
            ok &= same and brute.restrict(lo=k) == spec.L(k)
            details.append(f"k={k} brute force agrees: {same}")
        ok &= krull.strictly_increasing([r.aap_bound_upper for r in closed[1:]])
        for k in (2, 3, 4):
            ok &= krull.rho_of_prefix(spec, k) == 1 + spec.m[k - 1]
        return ok
    return _timed(4, "counterexample unions, holes, growing AAP bound", 300, body)


# ---------------------------------------------------------------------------
# 5: exact elasticity


def criterion_5() -> Verdict:
    def body(details):
        ok = True
        cases = [("<2,3>", monoid.numerical_monoid([2, 3])),
                 ("B(Z3)", monoid.zero_sum_presentation([3])),
                 ("realize({2,3})", krull.realize([2, 3]).presentation)]
        for name, P in cases:
            t0 = time.perf_counter()
            el = exact_elasticity(P)
            x, y = el.witness
            good = (el.value == Fraction(3, 2)
                    and P.evaluate(x) == P.evaluate(y)
                    and Fraction(sum(x), sum(y)) == el.value
                    and (x, y) in minimal_relations(P))
            dt = time.perf_counter() - t0
            ok &= good and dt < 10
            details.append(f"{name}: rho={el.value} witness={el.witness} {dt:.2f}s")
        return ok
    return _timed(5, "exact elasticity with minimal-relation witness", 30, body)


# ---------------------------------------------------------------------------
# 6: the directed-family lemmas


def random_family(rng: random.Random, max_gens: int = 4, top: int = 12, depth: int = 10) -> fam.FamilySpec:
    g = rng.randint(1, max_gens)
    gens = []
    for i in range(g):
        size = rng.randint(1, 3)
        vals = set(rng.sample(range(1, top + 1), size))
        if i == 0:
            vals.add(1)
        gens.append(LengthSet.of(vals))
    return fam.FamilySpec(tuple(gens), depth)


def family_examples(seed: int = 2024, count: int = 25) -> list[tuple[fam.FamilyView, int]]:
    rng = random.Random(seed)
    out = [(fam.FamilyView.from_spec(random_family(rng)), 10) for _ in range(count)]
    r23 = krull.realize([2, 3])
    r25 = krull.realize([2, 5])
    out += [
        (fam.FamilyView.from_monoid(monoid.numerical_monoid([2, 3])), 10),
        (fam.FamilyView.from_monoid(monoid.zero_sum_presentation([3])), 8),
        (fam.FamilyView.from_monoid(monoid.zero_sum_presentation([2, 2])), 8),
        (fam.FamilyView.from_monoid(r23.presentation, lambda x: krull.closed_length_set(r23, x)), 10),
        (fam.FamilyView.from_monoid(r25.presentation, lambda x: krull.closed_length_set(r25, x)), 8),
        (fam.FamilyView.from_power_example(2), 10),
        (counterexample_view(), 4),
    ]
    return out


def counterexample_view() -> fam.FamilyView:
    """Family view of the counterexample; Delta(H) = {1, 2} since L_2 = {2,3,5}
    has both gaps and every component has max Delta <= d = 2."""
    spec = krull.admissible_instance(2, 4)
    D = LengthSet((1, 2))
    return fam.FamilyView.from_unions(
        lambda k: krull.counterexample_unions(spec, k, restrict=False),
        fam.DeltaReport(D, True, D), horizon=4, elasticity=None, name="counterexample(d=2)")


LEMMA_CHECKS = {
    "reciprocity": fam.reciprocity_violations,
    "superadditivity": fam.superadditivity_violations,
    "monotone chain": fam.monotone_chain_violations,
    "residue class": fam.residue_violations,
    "gap bound": fam.gap_violations,
    "Fekete": fam.fekete_violations,
    "lambda bound": fam.lambda_bound_violations,
}


def family_violations(view: fam.FamilyView, K: int) -> dict[str, list]:
    out = {name: f(view, K) for name, f in LEMMA_CHECKS.items()}
    rep = view.delta()
    if rep.values:
        out["gcd law"] = [] if fam.gcd_min_delta_check(view) or not rep.exact else ["gcd != min"]
    return out


def criterion_6() -> Verdict:
    def body(details):
        total = 0
        for view, K in family_examples():
            v = family_violations(view, K)
            n = sum(len(x) for x in v.values())
            total += n
            if n:
                details.append(f"{view.name}: {v}")
        details.append(f"violations: {total}")
        return total == 0
    return _timed(6, "directed-family lemma suite", 60, body)


# ---------------------------------------------------------------------------
# 7: monoid inequalities


def monoid_examples() -> list[tuple[str, monoid.AtomPresentation]]:
    return [("<2,3>", monoid.numerical_monoid([2, 3])),
            ("B(Z3)", monoid.zero_sum_presentation([3])),
            ("B(Z2+Z2)", monoid.zero_sum_presentation([2, 2])),
            ("realize({2,3})", krull.realize([2, 3]).presentation)]


def monoid_violations(P: monoid.AtomPresentation, n: int = 4, k_intervals: int = 0) -> dict[str, list]:
    bad = {"sup L <= omega": [], "1 + max Delta <= c": [], "t <= rho_omega": [], "intervals": []}
    for x in monoid.elements_up_to(P, n):
        Z = monoid.factorizations(P, x)
        L = LengthSet.of(sum(z) for z in Z)
        if L.max > monoid.omega_element(P, x):
            bad["sup L <= omega"].append(x)
        if len(Z) >= 2 and 1 + max(delta_set(L), default=0) > monoid.catenary_degree(P, x, Z):
            bad["1 + max Delta <= c"].append(x)
    for u in range(P.size):
        t = monoid.tame_degree(P, u, budget=3)
        w = monoid.omega(P, u)
        if t.value > monoid.unions(P, w).rho:
            bad["t <= rho_omega"].append(u)
    for k in range(1, k_intervals + 1):
        if not is_ap(monoid.unions(P, k).union, 1):
            bad["intervals"].append(k)
    return bad


def criterion_7() -> Verdict:
    def body(details):
        total = 0
        for name, P in monoid_examples():
            k_int = 4 if name.startswith("B(") else 0
            v = monoid_violations(P, 4, k_int)
            n = sum(len(x) for x in v.values())
            total += n
            details.append(f"{name}: {n} violations")
        return total == 0
    return _timed(7, "monoid inequality suite", 60, body)


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
            5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8}


def run_suite(only: Optional[list[int]] = None, perturb: bool = False) -> list[Verdict]:
    """Run the chosen criteria; ``perturb`` swaps in altered atoms for criterion 1."""
    return [criterion_1(perturb) if i == 1 else CRITERIA[i]() for i in sorted(only or CRITERIA)]
