"""Command line front end.

Exit codes: 0 success, 1 bad input, 2 budget exhausted (partial output is
still written), 3 a paper-suite criterion failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import family as fam
from . import krull, monoid, power, relations
from .diophantine import BudgetExceeded
from .lengthsets import LengthSet, minimal_aap_bound

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_FAILED = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    spec: Optional[str]
    k_max: int
    budget: int
    fmt: str
    out: Optional[str]
    threads: int


def _jsonable(obj):
    if isinstance(obj, LengthSet):
        return obj.to_json()
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (tuple, list)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, power.FinSet):
        return list(obj.elements)
    return obj


def _cell(v):
    if isinstance(v, LengthSet):
        return v.brace()
    if v is None:
        return ""
    if isinstance(v, Fraction):
        return str(v)
    return v


def emit(cfg: RunConfig, payload: dict, rows: Optional[list[dict]] = None) -> None:
    """Write JSON (whole payload) or CSV (the row table) to --out or stdout."""
    if cfg.fmt == "csv" and rows is not None:
        buf = io.StringIO()
        fields = list(rows[0].keys()) if rows else []
        w = csv.DictWriter(buf, fieldnames=fields, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\r\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _cell(v) for k, v in r.items()})
        text = buf.getvalue()
    else:
        text = json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# input


def parse_length_list(text: str) -> LengthSet:
    try:
        return LengthSet.of(int(t) for t in text.replace("{", "").replace("}", "").split(",") if t.strip())
    except ValueError as exc:
        raise InputError(f"cannot read a list of integers from {text!r}") from exc


def load_spec(path: str) -> dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        if path.lstrip().startswith("{"):
            return json.loads(path)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read spec {path!r}: {exc}") from exc


@dataclass
class Source:
    name: str
    kind: str
    view: fam.FamilyView
    presentation: Optional[monoid.AtomPresentation] = None
    power_monoid: Optional[power.PowerSubmonoid] = None
    realized: Optional[krull.RealizedKrull] = None


def presentation_from_spec(data: dict) -> monoid.AtomPresentation:
    kind = data.get("kind")
    try:
        if kind == "lattice":
            atoms = [tuple(a) for a in data["atoms"]]
            if "dim" in data and any(len(a) != data["dim"] for a in atoms):
                raise InputError("atom length differs from dim")
            g = data.get("grading")
            return monoid.AtomPresentation(atoms, grading=tuple(g) if g else None, name=data.get("name", ""))
        if kind == "numerical":
            return monoid.numerical_monoid(data["generators"])
        if kind == "zerosum":
            return monoid.zero_sum_presentation(data["group"], data.get("subset"))
    except KeyError as exc:
        raise InputError(f"spec is missing the field {exc}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    raise InputError(f"unknown monoid kind {kind!r}")


def load_source(args, cfg: RunConfig) -> Source:
    if getattr(args, "realize", None):
        R = krull.realize(parse_length_list(args.realize))
        view = fam.FamilyView.from_monoid(R.presentation, lambda x: krull.closed_length_set(R, x),
                                          budget=cfg.budget)
        view.unions_fn = lambda k: krull.closed_form_unions(R, k)
        return Source(f"realize{R.L.brace()}", "realize", view, R.presentation, realized=R)
    if getattr(args, "counterexample", False):
        spec = krull.admissible_instance(args.d, max(cfg.k_max, 2))
        # every instance uses step-2 blocks, so L_2 = {2,3,5} and Delta = {1, 2}
        D = LengthSet((1, 2))
        view = fam.FamilyView.from_unions(
            lambda k: krull.counterexample_unions(spec, k, restrict=False),
            fam.DeltaReport(D, True, D), horizon=spec.K, name=f"counterexample(d={args.d})")
        return Source(view.name, "counterexample", view)
    if not cfg.spec:
        raise InputError("give --spec, --realize or --counterexample")
    data = load_spec(cfg.spec)
    if not isinstance(data, dict):
        raise InputError("spec must be a JSON object")
    kind = data.get("kind", "family" if "generators" in data and "depth" in data else None)
    if kind == "family":
        try:
            fs = fam.FamilySpec.from_json(data)
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"bad family spec: {exc}") from exc
        view = fam.FamilyView.from_spec(fs)
        return Source(view.name, "family", view)
    if kind == "power":
        try:
            M = power.PowerSubmonoid([power.FinSet.of(g) for g in data["generators"]],
                                     int(data.get("bound", 40)))
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"bad power spec: {exc}") from exc
        atoms = power.atoms_of(M)
        view = fam.FamilyView.from_unions(
            lambda k: power.power_unions(atoms, k),
            _power_delta(M, atoms), name="power")
        return Source("power", "power", view, power_monoid=M)
    P = presentation_from_spec(data)
    view = fam.FamilyView.from_monoid(P, budget=cfg.budget)
    view.unions_fn = lambda k: monoid.unions(P, k, cfg.budget, threads=cfg.threads).union
    return Source(P.name or kind, kind, view, P)


def _power_delta(M: power.PowerSubmonoid, atoms) -> fam.DeltaReport:
    """Distances seen on the store; not certified beyond it."""
    from .lengthsets import delta_set

    found = set()
    for X in M.elements():
        if X != power.IDENTITY:
            found |= set(delta_set(power.length_set_pm(atoms, X)))
    D = LengthSet.of(found)
    return fam.DeltaReport(D, False, D)


# ---------------------------------------------------------------------------
# commands


def cmd_invariants(args, cfg: RunConfig) -> int:
    src = load_source(args, cfg)
    out = {"name": src.name, "kind": src.kind}
    code = EXIT_OK
    if src.presentation is not None:
        P = src.presentation
        ok, wit = monoid.verify_atoms(P)
        out["atoms_verified"] = ok
        if not ok:
            out["atom_witness"] = {"atom": wit[0], "factorization": list(wit[1])}
        el = relations.exact_elasticity(P)
        out["elasticity"] = el.value
        out["elasticity_witness"] = [list(w) for w in el.witness] if el.witness else None
        db = relations.delta_bound(P)
        out["delta_bound"] = db.value
        rep = src.view.delta()
        out["delta"] = rep.values
        out["delta_exact"] = rep.exact
        out["omega"] = [monoid.omega(P, u) for u in range(P.size)]
        out["increment_bound"] = relations.increment_bound(P)
        try:
            cs = [monoid.catenary_degree(P, x) for x in monoid.elements_up_to(P, 3, cfg.budget)]
            out["catenary_sampled_max"] = max(cs)
            tames = [monoid.tame_degree(P, u, budget=3, max_multisets=cfg.budget) for u in range(P.size)]
            rhos = [0] + [src.view.rho(k) for k in range(1, cfg.k_max + 1)]
            out["rho_k"] = rhos[1:]
            out["max_rho_increment"] = max(b - a for a, b in zip(rhos[1:], rhos[2:])) if cfg.k_max > 1 else None
            out["omega_increment_violations"] = relations.omega_increment_violations(rhos, max(out["omega"]))
            out["tame"] = [{"atom": t.atom, "value": t.value, "closed": t.closed,
                            "explored": t.explored_lower_bound} for t in tames]
        except BudgetExceeded as exc:
            out["partial"] = str(exc)
            code = EXIT_BUDGET
    elif src.power_monoid is not None:
        M = src.power_monoid
        atoms = power.atoms_of(M)
        out["atoms"] = atoms
        oms = [power.omega_pm(M, atoms, u) for u in range(len(atoms))]
        out["omega"] = [o.value for o in oms]
        out["omega_certified"] = [o.certified for o in oms]
        out["store_bound"] = M.bound
        out["delta"] = src.view.delta().values
        els = power.store_elasticities(M, atoms)
        out["max_store_elasticity"] = max(els.values()) if els else Fraction(1)
    else:
        out["delta"] = src.view.delta().values
        out["delta_exact"] = src.view.delta().exact
        out["fekete_lower"] = fam.fekete_elasticity(src.view, cfg.k_max).lower
    emit(cfg, out)
    return code


def _union_rows(view: fam.FamilyView, K: int) -> tuple[list[dict], Optional[str]]:
    rows, partial = [], None
    for k in range(1, K + 1):
        try:
            U = view.union(k)
        except (BudgetExceeded, fam.HorizonExceeded) as exc:
            partial = str(exc)
            break
        rows.append({"k": k, "lambda": U.min, "rho": U.max, "size": len(U), "M": None, "union": U})
    try:
        d = view.delta().min_delta
    except BudgetExceeded as exc:
        return rows, partial or str(exc)
    for r in rows:
        w = minimal_aap_bound(r["union"], d) if d else None
        r["M"] = (w.bound if w else None) if d else 0
    return rows, partial


def cmd_unions(args, cfg: RunConfig) -> int:
    src = load_source(args, cfg)
    rows, partial = _union_rows(src.view, cfg.k_max)
    payload = {"name": src.name, "rows": rows, "partial": partial}
    emit(cfg, payload, rows)
    return EXIT_BUDGET if partial else EXIT_OK


def cmd_structure(args, cfg: RunConfig) -> int:
    src = load_source(args, cfg)
    try:
        v = fam.structure_check(src.view, cfg.k_max)
    except (BudgetExceeded, fam.HorizonExceeded) as exc:
        emit(cfg, {"name": src.name, "partial": str(exc)})
        return EXIT_BUDGET
    rows = [{"k": k, "M": v.bounds[k - 1] if v.bounds else None,
             "M_upper": v.bounds_upper[k - 1] if v.bounds_upper else None}
            for k in range(1, cfg.k_max + 1)] if not v.trivial else []
    payload = {"name": src.name, **v.to_json()}
    if v.trivial:
        payload["verdict"] = "trivially AAP, Delta is empty"
    emit(cfg, payload, rows)
    return EXIT_OK


def cmd_realize(args, cfg: RunConfig) -> int:
    R = krull.realize(parse_length_list(args.L))
    ok, wit = monoid.verify_atoms(R.presentation)
    rep = krull.verify_realization(R, ell_max=args.ell, budget=cfg.budget)
    payload = {**R.to_json(), "atoms_verified": ok,
               "union_at_min": rep.union_at_min, "max_delta": rep.max_delta,
               "rho": rep.rho_table, "rho_expected": rep.rho_expected, "ok": rep.ok}
    rows = [{"k": k, "rho": rep.rho_table[k], "expected": rep.rho_expected[k]} for k in sorted(rep.rho_table)]
    emit(cfg, payload, rows)
    return EXIT_OK


def cmd_counterexample(args, cfg: RunConfig) -> int:
    K = max(cfg.k_max, 2)
    spec = krull.admissible_instance(args.d, K)
    reports = krull.counterexample_report(spec, "closed")
    rows = [{"k": r.k, "upper": r.upper, "full": r.full, "expected_upper": r.expected_upper,
             "hole": r.hole_present, "M_upper": r.aap_bound_upper, "M_full": r.aap_bound_full}
            for r in reports]
    payload = {**spec.to_json(), "rows": rows,
               "aap_bound_strictly_increasing": krull.strictly_increasing(
                   [r.aap_bound_upper for r in reports[1:]])}
    emit(cfg, payload, rows)
    return EXIT_OK


def cmd_power_example(args, cfg: RunConfig) -> int:
    n = args.n
    M = power.example_monoid(n, args.store_bound)
    atoms = power.atoms_of(M)
    rows = []
    for k in range(1, cfg.k_max + 1):
        U = power.example_unions(n, k)
        rows.append({"k": k, "lambda": U.min, "rho": U.max, "size": len(U),
                     "formula": power.example_rho_k(n, k) if k >= 2 * n else None, "union": U})
    oms = [power.omega_pm(M, atoms, u) for u in range(len(atoms))]
    els = power.store_elasticities(M, atoms)
    payload = {"n": n, "atoms": atoms, "omega": [o.value for o in oms],
               "omega_certified": [o.certified for o in oms],
               "max_store_elasticity": max(els.values()), "store_bound": M.bound, "rows": rows}
    emit(cfg, payload, rows)
    return EXIT_OK


def cmd_paper_suite(args, cfg: RunConfig) -> int:
    from .suite import run_suite

    only = [int(t) for t in args.only.split(",")] if args.only else None
    verdicts = run_suite(only, perturb=args.perturb)
    for v in verdicts:
        print(v.line(), file=sys.stderr)
    rows = [{"criterion": v.number, "name": v.name, "passed": v.passed, "partial": v.partial}
            for v in verdicts]
    payload = {"verdicts": [{k: x for k, x in v.to_json().items() if args.timings or k != "seconds"}
                            for v in verdicts],
               "all_passed": all(v.passed for v in verdicts)}
    emit(cfg, payload, rows)
    if payload["all_passed"]:
        return EXIT_OK
    return EXIT_BUDGET if all(v.passed or v.partial for v in verdicts) else EXIT_FAILED


COMMANDS = {
    "invariants": cmd_invariants,
    "unions": cmd_unions,
    "structure-check": cmd_structure,
    "realize": cmd_realize,
    "counterexample": cmd_counterexample,
    "power-example": cmd_power_example,
    "paper-suite": cmd_paper_suite,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="JSON spec file, inline JSON, or - for stdin")
    common.add_argument("--k-max", type=int, default=6, help="horizon K")
    common.add_argument("--budget", type=int,
                        default=int(os.environ.get("FACTORLENS_BUDGET", monoid.DEFAULT_BUDGET)),
                        help="cap on enumerated multisets")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    sources = argparse.ArgumentParser(add_help=False)
    sources.add_argument("--realize", metavar="L", help="use the realizer for the comma list L")
    sources.add_argument("--counterexample", action="store_true", help="use the counterexample coproduct")
    sources.add_argument("--d", type=int, default=2, help="difference bound d for --counterexample")

    p = argparse.ArgumentParser(prog="factorlens", description="Sets of lengths and their unions.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("invariants", parents=[common, sources])
    sub.add_parser("unions", parents=[common, sources])
    sub.add_parser("structure-check", parents=[common, sources])
    r = sub.add_parser("realize", parents=[common])
    r.add_argument("L", help="comma list, e.g. 2,3,5")
    r.add_argument("--ell", type=int, default=3)
    c = sub.add_parser("counterexample", parents=[common])
    c.add_argument("--d", type=int, default=2)
    pe = sub.add_parser("power-example", parents=[common])
    pe.add_argument("--n", type=int, default=2)
    pe.add_argument("--store-bound", type=int, default=40)
    ps = sub.add_parser("paper-suite", parents=[common])
    ps.add_argument("--only", help="comma list of criterion numbers")
    ps.add_argument("--perturb", action="store_true", help="negative control: alter one realizer atom")
    ps.add_argument("--timings", action="store_true", help="include wall-clock seconds")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.command, args.spec, args.k_max, args.budget, args.format, args.out, args.threads)
    if cfg.k_max < 1 or cfg.budget < 1:
        print("error: --k-max and --budget must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args, cfg)
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        emit(cfg, {"partial": str(exc), "estimate": exc.estimate})
        return EXIT_BUDGET
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
