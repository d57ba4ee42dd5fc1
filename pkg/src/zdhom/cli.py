"""Command line interface.

Subcommands::

    zdhom homology SPEC [--method direct|formula|both] [--coeff Z|Q|Fp] [--reduced|--unreduced]
    zdhom cm SPEC [--coeff Q|Fp]
    zdhom surface SPEC
    zdhom corpus [--max-n N] [--only homology|cm|surface] [--jobs J]
    zdhom export SPEC --target k|k0 --out PATH

Exit codes: 0 success, 2 parse error, 3 budget exceeded, 4 cross-check disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager

from . import analysis, complexes, formulas, rings
from .homology import Coefficients, homology
from .errors import InvalidParameter, SpecSyntaxError, TooLarge
from .ringspec import build, normalize, parse_spec

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_DISAGREE = 0, 2, 3, 4


class _Timer:
    def __init__(self):
        self.phases = {}

    @contextmanager
    def phase(self, name):
        t = time.perf_counter()
        try:
            yield
        finally:
            self.phases[name] = round((time.perf_counter() - t) * 1000, 3)


def _ring_info(spec_text):
    spec = parse_spec(spec_text)
    ring = build(spec)
    factors = []
    for f in rings.decompose_local(ring):
        p = rings.is_local(f)
        factors.append({"name": f.name, "order": f.order, "u": p.unit_count, "is_field": p.is_field})
    return ring, {"spec": normalize(spec), "order": ring.order, "factors": factors}


def _ranks_json(ranks):
    return [{"dim": n, "rank": r, "torsion": []} for n, r in sorted(ranks.items()) if r]


def _result(info, method, budget):
    return {
        "ring": info,
        "method": method,
        "homology": None,
        "cross_check": None,
        "cm": None,
        "surface": None,
        "timing_ms": {},
        "budget": {"limit": budget, "exceeded": False},
    }


def run_homology(spec_text, method="both", reduced=True, coeff="Z", budget=None):
    """Returns ``(result_dict, exit_code)``."""
    budget = budget or complexes.DEFAULT_FACE_BUDGET
    coefficients = Coefficients.parse(coeff)
    timer = _Timer()
    with timer.phase("build"):
        ring, info = _ring_info(spec_text)
    res = _result(info, method, budget)
    code = EXIT_OK
    direct = formula = None
    if method in ("formula", "both"):
        with timer.phase("formula"):
            formula = formulas.ring_ranks(ring)
            prof = rings.is_local(ring)
            if not reduced and not (prof is not None and prof.is_field):
                # unreduced H_0 of a nonvoid complex gains one free generator
                formula = dict(formula)
                formula[0] = formula.get(0, 0) + 1
    if method in ("direct", "both"):
        try:
            with timer.phase("direct"):
                K = complexes.k_complex(ring, budget)
                direct = homology(K, reduced, coefficients)
        except TooLarge:
            res["budget"]["exceeded"] = True
            code = EXIT_BUDGET
    if direct is not None:
        res["homology"] = direct.to_json()
    elif formula is not None:
        res["homology"] = _ranks_json(formula)
    if method == "both" and direct is not None:
        diff = []
        for n in sorted(set(formula) | set(direct.groups)):
            if formula.get(n, 0) != direct.rank(n) or direct.torsion(n):
                diff.append({"dim": n, "formula": formula.get(n, 0), "direct": direct.rank(n),
                             "torsion": list(direct.torsion(n))})
        res["cross_check"] = {"agree": not diff, "formula": _ranks_json(formula), "diff": diff}
        if diff:
            code = EXIT_DISAGREE
    res["timing_ms"] = timer.phases
    res["status"] = "ok" if code == EXIT_OK else ("budget-exceeded" if code == EXIT_BUDGET else "failed")
    return res, code


def run_cm(spec_text, coeff="Q", budget=None):
    budget = budget or complexes.DEFAULT_FACE_BUDGET
    coefficients = Coefficients.parse(coeff)
    timer = _Timer()
    with timer.phase("build"):
        ring, info = _ring_info(spec_text)
    res = _result(info, "direct", budget)
    with timer.phase("cm"):
        c = analysis.classify_cm(ring, coefficients, budget=budget)
    res["cm"] = c.to_json()
    res["budget"]["exceeded"] = c.reisner_skipped
    res["timing_ms"] = timer.phases
    code = EXIT_DISAGREE if c.discrepancy else (EXIT_BUDGET if c.reisner_skipped and c.is_cm is None else EXIT_OK)
    res["status"] = {EXIT_OK: "ok", EXIT_DISAGREE: "failed", EXIT_BUDGET: "budget-exceeded"}[code]
    return res, code


def run_surface(spec_text, budget=None):
    budget = budget or complexes.DEFAULT_FACE_BUDGET
    timer = _Timer()
    with timer.phase("build"):
        ring, info = _ring_info(spec_text)
    res = _result(info, "formula", budget)
    with timer.phase("surface"):
        rep = analysis.surface_obstruction(ring, budget)
    rep = dict(rep)
    rep["predicted_ranks"] = _ranks_json(rep["predicted_ranks"])
    res["surface"] = rep
    res["timing_ms"] = timer.phases
    res["status"] = "ok"
    return res, EXIT_OK


def run_export(spec_text, target, path, budget=None):
    ring = build(spec_text)
    K = complexes.k0_complex(ring, budget) if target == "k0" else complexes.k_complex(ring, budget)
    complexes.export_facets(K, path)
    return K


# ---------------------------------------------------------------------------
# corpus


STATED_CM = [  # (spec, CM as stated in the literature)
    ("F2[x]/(x^3)", True),
    ("F2[x]/(x^4)", True),
    ("F2[x]/(x^5)", False),
    ("F2[x]/(x^6)", False),
    ("F2[x,y]/(x^2, y^2)", True),
]

NAMED_HOMOLOGY = [
    ("Z36", {1: 12}),
    ("Z105", {1: 100, 2: 15}),
    ("Z3 x Z3 x Z3", {1: 12, 2: 1}),
    ("Z12", {1: 2}),
    ("Z15", {1: 3}),
]


def _corpus_job(job):
    kind, spec, expected = job
    t = time.perf_counter()
    row = {"kind": kind, "spec": spec}
    try:
        if kind == "homology":
            res, code = run_homology(spec, "both")
            cc = res["cross_check"]
            ok = code == EXIT_OK and cc["agree"]
            if expected is not None:
                got = {h["dim"]: h["rank"] for h in res["homology"]}
                ok = ok and got == expected
            row["detail"] = {h["dim"]: h["rank"] for h in res["homology"]}
        elif kind == "cm":
            res, code = run_cm(spec)
            cm = res["cm"]
            if expected is None:
                ok = not cm["discrepancy"] and not cm["reisner_skipped"]
                row["detail"] = f"{cm['tag']} cases={cm['is_cm']} reisner={cm['reisner'] and cm['reisner']['is_cm']}"
            else:
                ok = cm["reisner"] is not None and cm["reisner"]["is_cm"] == expected
                row["detail"] = f"expected CM={expected} reisner={cm['reisner'] and cm['reisner']['is_cm']}"
        else:
            res, code = run_surface(spec)
            ok = not res["surface"]["possible"]
            row["detail"] = res["surface"]["reason"]
    except (TooLarge, InvalidParameter) as exc:
        ok = False
        row["detail"] = f"error: {exc}"
    row["ok"] = bool(ok)
    row["ms"] = round((time.perf_counter() - t) * 1000, 1)
    return row


def corpus_jobs(max_n=120, only=None):
    jobs = []
    if only in (None, "homology"):
        jobs += [("homology", f"Z{n}", None) for n in range(6, max_n + 1)]
        jobs += [("homology", s, exp) for s, exp in NAMED_HOMOLOGY]
    if only in (None, "cm"):
        jobs += [("cm", f"Z{n}", None) for n in range(2, max_n + 1)]
        jobs += [("cm", s, exp) for s, exp in STATED_CM]
    if only in (None, "surface"):
        jobs += [("surface", s, None) for s in ("Z3 x Z3 x Z3", "Z2 x Z3 x Z5", "Z4 x Z9", "Z210")]
    return jobs


def run_corpus(max_n=120, only=None, jobs=1):
    work = corpus_jobs(max_n, only)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_corpus_job, work))
    else:
        rows = [_corpus_job(j) for j in work]
    failed = [r for r in rows if not r["ok"]]
    summary = {"total": len(rows), "passed": len(rows) - len(failed), "failed": len(failed), "rows": rows}
    return summary, (EXIT_DISAGREE if failed else EXIT_OK)


# ---------------------------------------------------------------------------


def _text(res):
    lines = [f"ring: {res['ring']['spec']} (order {res['ring']['order']})"]
    for f in res["ring"]["factors"]:
        lines.append(f"  factor {f['name']}: order {f['order']}, u={f['u']}{', field' if f['is_field'] else ''}")
    if res["homology"] is not None:
        groups = ", ".join(f"H{h['dim']}=Z^{h['rank']}" + "".join(f"+Z/{t}" for t in h["torsion"])
                           for h in res["homology"]) or "all zero"
        lines.append(f"homology ({res['method']}): {groups}")
    if res["cross_check"] is not None:
        lines.append(f"cross-check: {'agree' if res['cross_check']['agree'] else 'DISAGREE ' + str(res['cross_check']['diff'])}")
    if res["cm"] is not None:
        cm = res["cm"]
        lines.append(f"cm: {cm['tag']} -> {cm['is_cm']} ({cm['detail']})")
        if cm["reisner"] is not None:
            r = cm["reisner"]
            lines.append(f"  reisner over {r['coefficients']}: {r['is_cm']}" + (f", witness {r['witness']}" if r["witness"] else ""))
        if cm["discrepancy"]:
            lines.append("  DISCREPANCY between case analysis and Reisner")
    if res["surface"] is not None:
        lines.append(f"surface possible: {res['surface']['possible']} ({res['surface']['reason']})")
    if res["budget"]["exceeded"]:
        lines.append("budget exceeded")
    return "\n".join(lines)


def _emit(obj, args, text_fn):
    out = json.dumps(obj, indent=2) if args.json else text_fn(obj)
    if getattr(args, "out", None) and args.command != "export":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None, help="face-count budget (default from ZDHOM_BUDGET)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="json", action="store_true", default=False)
    fmt.add_argument("--text", dest="json", action="store_false")
    ap = argparse.ArgumentParser(prog="zdhom", description="Homology of zero-divisor clique complexes of finite rings")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", parents=[common])
    p.add_argument("spec")
    p.add_argument("--method", choices=["direct", "formula", "both"], default="both")
    p.add_argument("--coeff", default="Z")
    red = p.add_mutually_exclusive_group()
    red.add_argument("--reduced", dest="reduced", action="store_true", default=True)
    red.add_argument("--unreduced", dest="reduced", action="store_false")
    p.add_argument("--out")

    p = sub.add_parser("cm", parents=[common])
    p.add_argument("spec")
    p.add_argument("--coeff", default="Q")
    p.add_argument("--out")

    p = sub.add_parser("surface", parents=[common])
    p.add_argument("spec")
    p.add_argument("--out")

    p = sub.add_parser("corpus", parents=[common])
    p.add_argument("--max-n", type=int, default=120)
    p.add_argument("--only", choices=["homology", "cm", "surface"])
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("export", parents=[common])
    p.add_argument("spec")
    p.add_argument("--target", choices=["k", "k0"], default="k")
    p.add_argument("--out", required=True)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "homology":
            res, code = run_homology(args.spec, args.method, args.reduced, args.coeff, args.budget)
            _emit(res, args, _text)
        elif args.command == "cm":
            res, code = run_cm(args.spec, args.coeff, args.budget)
            _emit(res, args, _text)
        elif args.command == "surface":
            res, code = run_surface(args.spec, args.budget)
            _emit(res, args, _text)
        elif args.command == "corpus":
            res, code = run_corpus(args.max_n, args.only, args.jobs)
            _emit(res, args, _corpus_text)
        else:
            K = run_export(args.spec, args.target, args.out, args.budget)
            print(f"wrote {len(K.facets)} facets on {K.n_vertices} vertices to {args.out}")
            code = EXIT_OK
    except SpecSyntaxError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidParameter as exc:
        print(f"invalid parameter: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except TooLarge as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    return code


def _corpus_text(summary):
    lines = [f"{'PASS' if r['ok'] else 'FAIL'}  {r['kind']:<9} {r['spec']:<22} {r['detail']}" for r in summary["rows"]]
    lines.append(f"{summary['passed']}/{summary['total']} passed, {summary['failed']} failed")
    return "\n".join(lines)


if __name__ == "__main__":
    sys.exit(main())
