"""Command-line surface.

Exit codes: 0 when every check passes, 1 when a check fails (the report
says which), 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import catalog, dsl
from .generic import build_generic, verify_fr_axioms
from .poset import find_sunflower, linked_subfamily, max_antichain
from .properties import check
from .rigidity import rigidity_report
from .sexpr import SexpError, Str, dumps, lst

PROPS = ("hp", "jep", "sap", "ap", "esap", "cu", "2types", "pins")
OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _params(args) -> dict:
    out = {}
    if getattr(args, "n", None) is not None:
        out["n"] = args.n
    if getattr(args, "q", None) is not None:
        out["q"] = args.q
    return out


def _entry(name: str, params: dict):
    try:
        return catalog.get(name, **params)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"cannot load class {name}: {exc}") from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, out: str | None) -> str:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        return out
    sys.stdout.write(text)
    return "stdout"


# -- subcommands ----------------------------------------------------------------------------

def cmd_catalog(args) -> int:
    if args.export:
        entry = _entry(args.export, _params(args))
        _emit(dsl.export_age(entry.age), args.out)
        return OK
    for name in catalog.listing():
        e = catalog.get(name)
        props = ", ".join(f"{p} {x.verdict}@{x.bound}" for p, x in e.expected.items())
        print(f"{name:16} {props}")
    return OK


def cmd_check_class(args) -> int:
    if bool(args.cls) == bool(args.file):
        raise UsageError("give exactly one of --class and --file")
    expected = {}
    if args.cls:
        entry = _entry(args.cls, _params(args))
        k, expected, pin = entry.age, entry.expected, entry.pin_sort
    else:
        doc = dsl.parse_document(_read(args.file))
        if args.age:
            if args.age not in doc.ages:
                raise UsageError(f"no age {args.age} in {args.file}")
            k = doc.ages[args.age]
        elif len(doc.ages) == 1:
            k = next(iter(doc.ages.values()))
        else:
            raise UsageError("the file defines several ages; pick one with --age")
        pin = None
    props = [p.strip() for p in args.props.split(",") if p.strip()]
    bad = [p for p in props if p not in PROPS]
    if bad:
        raise UsageError(f"unknown properties: {', '.join(bad)}")
    forms, failed = None, []
    for p in props:
        kw = {}
        if p in ("2types", "pins"):
            sort = args.sort or (expected[p].args.get("sort") if p in expected else None) or pin
            if sort:
                kw["sort"] = sort
        if args.cap is not None:
            kw["cap"] = args.cap
        bound = args.bound if args.bound is not None else (expected[p].bound if p in expected else 2)
        rep = check(k, p, bound, **kw)
        note = f"  [{rep.note}]" if rep.note else ""
        want = f"  (expected {expected[p].verdict})" if p in expected else ""
        print(rep.line() + want + note, file=sys.stderr)
        fs = dsl.report_forms(rep, k, name=p)
        forms = fs if forms is None else forms + fs[2:]
        if not rep.passed:
            failed.append(p)
    where = _emit(dumps(forms or []), args.out)
    if failed:
        print(f"failed: {', '.join(failed)}; report in {where}", file=sys.stderr)
        return FAILED
    return OK


def cmd_build_generic(args) -> int:
    entry = _entry(args.cls, _params(args))
    base, view = None, None
    if entry.name == "two-color":
        base, view = catalog.two_color_base(args.u, seed=args.seed), "w-side"
    res = build_generic(entry.age, base=base, steps=args.steps, seed=args.seed, n=args.bound)
    print(res.summary(), file=sys.stderr)
    meta = dsl.meta_form(**{"class": entry.name, "params": entry.params or None, "seed": args.seed,
                            "steps": args.steps, "bound": args.bound, "view": view,
                            "closed": res.closed})
    forms = [dsl.signature_form("sig", res.generic.sig), dsl.structure_form("G", res.generic, "sig"), meta]
    _emit(dumps(forms), args.out)
    return OK


def _load_generic(path: str):
    doc = dsl.parse_document(_read(path))
    if "G" not in doc.structures:
        raise UsageError(f"{path} defines no structure G")
    return doc.structures["G"], doc.meta


def cmd_verify_fr(args) -> int:
    g, meta = _load_generic(args.inp)
    name = args.cls or meta.get("class")
    if name is None:
        raise UsageError("the input carries no class; give --class")
    params = meta.get("params") or {}
    entry = _entry(name, {**params, **_params(args)})
    k = entry.age
    if meta.get("view") == "w-side":
        g, k = catalog.w_side(g), catalog.make_graph_class().age
    rep = verify_fr_axioms(g, k, args.bound, cap=args.cap)
    print(rep.line(), file=sys.stderr)
    fs = dsl.report_forms(rep, k, name="fr")
    fs[-1] = lst(*fs[-1].items, ["generic", Str(args.inp)])
    _emit(dumps(fs), args.out)
    return OK if rep.passed else FAILED


def cmd_sunflower(args) -> int:
    doc = dsl.parse_document(_read(args.inp))
    if not doc.families:
        raise UsageError(f"{args.inp} defines no family")
    fam = next(iter(doc.families.values()))
    cert = find_sunflower(fam.host, fam.sets, args.target)
    if cert is None:
        print(f"no term sunflower of size {args.target} in {fam.name}", file=sys.stderr)
        _emit(dumps([lst("sunflower", fam.name, ["target", args.target], ["found", False])]), args.out)
        return FAILED
    ok = cert.replay(fam.host, fam.sets)
    print(f"term sunflower of size {len(cert.indices)} with core of size {len(cert.core)}; "
          f"replay {'ok' if ok else 'FAILED'}", file=sys.stderr)
    form = lst("sunflower", fam.name, ["target", args.target], ["found", True],
               ["indices", *cert.indices], ["core", *sorted(cert.core)], ["replay", ok])
    _emit(dumps([form]), args.out)
    return OK if ok else FAILED


def cmd_poset_scan(args) -> int:
    k = _entry(args.cls, _params(args)).age if args.cls else None
    doc = dsl.parse_document(_read(args.conds), age=k)
    if not doc.conditions:
        raise UsageError(f"{args.conds} defines no conditions")
    cl = next(iter(doc.conditions.values()))
    scan = max_antichain if args.antichain else linked_subfamily
    fam = scan(cl.conditions, cl.age, cl.base, args.budget)
    kind = "antichain" if args.antichain else "linked"
    print(f"{kind} subfamily of size {len(fam.indices)} among {len(cl.conditions)} conditions",
          file=sys.stderr)
    pairs = []
    for (i, j), w in sorted(fam.witnesses.items()):
        pairs.append([i, j, Str(w) if isinstance(w, str) else len(w)])
    form = lst("poset-scan", cl.name, ["kind", kind], ["budget", args.budget if args.budget is not None else "none"],
               ["indices", *fam.indices], ["pairs", *pairs])
    _emit(dumps([form]), args.out)
    return OK


def cmd_rigidity(args) -> int:
    g, _ = _load_generic(args.inp)
    rep = rigidity_report(g, budget=args.budget, name=args.inp)
    print(rep.line(), file=sys.stderr)
    items = ["rigidity", Str(args.inp), ["status", rep.status], ["nodes", rep.nodes], ["budget", rep.budget],
             ["complete", rep.complete], ["symmetric-factor", rep.symmetric_factor]]
    if rep.witness:
        items.append(["witness", *[[x, y] for x, y in sorted(rep.witness.items()) if x != y]])
    if rep.classes:
        items.append(["classes", *[list(c) for c in rep.classes]])
    _emit(dumps([lst(*items)]), args.out)
    return OK


# -- argument parsing -------------------------------------------------------------------------

def _class_args(p, required=False):
    p.add_argument("--class", dest="cls", required=required, help="catalog class name")
    p.add_argument("--n", type=int, help="class parameter n (arity or size)")
    p.add_argument("--q", type=int, help="class parameter q (field size)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fraisse", description="Finite checks for amalgamation classes")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list catalog classes or export one as a definition file")
    p.add_argument("--list", action="store_true")
    p.add_argument("--export", metavar="NAME")
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("check-class", help="run property checkers on a class")
    _class_args(p)
    p.add_argument("--file", help="definition file with an age")
    p.add_argument("--age", help="age name inside --file")
    p.add_argument("--props", default="hp,jep,sap,esap")
    p.add_argument("--bound", type=int)
    p.add_argument("--sort", help="pin sort for 2types and pins")
    p.add_argument("--cap", type=int, help="configuration cap (sampling)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_check_class)

    p = sub.add_parser("build-generic", help="build a finite stage of the generic structure")
    _class_args(p, required=True)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int, default=2, help="rank bound of the requirements")
    p.add_argument("--u", type=int, default=5, help="U-points of the two-color base")
    p.add_argument("--out")
    p.set_defaults(func=cmd_build_generic)

    p = sub.add_parser("verify-fr", help="check the extension axioms on a built structure")
    p.add_argument("--in", dest="inp", required=True)
    _class_args(p)
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--cap", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_fr)

    p = sub.add_parser("sunflower", help="search a family for a term sunflower")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sunflower)

    p = sub.add_parser("poset-scan", help="linked subfamilies and antichains of conditions")
    _class_args(p)
    p.add_argument("--conds", required=True)
    p.add_argument("--budget", type=int)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--antichain", action="store_true")
    g.add_argument("--linked", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_poset_scan)

    p = sub.add_parser("rigidity", help="hunt for automorphisms of a built structure")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--budget", type=int, default=10 ** 6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_rigidity)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except SexpError as exc:
        for d in exc.diagnostics:
            print(d, file=sys.stderr)
        return USAGE
    except UsageError as exc:
        print(f"fraisse: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
