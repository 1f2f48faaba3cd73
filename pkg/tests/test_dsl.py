import pathlib

import pytest
from hypothesis import given

from fraisse import catalog
from fraisse.dsl import (DslError, export_age, export_report, export_structure, parse_age, parse_document,
                         parse_report, parse_signature, parse_structure)
from fraisse.properties import check, replay
from fraisse.sexpr import SexpError

from strategies import structures

GOLDEN = pathlib.Path(__file__).parent / "golden"
CASES = sorted(p.stem for p in GOLDEN.glob("*.sexp"))
DEMO_DATA = pathlib.Path(__file__).parent.parent / "demos" / "data"


def diagnostics_of(text: str) -> list[str]:
    try:
        parse_document(text)
    except SexpError as exc:
        return [f"{d.code} {d.span.line}:{d.span.col}" for d in exc.diagnostics]
    return []


@pytest.mark.parametrize("case", CASES)
def test_golden_diagnostics(case):
    want = (GOLDEN / f"{case}.expected").read_text().split("\n")
    got = diagnostics_of((GOLDEN / f"{case}.sexp").read_text())
    assert got == [w for w in want if w]


def test_every_code_has_a_golden_case():
    codes = {(GOLDEN / f"{c}.expected").read_text().split()[0] for c in CASES}
    assert codes == {f"E00{i}" for i in range(1, 10)}


def test_dsl_errors_are_sexp_errors():
    with pytest.raises(DslError):
        parse_document("(signature g (sorts V) (rel E (V W)))")


def test_empty_document():
    doc = parse_document("; nothing here\n")
    assert not doc.signatures and not doc.structures


@given(structures(max_size=5))
def test_structures_round_trip(s):
    assert parse_structure(export_structure(s)) == s


def test_signature_parse():
    sig = parse_signature("(signature s (sorts U W) (rel R (U)) (fun f ((U U) -> W)) (const c U))")
    assert sig.relations == {"R": ("U",)}
    assert sig.functions == {"f": (("U", "U"), "W"), "c": ((), "U")}


def test_rel_tuples_in_either_form():
    a = parse_structure("(signature g (sorts V) (rel E (V V)))"
                        "(structure s (over g) (carrier V (a b)) (rel E ((a b) (b a))))")
    b = parse_structure("(signature g (sorts V) (rel E (V V)))"
                        "(structure s (over g) (carrier V (a b)) (rel E (a b) (b a)))")
    assert a == b


@pytest.mark.parametrize("name", catalog.listing())
def test_catalog_ages_round_trip(name):
    k = catalog.get(name).age
    k2 = parse_age(export_age(k))
    assert [str(c) for c in k2.constraints] == [str(c) for c in k.constraints]
    assert k2.sig == k.sig and k2.subsig == k.subsig
    assert (k2.decoration_cap, k2.seed) == (k.decoration_cap, k.seed)
    assert getattr(k2, "config_cap", None) == getattr(k, "config_cap", None)
    assert type(k2.oracle).__name__ == type(k.oracle).__name__


@pytest.mark.parametrize("name,prop", [("graphs", "sap"), ("min-collapse", "sap"), ("colored-tree", "jep"),
                                       ("tree", "esap"), ("forced-edge", "esap")])
def test_exported_ages_reproduce_verdicts(name, prop):
    e = catalog.get(name)
    x = e.expected[prop]
    k2 = parse_age(export_age(e.age))
    a = check(e.age, prop, x.bound, **x.args)
    b = check(k2, prop, x.bound, **x.args)
    assert a.verdict == x.verdict
    assert (a.verdict, a.checked, a.exhaustive) == (b.verdict, b.checked, b.exhaustive)


def test_predicate_ages_are_not_exported():
    # an arbitrary Python predicate has no clause form
    with pytest.raises(ValueError):
        export_age(catalog.get("clique-or-empty").age)


def test_reports_round_trip_and_replay():
    e = catalog.get("min-collapse")
    rep = check(e.age, "sap", 1)
    assert rep.verdict == "fail"
    back = parse_report(export_report(rep, e.age))
    assert (back.property, back.verdict, back.bound, back.checked) == (rep.property, rep.verdict, rep.bound,
                                                                      rep.checked)
    assert replay(back, e.age)


def test_two_type_report_round_trip():
    e = catalog.get("seq-names", n=2)
    rep = check(e.age, "2types", 3, sort="W")
    back = parse_report(export_report(rep, e.age))
    assert back.counterexample["x0"] == rep.counterexample["x0"]
    assert catalog.seq_witness_shape(back.counterexample)
    assert replay(back, e.age)


def test_demo_data_files_parse():
    doc = parse_document((DEMO_DATA / "gf2_lines.sexp").read_text())
    fam = doc.families["lines"]
    assert len(fam.sets) == 7 and len(fam.host) == 8
    doc = parse_document((DEMO_DATA / "two_color_conditions.sexp").read_text())
    (cl,) = doc.conditions.values()
    assert len(cl.conditions) == 4
