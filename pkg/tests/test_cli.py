import pathlib

import pytest

from fraisse import catalog, dsl
from fraisse.cli import main
from fraisse.properties import check

DATA = pathlib.Path(__file__).parent.parent / "demos" / "data"


def test_unknown_subcommand_is_a_usage_error(capsys):
    assert main(["frobnicate"]) == 2


def test_missing_arguments_are_usage_errors():
    assert main(["sunflower"]) == 2
    assert main(["check-class"]) == 2
    assert main(["check-class", "--class", "graphs", "--props", "nonsense"]) == 2
    assert main(["check-class", "--class", "no-such-class"]) == 2


def test_parse_errors_exit_two_with_diagnostics(tmp_path, capsys):
    bad = tmp_path / "bad.sexp"
    bad.write_text("(structure (carrier U (a)) (fun p ((a) b)))\n")
    assert main(["check-class", "--file", str(bad)]) == 2
    assert "E005" in capsys.readouterr().err


def test_catalog_list(capsys):
    assert main(["catalog", "--list"]) == 0
    out = capsys.readouterr().out
    assert all(name in out for name in catalog.listing())


def test_catalog_export_reparses(tmp_path):
    out = tmp_path / "k.sexp"
    assert main(["catalog", "--export", "seq-names", "--n", "3", "--out", str(out)]) == 0
    k = dsl.parse_age(out.read_text())
    assert k.sig == catalog.get("seq-names", n=3).age.sig


def test_seq_names_two_types_exit_one_with_witness(tmp_path):
    out = tmp_path / "r.sexp"
    code = main(["check-class", "--class", "seq-names", "--n", "2", "--props", "2types", "--bound", "4",
                 "--out", str(out)])
    assert code == 1
    rep = dsl.parse_report(out.read_text())
    assert rep.verdict == "fail" and rep.bound == 4
    assert catalog.seq_witness_shape(rep.counterexample)


def test_check_class_pass_exits_zero(tmp_path):
    out = tmp_path / "r.sexp"
    assert main(["check-class", "--class", "graphs", "--props", "hp,sap", "--bound", "2", "--out", str(out)]) == 0
    doc = dsl.parse_document(out.read_text())
    assert sorted(doc.reports) == ["hp", "sap"]
    assert all(r.seed == 0 and r.bound == 2 for r in doc.reports.values())


def test_two_color_definition_file_matches_the_catalog(tmp_path):
    doc = dsl.parse_document((DATA / "two_color.sexp").read_text())
    k = doc.ages["two-color"]
    ref = catalog.get("two-color")
    for p, x in ref.expected.items():
        bound = min(x.bound, 3)
        a = check(ref.age, p, bound, **x.args)
        b = check(k, p, bound, **x.args)
        assert (a.verdict, a.checked) == (b.verdict, b.checked) and a.verdict == x.verdict


def test_build_then_verify_graphs(tmp_path):
    g = tmp_path / "g.sexp"
    assert main(["build-generic", "--class", "graphs", "--steps", "400", "--seed", "7", "--out", str(g)]) == 0
    doc = dsl.parse_document(g.read_text())
    assert doc.meta["seed"] == 7 and doc.meta["steps"] == 400
    r = tmp_path / "fr.sexp"
    assert main(["verify-fr", "--in", str(g), "--bound", "2", "--out", str(r)]) == 0
    assert dsl.parse_report(r.read_text()).verdict == "pass"
    assert main(["rigidity", "--in", str(g), "--budget", "1000"]) == 0


def test_verify_fr_fails_on_a_small_graph(tmp_path):
    g = tmp_path / "g.sexp"
    main(["build-generic", "--class", "graphs", "--steps", "2", "--seed", "1", "--out", str(g)])
    assert main(["verify-fr", "--in", str(g), "--bound", "2"]) == 1


def test_sunflower_on_gf2_lines(tmp_path, capsys):
    out = tmp_path / "s.sexp"
    assert main(["sunflower", "--in", str(DATA / "gf2_lines.sexp"), "--target", "7", "--out", str(out)]) == 0
    assert main(["sunflower", "--in", str(DATA / "gf2_lines.sexp"), "--target", "8"]) == 1


@pytest.mark.parametrize("mode,indices", [("--linked", "(indices 1 2 3)"), ("--antichain", "(indices 0 1)")])
def test_poset_scan(tmp_path, mode, indices):
    # conditions 0 and 1 disagree on one edge; every other pair is compatible
    out = tmp_path / "p.sexp"
    assert main(["poset-scan", "--conds", str(DATA / "two_color_conditions.sexp"), mode, "--out", str(out)]) == 0
    assert indices in out.read_text()
