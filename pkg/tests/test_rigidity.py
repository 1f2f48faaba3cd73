import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraisse import catalog
from fraisse.embeddings import is_automorphism
from fraisse.properties import replay
from fraisse.rigidity import (SplitFamily, brute_distinct_2types, brute_pins, check_distinct_2types, check_pins,
                              check_splitting, class_permutation_automorphism, equiv_classes, rigidity_report,
                              two_type_configs, _pins_instance, _two_type_instance)
from fraisse.signature import Signature
from fraisse.structure import make_structure

from oracles import SIGNATURES, brute_automorphisms, preserves, random_graph, random_structure
from strategies import structures

RELATIONAL = tuple(k for k, v in SIGNATURES.items() if not v.functions)


def swap_is_automorphism(s, a, b):
    m = {x: x for x in s.elements}
    m[a], m[b] = b, a
    return preserves(s, s, m)


@given(structures(max_size=6, sigs=RELATIONAL))
def test_equiv_classes_match_transpositions(s):
    classes = equiv_classes(s)
    assert sorted(x for c in classes for x in c) == sorted(s.elements)
    where = {x: i for i, c in enumerate(classes) for x in c}
    for a in s.elements:
        for b in s.elements:
            if a < b:
                same = where[a] == where[b]
                assert same == (s.sort_of[a] == s.sort_of[b] and swap_is_automorphism(s, a, b))


@given(structures(max_size=6, sigs=RELATIONAL), st.randoms(use_true_random=False))
def test_class_permutations_are_automorphisms(s, rng):
    for cls in equiv_classes(s):
        img = list(cls)
        rng.shuffle(img)
        e = class_permutation_automorphism(s, cls, dict(zip(cls, img)))
        assert is_automorphism(e)


def test_class_permutation_rejects_non_permutations():
    s = random_graph(random.Random(0), 3)
    with pytest.raises(ValueError):
        class_permutation_automorphism(s, ["v0"], {"v0": "v1"})


def test_equiv_classes_need_relational_signature():
    s = random_structure(SIGNATURES["unary-fun"], random.Random(0), 3)
    with pytest.raises(ValueError):
        equiv_classes(s)
    assert sorted(x for c in equiv_classes(s, reduce=True) for x in c) == sorted(s.elements)


@given(st.integers(0, 10 ** 6), st.integers(1, 6))
def test_rigidity_report_matches_brute_force(seed, n):
    g = random_graph(random.Random(seed), n)
    rep = rigidity_report(g, budget=10 ** 5)
    nontrivial = len(brute_automorphisms(g)) > 1
    assert (rep.status == "witness") == nontrivial
    if rep.status == "witness":
        assert any(x != y for x, y in rep.witness.items())
        assert preserves(g, g, rep.witness)
    else:
        assert rep.complete


@settings(max_examples=30)
@given(structures(max_size=5))
def test_rigidity_report_with_functions(s):
    rep = rigidity_report(s, budget=10 ** 5)
    nontrivial = len(brute_automorphisms(s)) > 1
    assert (rep.status == "witness") == nontrivial
    if rep.witness:
        assert preserves(s, s, rep.witness)


def test_rigidity_report_budget_and_line():
    g = random_graph(random.Random(5), 7)
    rep = rigidity_report(g, budget=1)
    assert rep.status in ("witness", "budget-exhausted", "none-found")
    assert rep.line().startswith("G: ")


@given(structures(max_size=5))
def test_pins_instance_matches_pairwise_audit(s):
    for srt in s.sig.sorts:
        assert _pins_instance(None, {"a": s, "sort": srt}) == brute_pins(s, srt)


def test_two_sets_pins_fail_with_a_witness():
    e = catalog.get("two-sets")
    rep = check_pins(e.age, 2, sort="P")
    assert rep.verdict == "fail"
    w = rep.counterexample["witness"]
    assert any(x != y for x, y in w.items())
    assert all(w[x] == x for x in rep.counterexample["a"].carrier["P"])
    assert replay(rep, e.age)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_seq_names_pins_pass(n):
    e = catalog.get("seq-names", n=n)
    rep = check_pins(e.age, 2, sort="W")
    assert rep.verdict == "pass"


def test_seq_names_two_types_fail_with_the_named_shape():
    e = catalog.get("seq-names", n=2)
    rep = check_distinct_2types(e.age, 3, sort="W")
    assert rep.verdict == "fail"
    cfg = rep.counterexample
    assert catalog.seq_witness_shape(cfg)
    assert not brute_distinct_2types(e.age, cfg)
    assert replay(rep, e.age)


def test_two_type_checker_agrees_with_brute_force_on_graphs_and_two_sets():
    for name, srt in (("graphs", "V"), ("two-sets", "P"), ("small-graphs", "V")):
        k = catalog.get(name).age
        for cfg in two_type_configs(k, srt, 2):
            fast = _two_type_instance(k, dict(cfg))
            assert fast == brute_distinct_2types(k, dict(cfg)), name


def test_splitting_passes_for_seq_names_and_orientation():
    base, fam = catalog.seq_split_setup()
    assert check_splitting(catalog.get("seq-names", n=2).age, fam, base, 2, pin="U").passed
    base, fam = catalog.orientation_split_setup()
    rep = check_splitting(catalog.get("orientation").age, fam, base, 1)
    assert rep.passed and rep.exhaustive


def test_splitting_with_an_empty_family_fails():
    base, fam = catalog.orientation_split_setup()
    rep = check_splitting(catalog.get("orientation").age, SplitFamily(frozenset(), "V"), base, 1)
    assert rep.verdict == "fail" and rep.note == "empty parameter family"


def test_split_family_sort_is_validated():
    base, fam = catalog.seq_split_setup()
    with pytest.raises(ValueError):
        SplitFamily(frozenset(base.carrier["U"]), "W").validate(base)


def test_class_permutation_on_an_empty_graph_gives_the_symmetric_factor():
    sig = Signature.one_sorted({"E": 2})
    s = make_structure(sig, {"V": ["a", "b", "c"]})
    rep = rigidity_report(s)
    assert rep.status == "witness" and rep.symmetric_factor == 6
