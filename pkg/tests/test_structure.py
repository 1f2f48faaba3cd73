import pytest
from hypothesis import given

from fraisse.ages import closed_subsets
from fraisse.signature import Signature, SignatureError
from fraisse.structure import (FinStructure, StructureError, fresh_ids, generated_sub, is_closed,
                               is_substructure, make_structure, reduct, rename, restrict, tdcl,
                               union, validate)

from oracles import SIGNATURES, closed_sets, naive_tdcl
from strategies import structure_and_subset, structures

UW = SIGNATURES["two-sorted"]


def chain():
    """p -> a, h(a) = n, with n named back to a."""
    return make_structure(UW, {"U": ["a", "b"], "W": ["n", "m"]},
                          {"p": {("n",): "a", ("m",): "b"}, "h": {("a",): "n", ("b",): "n"}},
                          {"R": {("a", "b")}})


def test_signature_rejects_undeclared_sort():
    with pytest.raises(SignatureError):
        Signature(("V",), {"E": ("V", "W")})


def test_signature_rejects_name_clash():
    with pytest.raises(SignatureError):
        Signature(("V",), {"V": ("V",)})


def test_one_sorted_builds_constants():
    sig = Signature.one_sorted({"E": 2}, {"c": 0, "f": 1})
    assert sig.constants == ["c"]
    assert sig.functions["f"] == (("V",), "V")


def test_tdcl_follows_both_sorts():
    s = chain()
    assert tdcl(s, {"m"}) == {"m", "b", "n", "a"}
    assert tdcl(s, {"a"}) == {"a", "n"}
    assert tdcl(s, ()) == set()


def test_tdcl_rejects_foreign_seed():
    with pytest.raises(StructureError):
        tdcl(chain(), {"zz"})


def test_validate_reports_partial_function():
    s = FinStructure(UW, {"U": ["a"], "W": ["n", "m"]}, {"p": {("n",): "a"}, "h": {("a",): "n"}}, {})
    assert any("non-total" in p for p in validate(s))
    with pytest.raises(StructureError):
        make_structure(UW, {"U": ["a"], "W": ["n"]}, {"p": {}, "h": {}})


def test_validate_reports_escaping_value():
    s = FinStructure(UW, {"U": ["a"], "W": ["n"]}, {"p": {("n",): "n"}, "h": {("a",): "n"}}, {})
    assert any("escaping" in p for p in validate(s))


def test_restrict_and_substructure():
    s = chain()
    sub = restrict(s, {"a", "n"})
    assert is_substructure(sub, s)
    assert len(sub) == 2
    assert sub.rels["R"] == frozenset()


def test_non_closed_set_is_not_a_substructure():
    s = chain()
    assert not is_substructure(restrict(s, {"m"}), s)


def test_reduct_drops_relations():
    s = chain()
    sub = UW.restrict({"p", "h"})
    r = reduct(s, sub)
    assert r.sig == sub and r.elements == s.elements


def test_union_rejects_disagreeing_tables():
    sig = Signature.one_sorted({}, {"f": 1})
    a = make_structure(sig, {"V": ["x"]}, {"f": {("x",): "x"}})
    b = FinStructure(sig, {"V": ["x", "y"]}, {"f": {("x",): "y", ("y",): "y"}}, {})
    with pytest.raises(StructureError):
        union([a, b])


def test_fresh_ids_avoid_given_names():
    assert fresh_ids("g", 3, {"g0", "g2"}) == ["g1", "g3", "g4"]
    assert fresh_ids("q", 1, set()) == ["q"]


@given(structure_and_subset(max_size=6))
def test_tdcl_matches_term_enumeration(pair):
    s, seed = pair
    assert tdcl(s, seed) == naive_tdcl(s, seed)


@given(structure_and_subset(max_size=6))
def test_tdcl_is_a_closure_operator(pair):
    s, seed = pair
    c = tdcl(s, seed)
    assert seed <= c
    assert tdcl(s, c) == c
    assert is_closed(s, c)
    assert is_substructure(generated_sub(s, seed), s)


@given(structures(max_size=5))
def test_closed_subsets_are_all_closed_sets(s):
    got = sorted(map(frozenset, closed_subsets(s)), key=lambda c: (len(c), sorted(c)))
    want = sorted(closed_sets(s), key=lambda c: (len(c), sorted(c)))
    assert got == want


@given(structures(max_size=6))
def test_rename_is_invertible(s):
    mp = {x: "r" + x for x in s.elements}
    back = {y: x for x, y in mp.items()}
    assert rename(rename(s, mp), back) == s


@given(structure_and_subset(max_size=6))
def test_union_of_a_chain_is_its_top(pair):
    s, seed = pair
    a = generated_sub(s, seed)
    b = generated_sub(s, seed | set(sorted(s.elements)[:1]))
    assert union([a, b]) == b
    assert is_substructure(union([a, b]), s)
