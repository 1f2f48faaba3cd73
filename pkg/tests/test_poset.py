import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraisse import catalog
from fraisse.ages import AgeSpec
from fraisse.catalog import VectorSpaceOracle
from fraisse.poset import (CompatGraph, compatible, find_sunflower, is_common_extension, linked_subfamily,
                           max_antichain, max_clique)
from fraisse.signature import Signature
from fraisse.structure import is_substructure, make_structure, restrict, tdcl

from oracles import SIGNATURES, random_structure
from test_amalgamation import POOL, SIG, SUB, all_structures


def brute_max_clique(g: nx.Graph) -> int:
    nodes = list(g.nodes)
    for r in range(len(nodes), 0, -1):
        for c in itertools.combinations(nodes, r):
            if all(g.has_edge(a, b) for a, b in itertools.combinations(c, 2)):
                return r
    return 0


def brute_sunflower(host, family) -> int:
    """Largest subfamily whose closures pairwise meet in one closed core."""
    sets = [frozenset(tdcl(host, s)) for s in family]
    best = 1 if sets else 0
    for r in range(2, len(sets) + 1):
        for idx in itertools.combinations(range(len(sets)), r):
            cores = {sets[i] & sets[j] for i, j in itertools.combinations(idx, 2)}
            if len(cores) == 1:
                (core,) = cores
                if tdcl(host, core) == set(core):
                    best = max(best, r)
    return best


@given(st.integers(0, 10 ** 6), st.integers(1, 10))
def test_max_clique_matches_brute_force(seed, n):
    g = nx.gnp_random_graph(n, 0.5, seed=seed)
    c = max_clique(g)
    assert all(g.has_edge(a, b) for a, b in itertools.combinations(c, 2))
    assert len(c) == brute_max_clique(g)


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6), st.sampled_from(["rel", "unary-fun", "two-funs"]))
def test_sunflower_search_matches_brute_force(seed, sig_name):
    rng = random.Random(seed)
    host = random_structure(SIGNATURES[sig_name], rng, rng.randint(2, 5))
    xs = sorted(host.elements)
    family = [set(rng.sample(xs, rng.randint(0, min(2, len(xs))))) for _ in range(rng.randint(1, 7))]
    best = brute_sunflower(host, family)
    cert = find_sunflower(host, family, best)
    assert cert is not None and len(cert.indices) == best
    assert cert.replay(host, family)
    assert find_sunflower(host, family, best + 1) is None


def test_sunflower_replay_rejects_a_bad_core():
    sig = Signature.one_sorted({"E": 2})
    host = make_structure(sig, {"V": list("abcd")})
    fam = [{"a", "b"}, {"a", "c"}, {"a", "d"}]
    cert = find_sunflower(host, fam, 3)
    assert cert.core == frozenset({"a"})
    assert cert.replay(host, fam)
    bad = type(cert)(cert.indices, frozenset())
    assert not bad.replay(host, fam)


def graph_condition(vs, edges):
    k = catalog.get("graphs").age
    return make_structure(k.sig, {"V": vs}, rels={"E": {t for e in edges for t in (e, e[::-1])}})


def test_graph_conditions_are_compatible_iff_they_agree():
    k = catalog.get("graphs").age
    base = make_structure(k.subsig, {"V": list("abcde")})
    p = graph_condition(["a", "b"], [("a", "b")])
    q = graph_condition(["b", "c"], [])
    r = graph_condition(["a", "b", "c"], [])
    assert compatible(p, q, k, base)
    assert is_common_extension(compatible(p, q, k, base).witness, p, q, k, base)
    c = compatible(p, r, k, base)
    assert not c and "disagree" in c.reason
    assert not compatible(p, q, k, base, budget=2)


@settings(max_examples=15)
@given(st.sets(st.integers(0, len(POOL) - 1)), st.integers(0, 10 ** 6))
def test_compatibility_matches_brute_force(idx, seed):
    rng = random.Random(seed)
    k = AgeSpec("random", SIG, SUB, [POOL[i] for i in sorted(idx)])
    base = make_structure(SUB, {"V": ["a", "b", "c"]})
    conds = []
    for vs in (["a", "b"], ["b", "c"], ["a", "c"], ["b"]):
        ms = list(all_structures(k, vs))
        if ms:
            conds.append(rng.choice(ms))
    for p, q in itertools.combinations(conds, 2):
        elems = sorted(p.elements | q.elements)
        want = any(is_substructure(p, d) and is_substructure(q, d) for d in all_structures(k, elems))
        got = compatible(p, q, k, base)
        assert bool(got) == want
        if got:
            assert is_common_extension(got.witness, p, q, k, base)


def test_linked_and_antichain_on_edge_choices():
    k = catalog.get("graphs").age
    base = make_structure(k.subsig, {"V": list("abcd")})
    conds = [graph_condition(["a", "b"], [("a", "b")]),
             graph_condition(["a", "b"], []),
             graph_condition(["b", "c"], [("b", "c")]),
             graph_condition(["c", "d"], [])]
    lf = linked_subfamily(conds, k, base)
    assert len(lf.indices) == 3 and lf.graph.recheck(k, base)
    for (i, j), d in lf.witnesses.items():
        assert is_common_extension(d, conds[i], conds[j], k, base)
    ac = max_antichain(conds, k, base)
    assert ac.indices == [0, 1]


def test_isomorphic_petals_are_linked():
    # copies of one condition that meet only in a shared point are pairwise compatible
    k = catalog.get("graphs").age
    base = make_structure(k.subsig, {"V": ["o"] + [f"p{i}" for i in range(6)]})
    conds = [graph_condition(["o", f"p{i}"], [("o", f"p{i}")]) for i in range(6)]
    assert len(linked_subfamily(conds, k, base).indices) == 6
    cg = CompatGraph.build(conds, k, base)
    assert cg.adjacency_dump().count("\n") == 15


def test_compatible_rejects_a_base_in_the_wrong_signature():
    k = catalog.get("graphs").age
    with pytest.raises(ValueError):
        compatible(graph_condition(["a"], []), graph_condition(["a"], []), k, graph_condition(["a"], []))


def test_vector_space_lines_sunflower():
    e = catalog.get("vector-space", q=2)
    orc = VectorSpaceOracle(2)
    s = orc.initial(None)
    for _ in range(3):
        (s,) = orc.extensions(s)
    lines = [{x} for x in sorted(s.elements) if x != "0"]
    cert = find_sunflower(s, lines, 7)
    assert cert is not None and cert.core == frozenset({"0"})
    assert cert.replay(s, lines)
    assert restrict(s, {"0"}).elements == {"0"} and e.age.member(restrict(s, tdcl(s, {"0"})))
