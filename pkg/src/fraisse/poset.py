"""Compatibility of conditions, linked subfamilies, antichains, and the
term sunflower search.

Conditions are members of the age whose L⊥-reducts are substructures of a
fixed base.  Two conditions are compatible when some condition extends both;
the only candidate L⊥-part is the part of the base generated by their union,
so compatibility reduces to one decoration search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from .ages import AgeSpec
from .structure import FinStructure, generated_sub, is_substructure, ordered, reduct, restrict, tdcl

EXACT_CLIQUE_CAP = 20


def _structure(c) -> FinStructure:
    return c.structure if hasattr(c, "structure") else c


# -- compatibility ----------------------------------------------------------------------

@dataclass
class Compatibility:
    witness: FinStructure | None
    reason: str = ""

    def __bool__(self):
        return self.witness is not None


def compatible(p, q, k: AgeSpec, base: FinStructure, budget: int | None = None) -> Compatibility:
    """A common extension of ``p`` and ``q`` in K[base] of size ≤ budget."""
    p, q = _structure(p), _structure(q)
    if base.sig != k.subsig:
        raise ValueError("the base must be a structure in the base signature")
    if p == q:
        return Compatibility(p, "equal")
    overlap = p.elements & q.elements
    if restrict(p, overlap) != restrict(q, overlap):
        return Compatibility(None, "the conditions disagree on their common part")
    dbot = generated_sub(base, p.elements | q.elements)
    if budget is not None and len(dbot) > budget:
        return Compatibility(None, f"a common extension needs {len(dbot)} > {budget} elements")
    for d in k.decorations(dbot, fixed=[p, q], limit=1):
        return Compatibility(d, "decorated")
    return Compatibility(None, "no admissible decoration of the generated base part")


def is_common_extension(d: FinStructure, p, q, k: AgeSpec, base: FinStructure) -> bool:
    """Independent recheck of a compatibility witness."""
    p, q = _structure(p), _structure(q)
    return (k.member(d) and is_substructure(p, d) and is_substructure(q, d)
            and is_substructure(reduct(d, k.subsig), base))


@dataclass
class CompatGraph:
    nodes: list
    edges: dict = field(default_factory=dict)  # (i, j) -> witness
    reasons: dict = field(default_factory=dict)  # (i, j) -> why not compatible
    budget: int | None = None

    @classmethod
    def build(cls, conds: Sequence, k: AgeSpec, base: FinStructure, budget: int | None = None):
        g = cls(list(conds), budget=budget)
        for i, j in itertools.combinations(range(len(conds)), 2):
            c = compatible(conds[i], conds[j], k, base, budget)
            if c:
                g.edges[(i, j)] = c.witness
            else:
                g.reasons[(i, j)] = c.reason
        return g

    def graph(self, complement: bool = False) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.nodes)))
        for i, j in itertools.combinations(range(len(self.nodes)), 2):
            if ((i, j) in self.edges) != complement:
                g.add_edge(i, j)
        return g

    def recheck(self, k: AgeSpec, base: FinStructure) -> bool:
        return all(is_common_extension(d, self.nodes[i], self.nodes[j], k, base)
                   for (i, j), d in self.edges.items())

    def adjacency_dump(self) -> str:
        return "".join(f"{i} {j} {len(d)}\n" for (i, j), d in sorted(self.edges.items()))


def max_clique(g: nx.Graph) -> list[int]:
    """Exact maximum clique up to ``EXACT_CLIQUE_CAP`` nodes, greedy with
    one-swap improvement beyond."""
    if g.number_of_nodes() == 0:
        return []
    if g.number_of_nodes() <= EXACT_CLIQUE_CAP:
        clique, _ = nx.max_weight_clique(g, weight=None)
        return sorted(clique)
    return sorted(_greedy_clique(g))


def _greedy_clique(g: nx.Graph) -> set:
    order = sorted(g.nodes, key=lambda v: (-g.degree(v), v))
    best: set = set()
    for start in order[:10]:
        clique = {start}
        for v in order:
            if v not in clique and all(g.has_edge(v, u) for u in clique):
                clique.add(v)
        improved = True
        while improved:
            improved = False
            for v in order:
                if v in clique:
                    continue
                missing = [u for u in clique if not g.has_edge(v, u)]
                if len(missing) == 1:
                    trial = (clique - set(missing)) | {v}
                    extra = [w for w in order if w not in trial and all(g.has_edge(w, u) for u in trial)]
                    if extra:
                        clique = trial | {extra[0]}
                        improved = True
                        break
        if len(clique) > len(best):
            best = clique
    return best


@dataclass
class LinkedFamily:
    indices: list
    witnesses: dict
    graph: CompatGraph


def linked_subfamily(conds: Sequence, k: AgeSpec, base: FinStructure, budget: int | None = None) -> LinkedFamily:
    """A largest pairwise compatible subfamily found, with its witnesses."""
    cg = CompatGraph.build(conds, k, base, budget)
    idx = max_clique(cg.graph())
    wit = {(i, j): cg.edges[(i, j)] for i, j in itertools.combinations(idx, 2)}
    return LinkedFamily(idx, wit, cg)


def max_antichain(conds: Sequence, k: AgeSpec, base: FinStructure, budget: int | None = None) -> LinkedFamily:
    """A largest pairwise incompatible subfamily found (relative to the budget)."""
    cg = CompatGraph.build(conds, k, base, budget)
    idx = max_clique(cg.graph(complement=True))
    why = {(i, j): cg.reasons[(i, j)] for i, j in itertools.combinations(idx, 2)}
    return LinkedFamily(idx, why, cg)


# -- sunflowers --------------------------------------------------------------------------

@dataclass(frozen=True)
class SunflowerCert:
    indices: tuple
    core: frozenset

    def replay(self, host: FinStructure, family: Sequence) -> bool:
        """Recompute the pairwise intersections and the closure of the core."""
        if len(set(self.indices)) != len(self.indices):
            return False
        sets = [tdcl(host, family[i]) for i in self.indices]
        if any(not self.core <= s for s in sets):
            return False
        if any(a & b != self.core for a, b in itertools.combinations(sets, 2)):
            return False
        return tdcl(host, self.core) == set(self.core)


def find_sunflower(host: FinStructure, family: Sequence, t: int, exact_cap: int = EXACT_CLIQUE_CAP):
    """A subfamily of size ≥ t whose closed members pairwise meet exactly in
    one term-closed core, or None."""
    sets = [frozenset(tdcl(host, s)) for s in family]
    if t <= 1 and sets:
        return SunflowerCert((0,), sets[0])
    cores: dict = {}
    for i, j in itertools.combinations(range(len(sets)), 2):
        cores.setdefault(sets[i] & sets[j], []).append((i, j))
    best = None
    for core in sorted(cores, key=lambda c: (-len(cores[c]), len(c), ordered(c))):
        if tdcl(host, core) != set(core):
            continue
        g = nx.Graph()
        g.add_edges_from(cores[core])
        if g.number_of_nodes() < t:
            continue
        if len(sets) <= exact_cap:
            clique, _ = nx.max_weight_clique(g, weight=None)
        else:
            clique = _greedy_clique(g)
        if len(clique) >= t and (best is None or len(clique) > len(best.indices)):
            best = SunflowerCert(tuple(sorted(clique)), core)
    return best
