"""Embedding, isomorphism and automorphism search by backtracking.

The search assigns source elements one at a time in a fixed order and
propagates every forced consequence: once all arguments of a source function
entry are mapped, the image of its value is determined.  Relation tuples are
checked in both directions as soon as they are fully mapped, so every complete
assignment is a strong embedding.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .structure import FinStructure, elem_key, generated_sub, ordered

AUTOMORPHISM_CAP = math.factorial(10)


class BudgetExceeded(RuntimeError):
    """The search visited more nodes than its budget allows."""

    def __init__(self, nodes: int):
        super().__init__(f"search budget exhausted after {nodes} nodes")
        self.nodes = nodes


class CapExceeded(BudgetExceeded):
    pass


@dataclass(frozen=True, eq=False)
class Embedding:
    source: FinStructure
    target: FinStructure
    mapping: Mapping[str, str]

    @property
    def maps(self) -> dict[str, dict[str, str]]:
        out = {s: {} for s in self.source.sig.sorts}
        for x, y in self.mapping.items():
            out[self.source.sort_of[x]][x] = y
        return out

    def __call__(self, x: str) -> str:
        return self.mapping[x]

    @property
    def is_isomorphism(self) -> bool:
        return len(self.mapping) == len(self.target)

    @property
    def is_identity(self) -> bool:
        return all(x == y for x, y in self.mapping.items())

    def moved(self) -> list[str]:
        return ordered(x for x, y in self.mapping.items() if x != y)

    def __eq__(self, other):
        return isinstance(other, Embedding) and dict(self.mapping) == dict(other.mapping)

    def __hash__(self):
        return hash(tuple(sorted(self.mapping.items())))

    def __repr__(self):
        body = ", ".join(f"{x}->{y}" for x, y in sorted(self.mapping.items(), key=lambda p: elem_key(p[0])))
        return f"Embedding({body})"


@dataclass
class GenTuple:
    host: FinStructure
    elems: tuple[str, ...]

    def __post_init__(self):
        self.elems = tuple(self.elems)

    def sorts(self):
        return tuple(self.host.sort_of[x] for x in self.elems)

    def generated(self) -> FinStructure:
        return generated_sub(self.host, self.elems)


def _profile(s: FinStructure):
    prof = defaultdict(lambda: defaultdict(int))
    for r, ts in s.rels.items():
        for t in ts:
            for i, x in enumerate(t):
                prof[x][(r, i)] += 1
    return prof


def _value_profile(s: FinStructure):
    prof = defaultdict(lambda: defaultdict(int))
    for f, table in s.funcs.items():
        for args, v in table.items():
            prof[v][f] += 1
            if args and all(a == v for a in args):
                prof[v][(f, "fix")] += 1
    return prof


@dataclass
class _Matcher:
    src: FinStructure
    dst: FinStructure
    iso: bool = False
    partial: Mapping[str, str] | None = None
    budget: int | None = None
    avoid: frozenset = frozenset()
    nodes: int = 0
    fwd: dict = field(default_factory=dict)
    inv: dict = field(default_factory=dict)
    trail: list = field(default_factory=list)

    def __post_init__(self):
        src, dst = self.src, self.dst
        self.ok = src.sig == dst.sig
        self.fun_facts = defaultdict(list)
        self.const_facts = []
        for f, table in src.funcs.items():
            dt = dst.funcs[f]
            for args, v in table.items():
                fact = (dt, args, v)
                if not args:
                    self.const_facts.append(fact)
                for x in set(args):
                    self.fun_facts[x].append(fact)
        self.src_rel = defaultdict(list)
        for r, ts in src.rels.items():
            dset = dst.rels[r]
            for t in ts:
                for x in set(t):
                    self.src_rel[x].append((dset, t))
        self.dst_rel = defaultdict(list)
        for r, ts in dst.rels.items():
            sset = src.rels[r]
            for t in ts:
                for y in set(t):
                    self.dst_rel[y].append((sset, t))
        sp, dp = _profile(src), _profile(dst)
        if self.iso:
            svp, dvp = _value_profile(src), _value_profile(dst)

        def compat(x, y):
            px, py = sp.get(x, {}), dp.get(y, {})
            if self.iso:
                return dict(px) == dict(py) and dict(svp.get(x, {})) == dict(dvp.get(y, {}))
            return all(py.get(k, 0) >= n for k, n in px.items())
        self.compat = compat
        if self.iso:
            for srt in src.sig.sorts:
                if src.size(srt) != dst.size(srt):
                    self.ok = False
        else:
            for srt in src.sig.sorts:
                if src.size(srt) > dst.size(srt):
                    self.ok = False
        self.order = self._order()

    def _order(self):
        src = self.src
        neigh = defaultdict(set)
        for facts in self.fun_facts.values():
            for _, args, v in facts:
                grp = set(args) | {v}
                for x in grp:
                    neigh[x] |= grp
        for facts in self.src_rel.values():
            for _, t in facts:
                for x in t:
                    neigh[x] |= set(t)
        remaining = src.ordered_elements()
        placed, order = set(), []
        weight = {x: len(neigh[x]) for x in remaining}
        while remaining:
            # max keeps the first maximal element, so ties follow carrier order
            best = max(remaining, key=lambda x: (len(neigh[x] & placed), weight[x]))
            order.append(best)
            placed.add(best)
            remaining.remove(best)
        return order

    # -- assignment with propagation ---------------------------------------

    def _assign(self, x, y) -> bool:
        queue = [(x, y)]
        fwd, inv = self.fwd, self.inv
        while queue:
            x, y = queue.pop()
            if x in fwd:
                if fwd[x] != y:
                    return False
                continue
            if y in inv or y in self.avoid or self.dst.sort_of.get(y) != self.src.sort_of[x]:
                return False
            if not self.compat(x, y):
                return False
            fwd[x] = y
            inv[y] = x
            self.trail.append(x)
            for dt, args, v in self.fun_facts.get(x, ()):
                if all(a in fwd for a in args):
                    fy = dt[tuple(fwd[a] for a in args)]
                    if v in fwd:
                        if fwd[v] != fy:
                            return False
                    else:
                        queue.append((v, fy))
            for dset, t in self.src_rel.get(x, ()):
                if all(a in fwd for a in t) and tuple(fwd[a] for a in t) not in dset:
                    return False
            for sset, t in self.dst_rel.get(y, ()):
                if all(b in inv for b in t) and tuple(inv[b] for b in t) not in sset:
                    return False
        return True

    def _undo(self, mark):
        while len(self.trail) > mark:
            x = self.trail.pop()
            del self.inv[self.fwd.pop(x)]

    def _tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded(self.nodes)

    def run(self) -> Iterator[dict]:
        if not self.ok:
            return
        seeds = list(self.partial.items()) if self.partial else []
        for dt, args, v in self.const_facts:
            seeds.append((v, dt[()]))
        for x, y in seeds:
            if not self._assign(x, y):
                return
        yield from self._dfs(0)

    def _dfs(self, i):
        order, fwd = self.order, self.fwd
        while i < len(order) and order[i] in fwd:
            i += 1
        if i == len(order):
            yield dict(fwd)
            return
        x = order[i]
        for y in self.dst.carrier[self.src.sort_of[x]]:
            if y in self.inv:
                continue
            self._tick()
            mark = len(self.trail)
            if self._assign(x, y):
                yield from self._dfs(i + 1)
            self._undo(mark)


def iter_embeddings(a: FinStructure, b: FinStructure, partial=None, iso: bool = False,
                    budget: int | None = None, avoid=()) -> Iterator[Embedding]:
    """Lazily enumerate embeddings of ``a`` into ``b`` in deterministic order.

    ``partial`` pins some source elements; ``avoid`` lists target elements that
    may not be used as images.
    """
    if a.sig != b.sig:
        return
    m = _Matcher(a, b, iso=iso, partial=partial, budget=budget, avoid=frozenset(avoid))
    for mp in m.run():
        yield Embedding(a, b, mp)


def find_embeddings(a: FinStructure, b: FinStructure, limit: int | None = None, partial=None,
                    iso: bool = False, budget: int | None = None, avoid=()) -> list[Embedding]:
    out = []
    if limit is not None and limit <= 0:
        return out
    for e in iter_embeddings(a, b, partial=partial, iso=iso, budget=budget, avoid=avoid):
        out.append(e)
        if limit is not None and len(out) >= limit:
            break
    return out


def find_isomorphism(a: FinStructure, b: FinStructure, partial=None, budget=None) -> Embedding | None:
    found = find_embeddings(a, b, limit=1, partial=partial, iso=True, budget=budget)
    return found[0] if found else None


def isomorphic(a: FinStructure, b: FinStructure) -> bool:
    return find_isomorphism(a, b) is not None


def automorphisms(s: FinStructure, cap: int = AUTOMORPHISM_CAP, partial=None) -> list[Embedding]:
    """All automorphisms of ``s`` (identity first); ``CapExceeded`` past ``cap`` nodes."""
    m = _Matcher(s, s, iso=True, partial=partial, budget=cap)
    try:
        return [Embedding(s, s, mp) for mp in m.run()]
    except BudgetExceeded as exc:
        raise CapExceeded(exc.nodes) from None


def is_embedding(e: Embedding) -> bool:
    """Independent recheck of the embedding invariants by direct evaluation."""
    a, b, m = e.source, e.target, e.mapping
    if a.sig != b.sig or set(m) != a.elements:
        return False
    if len(set(m.values())) != len(m):
        return False
    for x, y in m.items():
        if b.sort_of.get(y) != a.sort_of[x]:
            return False
    for f, table in a.funcs.items():
        for args, v in table.items():
            if b.funcs[f].get(tuple(m[x] for x in args)) != m[v]:
                return False
    image = set(m.values())
    back = {y: x for x, y in m.items()}
    for r in a.sig.relations:
        pushed = {tuple(m[x] for x in t) for t in a.rels[r]}
        inside = {t for t in b.rels[r] if all(y in image for y in t)}
        if pushed != inside:
            return False
        if {tuple(back[y] for y in t) for t in inside} != set(a.rels[r]):
            return False
    return True


def is_automorphism(e: Embedding) -> bool:
    return e.source == e.target and e.is_isomorphism and is_embedding(e)


def _generator_map(a: GenTuple, b: GenTuple):
    if len(a.elems) != len(b.elems) or a.sorts() != b.sorts():
        return None
    fwd, inv = {}, {}
    for x, y in zip(a.elems, b.elems):
        if fwd.setdefault(x, y) != y or inv.setdefault(y, x) != x:
            return None
    return fwd


def qftp_equal(a: GenTuple, b: GenTuple) -> bool:
    """Same quantifier-free type: the generated substructures are isomorphic
    by an isomorphism sending ``a`` to ``b`` componentwise."""
    if a.host.sig != b.host.sig:
        return False
    partial = _generator_map(a, b)
    if partial is None:
        return False
    ga, gb = a.generated(), b.generated()
    return find_isomorphism(ga, gb, partial=partial) is not None


def gdcl(s: FinStructure, seed, cap: int = AUTOMORPHISM_CAP) -> set[str]:
    """Elements fixed by every automorphism that fixes ``seed`` pointwise."""
    seed = set(seed)
    fixed = set(s.elements)
    for g in automorphisms(s, cap=cap, partial={x: x for x in seed}):
        fixed = {x for x in fixed if g.mapping[x] == x}
    return fixed


def term_correspondence(h0: FinStructure, gens0, h1: FinStructure, gens1) -> dict | None:
    """The map ``t(gens0) -> t(gens1)`` over all terms ``t``, or None.

    The pairs ``(a_i, b_i)`` are closed under every function applied
    componentwise.  The result is None when the closure is not the graph of
    a sort-preserving injection, i.e. when some equation between terms holds
    on one side only.  Relations are not consulted.
    """
    if len(gens0) != len(gens1):
        return None
    fwd, inv = {}, {}
    frontier = []

    def add(x, y):
        if h0.sort_of.get(x) != h1.sort_of.get(y):
            return False
        if x in fwd or y in inv:
            return fwd.get(x) == y and inv.get(y) == x
        fwd[x], inv[y] = y, x
        frontier.append((x, y))
        return True

    for x, y in zip(gens0, gens1):
        if not add(x, y):
            return None
    for f in h0.sig.constants:
        if not add(h0.const(f), h1.const(f)):
            return None
    funcs = [(f, dom) for f, (dom, _) in h0.sig.functions.items() if dom]
    while frontier:
        new = set(frontier)
        frontier.clear()
        pairs = list(fwd.items())
        for f, dom in funcs:
            t0, t1 = h0.funcs[f], h1.funcs[f]
            pools = [[p for p in pairs if h0.sort_of[p[0]] == d] for d in dom]
            for combo in itertools.product(*pools):
                if not any(p in new for p in combo):
                    continue
                if not add(t0[tuple(p[0] for p in combo)], t1[tuple(p[1] for p in combo)]):
                    return None
    return fwd


def relation_mismatches(h0: FinStructure, h1: FinStructure, corr: dict, rels=None):
    """Tuples of ``h0`` inside the domain of ``corr`` whose relation value
    differs from that of their image in ``h1``."""
    dom = list(corr)
    out = []
    for r in rels if rels is not None else h0.sig.relations:
        ar = h0.sig.relations[r]
        for t in itertools.product(*[[x for x in dom if h0.sort_of[x] == s] for s in ar]):
            u = tuple(corr[x] for x in t)
            if (t in h0.rels[r]) != (u in h1.rels[r]):
                out.append((r, t, u))
    return out
