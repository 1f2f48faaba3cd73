"""Finite multi-sorted structures with total function tables.

Element ids are strings and are globally unique across sorts, so the carrier
of a structure is also available as one flat set (``elements``).  Structures
are treated as immutable values; every operation returns a new structure.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .signature import Signature

_DIGITS = re.compile(r"(\d+)")


def elem_key(x: str):
    """Natural sort key, so that ``v2`` sorts before ``v10``."""
    return tuple((0, int(p)) if p.isdigit() else (1, p) for p in _DIGITS.split(x) if p)


def ordered(xs: Iterable[str]) -> list[str]:
    return sorted(xs, key=elem_key)


def tuple_key(t):
    return tuple(elem_key(x) for x in t)


class StructureError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FinStructure:
    sig: Signature
    carrier: Mapping[str, tuple[str, ...]]
    funcs: Mapping[str, Mapping[tuple[str, ...], str]]
    rels: Mapping[str, frozenset]

    def __post_init__(self):
        carrier = {s: tuple(ordered(self.carrier.get(s, ()))) for s in self.sig.sorts}
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "funcs", {f: dict(self.funcs.get(f, {})) for f in self.sig.functions})
        object.__setattr__(self, "rels", {r: frozenset(map(tuple, self.rels.get(r, ()))) for r in self.sig.relations})
        sort_of = {}
        for s, xs in carrier.items():
            for x in xs:
                sort_of.setdefault(x, s)
        object.__setattr__(self, "sort_of", sort_of)

    # -- basic views -------------------------------------------------------

    @property
    def elements(self) -> set[str]:
        return set(self.sort_of)

    def ordered_elements(self) -> list[str]:
        return [x for s in self.sig.sorts for x in self.carrier[s]]

    def __len__(self):
        return len(self.sort_of)

    def size(self, sort: str) -> int:
        return len(self.carrier[sort])

    def apply(self, f: str, *args: str) -> str:
        return self.funcs[f][tuple(args)]

    def const(self, c: str) -> str:
        return self.funcs[c][()]

    def holds(self, r: str, *args: str) -> bool:
        return tuple(args) in self.rels[r]

    def tuples_of(self, sorts: tuple[str, ...], within=None):
        pools = [self.carrier[s] if within is None else [x for x in self.carrier[s] if x in within]
                 for s in sorts]
        return itertools.product(*pools)

    def key(self):
        return (
            self.sig,
            tuple(sorted(self.carrier.items())),
            tuple((f, tuple(sorted(t.items()))) for f, t in sorted(self.funcs.items())),
            tuple((r, tuple(sorted(ts))) for r, ts in sorted(self.rels.items())),
        )

    def __eq__(self, other):
        return isinstance(other, FinStructure) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        parts = [f"{s}:{{{','.join(xs)}}}" for s, xs in self.carrier.items()]
        nrel = sum(len(v) for v in self.rels.values())
        return f"<FinStructure {' '.join(parts)} |rel|={nrel}>"


def empty_structure(sig: Signature) -> FinStructure:
    return FinStructure(sig, {}, {}, {})


def make_structure(sig: Signature, carrier, funcs=None, rels=None, check: bool = True) -> FinStructure:
    """Build a structure and (by default) raise if it violates an invariant."""
    s = FinStructure(sig, carrier, funcs or {}, rels or {})
    if check:
        problems = validate(s)
        if problems:
            raise StructureError("; ".join(problems))
    return s


def validate(s: FinStructure) -> list[str]:
    """All violated structure invariants; empty means the structure is sound."""
    out = []
    seen = {}
    for sort, xs in s.carrier.items():
        for x in xs:
            if x in seen and seen[x] != sort:
                out.append(f"element {x} carried by sorts {seen[x]} and {sort}")
            seen[x] = sort
    for f, (dom, cod) in s.sig.functions.items():
        table = s.funcs[f]
        for args in s.tuples_of(dom):
            if args not in table:
                out.append(f"non-total function {f}: no value at {args}")
            elif s.sort_of.get(table[args]) != cod:
                out.append(f"non-total/escaping function {f}: {args} -> {table[args]} is not a {cod} element")
        for args in table:
            if len(args) != len(dom) or any(s.sort_of.get(a) != d for a, d in zip(args, dom)):
                out.append(f"function {f} has an entry outside the carrier at {args}")
    for r, ar in s.sig.relations.items():
        for t in s.rels[r]:
            if len(t) != len(ar) or any(s.sort_of.get(a) != d for a, d in zip(t, ar)):
                out.append(f"relation {r} holds of ill-sorted or foreign tuple {t}")
    return out


def tdcl(s: FinStructure, seed: Iterable[str]) -> set[str]:
    """Term-definable closure of ``seed``: least superset closed under all functions."""
    closed = set(seed)
    missing = closed - s.elements
    if missing:
        raise StructureError(f"seed elements not in carrier: {ordered(missing)}")
    for f in s.sig.constants:
        closed.add(s.funcs[f][()])
    frontier = set(closed)
    funcs = [(s.funcs[f], dom) for f, (dom, _) in s.sig.functions.items() if dom]
    while frontier:
        old = closed - frontier
        new = set()
        for table, dom in funcs:
            by_sort_new = [[x for x in frontier if s.sort_of[x] == d] for d in dom]
            by_sort_old = [[x for x in old if s.sort_of[x] == d] for d in dom]
            by_sort_all = [a + b for a, b in zip(by_sort_old, by_sort_new)]
            # each tuple with some frontier component is visited once: position i
            # is the first frontier component
            for i in range(len(dom)):
                if not by_sort_new[i]:
                    continue
                pools = by_sort_old[:i] + [by_sort_new[i]] + by_sort_all[i + 1:]
                for args in itertools.product(*pools):
                    v = table[args]
                    if v not in closed:
                        new.add(v)
        closed |= new
        frontier = new
    return closed


def restrict(s: FinStructure, elems: Iterable[str]) -> FinStructure:
    """Induced structure on a term-closed set of elements."""
    keep = set(elems)
    carrier = {srt: [x for x in xs if x in keep] for srt, xs in s.carrier.items()}
    funcs = {f: {a: v for a, v in t.items() if all(x in keep for x in a)} for f, t in s.funcs.items()}
    rels = {r: [t for t in ts if all(x in keep for x in t)] for r, ts in s.rels.items()}
    return FinStructure(s.sig, carrier, funcs, rels)


def generated_sub(s: FinStructure, seed: Iterable[str]) -> FinStructure:
    return restrict(s, tdcl(s, seed))


def is_closed(s: FinStructure, elems: Iterable[str]) -> bool:
    elems = set(elems)
    return tdcl(s, elems) == elems


def reduct(s: FinStructure, sub: Signature) -> FinStructure:
    if not sub.is_subsignature_of(s.sig):
        raise StructureError("reduct target is not a subsignature")
    carrier = {srt: s.carrier[srt] for srt in sub.sorts}
    return FinStructure(sub, carrier,
                        {f: s.funcs[f] for f in sub.functions},
                        {r: s.rels[r] for r in sub.relations})


def expand(s: FinStructure, sig: Signature, rels: Mapping[str, Iterable] | None = None) -> FinStructure:
    """Expansion of ``s`` to the larger signature ``sig`` by relation sets."""
    rels = dict(rels or {})
    merged = {r: s.rels.get(r, rels.get(r, ())) for r in sig.relations}
    for r, ts in rels.items():
        merged[r] = ts
    return FinStructure(sig, s.carrier, s.funcs, merged)


def is_substructure(b: FinStructure, a: FinStructure) -> bool:
    """True iff ``b`` is literally a substructure of ``a``."""
    if b.sig != a.sig:
        return False
    for srt in b.sig.sorts:
        if not set(b.carrier[srt]) <= set(a.carrier[srt]):
            return False
    be = b.elements
    for f, table in b.funcs.items():
        at = a.funcs[f]
        if any(at.get(args) != v for args, v in table.items()):
            return False
        # b must be closed in a
        dom = b.sig.functions[f][0]
        if sum(1 for _ in b.tuples_of(dom)) != len(table):
            return False
        if any(v not in be for v in table.values()):
            return False
    for r, ts in a.rels.items():
        if {t for t in ts if all(x in be for x in t)} != set(b.rels[r]):
            return False
    return True


def union(structures: Iterable[FinStructure]) -> FinStructure:
    """Union of structures over one signature; tables are merged, relations united."""
    structures = list(structures)
    if not structures:
        raise StructureError("union of no structures")
    sig = structures[0].sig
    carrier = {srt: set() for srt in sig.sorts}
    funcs = {f: {} for f in sig.functions}
    rels = {r: set() for r in sig.relations}
    for s in structures:
        for srt, xs in s.carrier.items():
            carrier[srt].update(xs)
        for f, t in s.funcs.items():
            for args, v in t.items():
                if funcs[f].setdefault(args, v) != v:
                    raise StructureError(f"function {f} disagrees at {args}")
        for r, ts in s.rels.items():
            rels[r].update(ts)
    return FinStructure(sig, carrier, funcs, rels)


def rename(s: FinStructure, mapping: Mapping[str, str]) -> FinStructure:
    m = lambda x: mapping.get(x, x)  # noqa: E731
    return FinStructure(
        s.sig,
        {srt: [m(x) for x in xs] for srt, xs in s.carrier.items()},
        {f: {tuple(map(m, a)): m(v) for a, v in t.items()} for f, t in s.funcs.items()},
        {r: [tuple(map(m, t)) for t in ts] for r, ts in s.rels.items()},
    )


def fresh_ids(base: str, count: int, avoid: Iterable[str]) -> list[str]:
    """``count`` ids derived from ``base`` that avoid every id in ``avoid``."""
    avoid = set(avoid)
    out = []
    i = 0
    while len(out) < count:
        cand = f"{base}{i}" if i or count > 1 else base
        i += 1
        if cand not in avoid:
            out.append(cand)
            avoid.add(cand)
    return out
