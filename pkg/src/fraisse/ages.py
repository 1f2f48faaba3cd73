"""Ages given operationally.

An ``AgeSpec`` couples a signature L and a subsignature L⊥ with universal
constraints, a ``BaseOracle`` that generates L⊥-structures, and optionally a
non-universal predicate for test fixtures.  Members are the structures
satisfying every constraint (and the predicate).  The L⊥-part of the class is
described by the constraints that mention only L⊥ symbols.

Functions live in L⊥ only; the symbols of L∖L⊥ are relations.  A member is
then an L⊥-structure produced by the oracle plus a relation decoration, and
the decoration search of ``csp`` does all the work above the base.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .constraints import Constraint, bind_all, violations
from .csp import DecorationProblem
from .embeddings import _profile, find_isomorphism
from .signature import Signature
from .structure import (FinStructure, empty_structure, fresh_ids, ordered, reduct, rename, tdcl,
                        validate)


# -- isomorphism bookkeeping -----------------------------------------------------

def fingerprint(s: FinStructure):
    """Isomorphism invariant used to bucket structures before search."""
    prof = _profile(s)
    sorts = tuple(s.size(x) for x in s.sig.sorts)
    rels = tuple(len(s.rels[r]) for r in s.sig.relations)
    per = tuple(sorted((s.sort_of[x], tuple(sorted(prof[x].items()))) for x in s.elements))
    fixed = tuple(sum(1 for a, v in t.items() if a and all(y == v for y in a))
                  for t in s.funcs.values())
    return sorts, rels, fixed, per


class IsoSet:
    """Structures kept up to isomorphism (optionally over a pinned subset)."""

    def __init__(self, pinned: Iterable[str] = ()):
        self.pinned = {x: x for x in pinned}
        self.buckets = defaultdict(list)
        self.items: list[FinStructure] = []

    def add(self, s: FinStructure) -> bool:
        key = fingerprint(s)
        for t in self.buckets[key]:
            if find_isomorphism(s, t, partial=self.pinned or None) is not None:
                return False
        self.buckets[key].append(s)
        self.items.append(s)
        return True

    def __len__(self):
        return len(self.items)


def closed_subsets(s: FinStructure, proper: bool = False) -> list[set[str]]:
    """All term-closed subsets of ``s`` (each is a substructure carrier)."""
    start = frozenset(tdcl(s, ()))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for e in s.ordered_elements():
                if e in x:
                    continue
                y = frozenset(tdcl(s, x | {e}))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    out = sorted(seen, key=lambda x: (len(x), ordered(x)))
    if proper:
        out = [x for x in out if len(x) < len(s)]
    return [set(x) for x in out]


# -- base oracles ----------------------------------------------------------------------

class BaseOracle:
    """Generator of L⊥-structures for an age.

    ``initial`` is the structure generated by the empty set; ``extensions``
    returns the structures generated by one new element over ``a``;
    ``amalgams`` returns the L⊥-structures generated by ``carrier(b) ∪
    carrier(c)`` that contain ``b`` and ``c`` (which meet exactly in ``a``);
    ``rank`` measures size for the purpose of bounds.
    """

    name = "base"
    params: tuple = ()

    def initial(self, sub: Signature) -> FinStructure:
        raise NotImplementedError

    def extensions(self, a: FinStructure) -> list[FinStructure]:
        raise NotImplementedError

    def amalgams(self, a: FinStructure, b: FinStructure, c: FinStructure) -> list[FinStructure]:
        raise NotImplementedError

    def rank(self, s: FinStructure) -> int:
        return len(s)

    def new_ids(self, s: FinStructure, count: int, avoid=()) -> list[str]:
        return fresh_ids("n", count, set(s.elements) | set(avoid))


class BruteForceOracle(BaseOracle):
    """Exhaustive oracle for small L⊥: every completion of the tables and
    relations on tuples involving new material, filtered by the base
    constraints.  Function values never leave the given carrier, so only
    extensions and amalgams on the union carrier are produced."""

    name = "brute"

    def __init__(self, constraints: Sequence[Constraint] = ()):
        self.constraints = list(constraints)

    def initial(self, sub):
        return empty_structure(sub)

    def _completions(self, sig, carrier, funcs, rels, old_regions):
        """All structures on ``carrier`` extending the partial tables."""
        s0 = FinStructure(sig, carrier, {}, {})
        inside = [set(r) for r in old_regions]

        def new(t):
            return not any(all(x in reg for x in t) for reg in inside)

        slots = []
        for f, (dom, cod) in sig.functions.items():
            for args in s0.tuples_of(dom):
                if args not in funcs.get(f, {}):
                    slots.append(("f", f, args, list(s0.carrier[cod])))
        for r, ar in sig.relations.items():
            for t in s0.tuples_of(ar):
                if new(t):
                    slots.append(("r", r, t, [False, True]))
        out = []
        for choice in itertools.product(*(sl[3] for sl in slots)):
            fs = {f: dict(funcs.get(f, {})) for f in sig.functions}
            rs = {r: set(rels.get(r, ())) for r in sig.relations}
            for sl, v in zip(slots, choice):
                if sl[0] == "f":
                    fs[sl[1]][sl[2]] = v
                elif v:
                    rs[sl[1]].add(sl[2])
            s = FinStructure(sig, carrier, fs, rs)
            if not violations(self.constraints, s):
                out.append(s)
        return out

    def extensions(self, a):
        out = []
        for srt in a.sig.sorts:
            x = self.new_ids(a, 1)[0]
            carrier = {k: list(v) for k, v in a.carrier.items()}
            carrier[srt].append(x)
            for s in self._completions(a.sig, carrier, a.funcs, a.rels, [a.elements]):
                if tdcl(s, a.elements | {x}) == s.elements:
                    out.append(s)
        return out

    def amalgams(self, a, b, c):
        carrier = {k: sorted(set(b.carrier[k]) | set(c.carrier[k])) for k in b.sig.sorts}
        funcs = {f: {**b.funcs[f], **c.funcs[f]} for f in b.sig.functions}
        rels = {r: set(b.rels[r]) | set(c.rels[r]) for r in b.sig.relations}
        return self._completions(b.sig, carrier, funcs, rels, [b.elements, c.elements])


# -- ages -----------------------------------------------------------------------------

@dataclass
class Enumeration:
    members: list
    exhaustive: bool
    bound: int


@dataclass
class AgeSpec:
    name: str
    sig: Signature
    subsig: Signature
    constraints: Sequence[Constraint] = ()
    oracle: BaseOracle | None = None
    extra: Callable[[FinStructure], bool] | None = None
    extra_label: str = ""
    decoration_cap: int = 512
    seed: int = 0
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.subsig.is_subsignature_of(self.sig):
            raise ValueError("subsig must be a subsignature of sig")
        if set(self.subsig.functions) != set(self.sig.functions):
            raise ValueError("every function symbol must belong to the base signature")
        self.constraints = bind_all(self.constraints, self.sig)
        base_syms = self.subsig.symbols()
        self.base_constraints = [c for c in self.constraints if c.symbols() <= base_syms]
        if self.oracle is None:
            self.oracle = BruteForceOracle(self.base_constraints)

    # membership ----------------------------------------------------------------

    def violations(self, s: FinStructure, limit: int = 1) -> list[str]:
        if s.sig != self.sig:
            return ["wrong signature"]
        out = validate(s)
        if out:
            return out[:limit]
        out = violations(self.constraints, s, limit)
        if not out and self.extra is not None and not self.extra(s):
            out = [self.extra_label or "extra condition"]
        return out

    def member(self, s: FinStructure) -> bool:
        return not self.violations(s)

    def member_bot(self, s: FinStructure) -> bool:
        """Membership of an L⊥-structure in the base class."""
        return s.sig == self.subsig and not validate(s) and not violations(self.base_constraints, s)

    def reduct(self, s: FinStructure) -> FinStructure:
        return reduct(s, self.subsig)

    def rank(self, s: FinStructure) -> int:
        return self.oracle.rank(s)

    @property
    def relational_excess(self) -> list[str]:
        return self.sig.extra_relations(self.subsig)

    # decorations ---------------------------------------------------------------

    def decorations(self, dbot: FinStructure, fixed: Sequence[FinStructure] = (), limit=None,
                    rng: random.Random | None = None, relevant=(), check=None, budget=None):
        """Members D with D↾L⊥ = dbot containing every structure in ``fixed``."""
        prob = DecorationProblem(self.sig, dbot, self.constraints, fixed)
        count = 0
        for d in prob.solutions(rng=rng, relevant=relevant, check=check, budget=budget):
            if self.extra is not None and not self.extra(d):
                continue
            yield d
            count += 1
            if limit is not None and count >= limit:
                return

    def sample_decorations(self, dbot, fixed=(), cap=None, rng=None):
        """Up to ``cap`` decorations: all of them if there are at most ``cap``,
        otherwise the lexicographically first plus random ones.  Returns the
        list and whether it is exhaustive."""
        cap = cap or self.decoration_cap
        first = list(self.decorations(dbot, fixed, limit=cap + 1))
        if len(first) <= cap:
            return first, True
        rng = rng or random.Random(self.seed)
        out = [first[0]]
        seen = {first[0]}
        tries = 0
        while len(out) < cap and tries < 4 * cap:
            tries += 1
            for d in self.decorations(dbot, fixed, limit=1, rng=rng):
                if d not in seen:
                    seen.add(d)
                    out.append(d)
        return out, False

    # enumeration ----------------------------------------------------------------

    def enumerate_bot(self, n: int) -> list[FinStructure]:
        """Base structures of rank ≤ n up to isomorphism."""
        key = ("bot", n)
        if key in self._cache:
            return self._cache[key]
        init = self.oracle.initial(self.subsig)
        found = IsoSet()
        found.add(init)
        frontier = [init]
        while frontier:
            nxt = []
            for a in frontier:
                if self.oracle.rank(a) >= n:
                    continue
                for e in self.oracle.extensions(a):
                    if self.oracle.rank(e) <= n and found.add(e):
                        nxt.append(e)
            frontier = nxt
        out = [s for s in found.items if self.member_bot(s)]
        out.sort(key=lambda s: (self.oracle.rank(s), len(s)))
        self._cache[key] = out
        return out

    def enumerate(self, n: int) -> Enumeration:
        """Members of rank ≤ n up to isomorphism, smallest first."""
        key = ("all", n)
        if key in self._cache:
            return self._cache[key]
        exhaustive = True
        members = IsoSet()
        rng = random.Random(self.seed)
        for base in self.enumerate_bot(n):
            decs, complete = self.sample_decorations(base, rng=rng)
            exhaustive &= complete
            for d in decs:
                members.add(d)
        result = Enumeration(members.items, exhaustive, n)
        self._cache[key] = result
        return result

    def one_point_extensions(self, a: FinStructure, cap: int | None = None):
        """Members generated over ``a`` by one new element, up to isomorphism
        over ``a``.  Returns the list and whether it is exhaustive."""
        out = IsoSet(pinned=a.elements)
        exhaustive = True
        rng = random.Random(self.seed)
        for e in self.oracle.extensions(self.reduct(a)):
            decs, complete = self.sample_decorations(e, fixed=[a], cap=cap, rng=rng)
            exhaustive &= complete
            for d in decs:
                out.add(d)
        return out.items, exhaustive

    def initial_member(self) -> FinStructure | None:
        base = self.oracle.initial(self.subsig)
        return next(iter(self.decorations(base, limit=1)), None)

    def bot(self) -> "AgeSpec":
        """The class of L⊥-structures, given by the base constraints."""
        return AgeSpec(self.name + "-bot", self.subsig, self.subsig, self.base_constraints,
                       self.oracle, decoration_cap=self.decoration_cap, seed=self.seed)


def rename_apart(c: FinStructure, keep: Iterable[str], avoid: Iterable[str], prefix: str = "c") -> tuple[FinStructure, dict]:
    """Rename the elements of ``c`` outside ``keep`` to fresh ids avoiding ``avoid``."""
    keep = set(keep)
    others = [x for x in c.ordered_elements() if x not in keep]
    fresh = fresh_ids(prefix, len(others), set(avoid) | set(c.elements))
    mapping = dict(zip(others, fresh))
    return rename(c, mapping), mapping
