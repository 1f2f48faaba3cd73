"""Checkers for the hypotheses that make generic structures rigid, the
class-permutation mechanism that makes relational structures non-rigid, and
automorphism hunts on finite structures.

Separating two pair types works through the term correspondence: the map
``t(x0, αx0) -> t(x1, αx1)`` on the L⊥-amalgam.  The pair types differ in an
amalgam D exactly when the correspondence is undefined or some relation tuple
and its image disagree in D, so each tuple pair becomes a small satisfiability
question.  Every claimed separation is then confirmed with ``qftp_equal``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .ages import AgeSpec, closed_subsets
from .amalgamation import AmalgamProblem, dbot_candidates
from .csp import DecorationProblem
from .embeddings import (BudgetExceeded, Embedding, GenTuple, _Matcher, automorphisms,
                         is_automorphism, is_embedding, qftp_equal, term_correspondence)
from .properties import PropertyReport, _automorphisms, _cap, _subset_reps, _Walk, register_instance
from .signature import Signature
from .structure import FinStructure, fresh_ids, generated_sub, ordered, rename, restrict, tdcl


# -- separating pair types ------------------------------------------------------------

def _decorate(k: AgeSpec, prob: DecorationProblem, relevant=(), check=None):
    for d in prob.solutions(relevant=relevant, check=check):
        if k.extra is None or k.extra(d):
            return d
    return None


def separating_decoration(k: AgeSpec, dbot: FinStructure, fixed, gens0, gens1):
    """A member D decorating ``dbot`` over ``fixed`` in which the tuples
    ``gens0`` and ``gens1`` have different quantifier-free types, or None."""
    prob = DecorationProblem(k.sig, dbot, k.constraints, fixed)

    def differs(d):
        return d is not None and not qftp_equal(GenTuple(d, tuple(gens0)), GenTuple(d, tuple(gens1)))

    corr = term_correspondence(dbot, gens0, dbot, gens1)
    if corr is None:
        d = _decorate(k, prob)
        return d if differs(d) else None
    dom = ordered(corr)
    for r in k.relational_excess:
        pools = [[x for x in dom if dbot.sort_of[x] == srt] for srt in k.sig.relations[r]]
        for t in itertools.product(*pools):
            u = tuple(corr[x] for x in t)
            if t == u:
                continue
            ft, fu = (r, t) not in prob.index, (r, u) not in prob.index
            if ft and fu:
                if ((t in prob.fixed_rels[r]) != (u in prob.fixed_rels[r])):
                    d = _decorate(k, prob)
                    return d if differs(d) else None
                continue
            d = _decorate(k, prob, relevant=[(r, t), (r, u)],
                          check=lambda s, r=r, t=t, u=u: (t in s.rels[r]) != (u in s.rels[r]))
            if differs(d):
                return d
    return None


# -- amalgamation of distinct 2-types ------------------------------------------------------

@dataclass
class TwoTypeConfig:
    a: FinStructure
    b: FinStructure
    c: FinStructure
    alpha: dict
    x0: str
    x1: str
    dbot: FinStructure | None = None

    def clause_failures(self, k: AgeSpec, sort: str) -> list[str]:
        """Names of the defining clauses that do not hold literally."""
        out = []
        a, b, c = self.a, self.b, self.c
        if not (k.member(a) and k.member(b) and k.member(c)):
            out.append("members")
        if not (a.elements <= b.elements and a.elements <= c.elements
                and b.elements & c.elements == a.elements):
            out.append("overlap")
        alpha = Embedding(b, c, self.alpha)
        if not (alpha.is_isomorphism and all(self.alpha[x] == x for x in a.elements)
                and is_embedding(alpha)):
            out.append("alpha")
        xs = (self.x0, self.x1)
        if self.x0 == self.x1 or any(b.sort_of.get(x) != sort or x in a.elements for x in xs):
            out.append("points")
        elif not qftp_equal(GenTuple(b, (self.x0,)), GenTuple(b, (self.x1,))):
            out.append("same type")
        return out

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "alpha": self.alpha,
                "x0": self.x0, "x1": self.x1, "dbot": self.dbot}


def mirror_copy(b: FinStructure, a_elems, avoid=()) -> tuple[FinStructure, dict]:
    """A copy of ``b`` meeting it exactly in ``a_elems``; returns it and α."""
    others = [x for x in b.ordered_elements() if x not in a_elems]
    fresh = fresh_ids("m", len(others), set(b.elements) | set(avoid))
    alpha = {x: x for x in a_elems}
    alpha.update(zip(others, fresh))
    return rename(b, alpha), alpha


def two_type_configs(k: AgeSpec, sort: str, n: int):
    """All (b, a, x0, x1) within the bound, with the mirror copy c = α(b)."""
    cache: dict = {}
    for b in k.enumerate(n).members:
        if sort not in b.sig.sorts:
            continue
        for sub in _subset_reps(b, _automorphisms(b, cache)):
            if len(sub) == len(b):
                continue
            pts = [x for x in ordered(b.carrier[sort]) if x not in sub]
            for x0, x1 in itertools.combinations(pts, 2):
                if not qftp_equal(GenTuple(b, (x0,)), GenTuple(b, (x1,))):
                    continue
                a = restrict(b, sub)
                c, alpha = mirror_copy(b, sub)
                yield {"a": a, "b": b, "c": c, "alpha": alpha, "x0": x0, "x1": x1}


def _two_type_instance(k: AgeSpec, cfg) -> bool:
    p = AmalgamProblem(cfg["a"], cfg["b"], cfg["c"])
    alpha = cfg["alpha"]
    gens0 = (cfg["x0"], alpha[cfg["x0"]])
    gens1 = (cfg["x1"], alpha[cfg["x1"]])
    dbots = [cfg["dbot"]] if cfg.get("dbot") is not None else dbot_candidates(k, p)
    for d in dbots:
        if separating_decoration(k, d, [p.b, p.c], gens0, gens1) is None:
            cfg["dbot"] = d
            return False
    return True


def check_distinct_2types(k: AgeSpec, n: int, sort: str | None = None, cap=None) -> PropertyReport:
    sort = sort or k.sig.sorts[0]
    en = k.enumerate(n)
    walk = _Walk("2types", k, n, _cap(k, cap), en.exhaustive, sort=sort)
    return walk.run(two_type_configs(k, sort, n), lambda c: _two_type_instance(k, c))


def brute_distinct_2types(k: AgeSpec, cfg) -> bool:
    """Slow audit: some decoration of some L⊥-amalgam separates the pair types."""
    p = AmalgamProblem(cfg["a"], cfg["b"], cfg["c"])
    alpha = cfg["alpha"]
    g0 = (cfg["x0"], alpha[cfg["x0"]])
    g1 = (cfg["x1"], alpha[cfg["x1"]])
    dbots = [cfg["dbot"]] if cfg.get("dbot") is not None else dbot_candidates(k, p)
    for d in dbots:
        if not any(not qftp_equal(GenTuple(D, g0), GenTuple(D, g1))
                   for D in k.decorations(d, fixed=[p.b, p.c])):
            return False
    return True


# -- pins ------------------------------------------------------------------------------------

def _pins_instance(k: AgeSpec, cfg) -> bool:
    a, sort = cfg["a"], cfg["sort"]
    fix = {x: x for x in a.carrier[sort]}
    for g in automorphisms(a, partial=fix):
        if not g.is_identity:
            cfg["witness"] = g.mapping
            return False
    return True


def check_pins(k: AgeSpec, n: int, sort: str | None = None, cap=None) -> PropertyReport:
    """Two isomorphisms agreeing on the sort agree everywhere; equivalently no
    member has a nontrivial automorphism fixing that sort pointwise."""
    sort = sort or k.sig.sorts[0]
    en = k.enumerate(n)
    configs = ({"a": a, "sort": sort} for a in en.members)
    return _Walk("pins", k, n, _cap(k, cap), en.exhaustive, sort=sort).run(
        configs, lambda c: _pins_instance(k, c))


def brute_pins(a: FinStructure, sort: str) -> bool:
    """Audit by comparing every pair of self-isomorphisms on the sort."""
    auts = automorphisms(a)
    for g, h in itertools.combinations(auts, 2):
        if all(g.mapping[x] == h.mapping[x] for x in a.carrier[sort]):
            return False
    return True


# -- splitting ----------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitFamily:
    """Parameters inside a base structure, all of one sort."""

    fset: frozenset
    sort: str
    provenance: str = ""

    def validate(self, base: FinStructure) -> None:
        bad = [x for x in self.fset if base.sort_of.get(x) != self.sort]
        if bad:
            raise ValueError(f"split family elements outside sort {self.sort}: {ordered(bad)}")


def members_over(k: AgeSpec, base: FinStructure, n: int):
    """Members whose L⊥-reduct is a substructure of ``base`` with rank ≤ n,
    with sampled decorations; yields (member, exhaustive)."""
    for sub in closed_subsets(base):
        a_bot = restrict(base, sub)
        if k.rank(a_bot) > n or not k.member_bot(a_bot):
            continue
        decs, complete = k.sample_decorations(a_bot)
        for d in decs:
            yield d, complete


def _split_configs(k: AgeSpec, fam: SplitFamily, base: FinStructure, pin: str, n: int, state: dict):
    for a, complete in members_over(k, base, n):
        state["exhaustive"] &= complete
        for x, y in itertools.combinations(ordered(a.carrier[pin]), 2):
            yield {"a": a, "x": x, "y": y}


def _split_instance(k: AgeSpec, cfg, fam: SplitFamily, base: FinStructure) -> bool:
    a, x, y = cfg["a"], cfg["x"], cfg["y"]
    # parameters outside A first: they leave the most room for a separating B
    zs = sorted(fam.fset, key=lambda z: (z in a.elements, ordered([z])))
    for z in zs:
        dbot = generated_sub(base, a.elements | {z})
        if not k.member_bot(dbot):
            continue
        d = separating_decoration(k, dbot, [a], (x, z), (y, z))
        if d is not None:
            cfg["z"], cfg["b"] = z, d
            return True
    return False


def check_splitting(k: AgeSpec, fam: SplitFamily, base: FinStructure, n: int,
                    pin: str | None = None, cap=None) -> PropertyReport:
    """Every pair of distinct pin-sort points of every A over ``base`` is
    separated by a parameter z from the family in some B ⊇ A over ``base``."""
    fam.validate(base)
    pin = pin or fam.sort
    state = {"exhaustive": True}
    walk = _Walk("splitting", k, n, _cap(k, cap), True, sort=pin, family=fam.provenance)
    if not fam.fset:
        r = walk.report
        r.verdict, r.note = "fail", "empty parameter family"
        r.counterexample = {"family": fam}
        return r
    r = walk.run(_split_configs(k, fam, base, pin, n, state), lambda c: _split_instance(k, c, fam, base))
    r.exhaustive &= state["exhaustive"]
    return r


# -- the equivalence of indistinguishable points ----------------------------------------------

def relational_reduct(s: FinStructure) -> FinStructure:
    """Forget the function symbols (the carrier is kept)."""
    sig = Signature(s.sig.sorts, dict(s.sig.relations), {})
    return FinStructure(sig, s.carrier, {}, s.rels)


def _incidence(s: FinStructure) -> dict:
    inc = {x: [] for x in s.elements}
    for r, ts in s.rels.items():
        for t in ts:
            for x in set(t):
                inc[x].append((r, t))
    return inc


def _swap_preserves(s: FinStructure, inc: dict, a: str, b: str) -> bool:
    sw = {a: b, b: a}
    for x in (a, b):
        for r, t in inc[x]:
            if tuple(sw.get(y, y) for y in t) not in s.rels[r]:
                return False
    return True


def equiv_classes(s: FinStructure, reduce: bool = False) -> list[list[str]]:
    """Partition of the carrier: a ≡ b when exchanging a and b (and fixing
    everything else) preserves every relation.

    Defined for relational signatures; with ``reduce`` a structure with
    function symbols is first replaced by its relational reduct.
    """
    if s.sig.functions:
        if not reduce:
            raise ValueError("≡ is defined for relational signatures only")
        s = relational_reduct(s)
    inc = _incidence(s)

    def invariant(x):
        counts = {}
        for r, t in inc[x]:
            key = (r, tuple(i for i, y in enumerate(t) if y == x))
            counts[key] = counts.get(key, 0) + 1
        return s.sort_of[x], tuple(sorted(counts.items()))

    buckets: dict = {}
    for x in s.ordered_elements():
        buckets.setdefault(invariant(x), []).append(x)
    classes = []
    for xs in buckets.values():
        rest = list(xs)
        while rest:
            head, rest = rest[0], rest[1:]
            cls = [head] + [y for y in rest if _swap_preserves(s, inc, head, y)]
            rest = [y for y in rest if y not in cls]
            classes.append(cls)
    classes.sort(key=lambda c: (-len(c), ordered(c)))
    return [ordered(c) for c in classes]


class InternalFault(RuntimeError):
    pass


def class_permutation_automorphism(s: FinStructure, cls, perm: dict) -> Embedding:
    """The permutation ``perm`` of an ≡-class extended by the identity."""
    cls = set(cls)
    if set(perm) != cls or set(perm.values()) != cls:
        raise ValueError("perm must permute the class")
    mapping = {x: perm.get(x, x) for x in s.elements}
    e = Embedding(s, s, mapping)
    if not is_automorphism(e):
        raise InternalFault("class permutation failed the automorphism recheck")
    return e


# -- automorphism hunts ----------------------------------------------------------------------

@dataclass
class RigidityReport:
    structure: str
    status: str  # "witness", "none-found" or "budget-exhausted"
    nodes: int
    budget: int
    witness: dict | None = None
    complete: bool = False
    symmetric_factor: int = 1
    classes: list = field(default_factory=list)
    certificates: list = field(default_factory=list)
    log: list = field(default_factory=list)

    def line(self) -> str:
        if self.status == "witness":
            moved = sorted(x for x, y in self.witness.items() if x != y)
            head = f"nontrivial automorphism found, moving {len(moved)} elements"
        elif self.status == "none-found":
            head = "no nontrivial automorphism found within budget"
            if self.complete:
                head += " (search space exhausted)"
        else:
            head = "no nontrivial automorphism found before the budget ran out"
        return f"{self.structure}: {head} [{self.nodes}/{self.budget} nodes]"


def rigidity_report(g: FinStructure, budget: int = 10 ** 6, name: str = "G",
                    certificates=()) -> RigidityReport:
    """Hunt for a nontrivial automorphism of ``g``.

    Level i looks for an automorphism fixing x_0..x_{i-1} and moving x_i;
    a nontrivial automorphism is found at the level of the first point it
    moves.  Points in the closure of earlier points are skipped.  The report
    is evidence about this finite structure only.
    """
    rep = RigidityReport(name, "none-found", 0, budget, certificates=list(certificates))
    for c in rep.certificates:
        rep.log.append(f"certificate: {c}")
    if g.sig.relations:
        rel = g if not g.sig.functions else relational_reduct(g)
        if g.sig.functions:
            rep.log.append("≡-classes computed on the relational reduct")
        rep.classes = [c for c in equiv_classes(rel) if len(c) > 1]
        if g.sig.functions:
            # a class permutation must also respect the functions to count
            rep.classes = [c for c in rep.classes
                           if _respects_functions(g, c)]
        rep.symmetric_factor = math.prod(math.factorial(len(c)) for c in rep.classes)
    if rep.classes:
        cls = rep.classes[0]
        e = class_permutation_automorphism(g, cls,
                                           dict(zip(cls, cls[1:] + cls[:1])))
        rep.status, rep.witness = "witness", dict(e.mapping)
        rep.log.append(f"≡-class of size {len(cls)} gives a symmetric factor")
        return rep
    order = g.ordered_elements()
    fixed: dict = {}
    closed: set = set(tdcl(g, ()))
    for x in order:
        if x in closed:
            fixed[x] = x
            continue
        for y in order:
            if y == x or g.sort_of[y] != g.sort_of[x] or y in fixed:
                continue
            left = budget - rep.nodes
            if left <= 0:
                rep.status = "budget-exhausted"
                return rep
            m = _Matcher(g, g, iso=True, partial={**fixed, x: y}, budget=left)
            try:
                found = next(iter(m.run()), None)
            except BudgetExceeded:
                rep.nodes = budget
                rep.status = "budget-exhausted"
                return rep
            rep.nodes += max(m.nodes, 1)
            if found is not None:
                e = Embedding(g, g, found)
                if not is_automorphism(e):
                    raise InternalFault("automorphism witness failed the recheck")
                rep.status, rep.witness = "witness", dict(found)
                return rep
        fixed[x] = x
        closed = set(tdcl(g, fixed))
        for z in closed:
            fixed[z] = z
    rep.complete = True
    return rep


def _respects_functions(g: FinStructure, cls) -> bool:
    cls = list(cls)
    if len(cls) < 2:
        return True
    sw = {cls[0]: cls[1], cls[1]: cls[0]}
    e = Embedding(g, g, {x: sw.get(x, x) for x in g.elements})
    return is_automorphism(e)


register_instance("2types", _two_type_instance, check_distinct_2types)
register_instance("pins", _pins_instance, check_pins)
