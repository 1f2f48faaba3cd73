"""Finite stages of generic structures.

A ``GrowableBase`` holds an L⊥-structure that only ever grows.  The builder
keeps a chain of conditions, members of the age whose L⊥-reducts sit inside
the base, and processes two kinds of requirements in rounds:

* ``RealizeB(B)``: some copy of B lies in the condition;
* ``ExtendPair(A ⊆ B, e)``: the embedding ``e`` of A into the condition
  extends to B.

An unmet requirement is realized by finding room for B in the base (or
growing the base through the oracle) and decorating the generated L⊥-part
with a seeded random admissible decoration.  Every requirement listed in a
round is settled within that round, which is the published schedule.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .ages import AgeSpec
from .embeddings import find_embeddings, find_isomorphism, iter_embeddings
from .properties import PropertyReport
from .structure import (FinStructure, fresh_ids, generated_sub, is_substructure, ordered, reduct,
                        rename, restrict, tdcl, union)


class OracleFailure(RuntimeError):
    pass


# -- the base ---------------------------------------------------------------------

@dataclass
class GrowableBase:
    kbot: AgeSpec
    current: FinStructure
    seed: int = 0
    allow: Callable[[FinStructure], bool] | None = None
    log: list = field(default_factory=list)

    @classmethod
    def start(cls, kbot: AgeSpec, seed: int = 0, allow=None, initial: FinStructure | None = None):
        cur = initial if initial is not None else kbot.oracle.initial(kbot.subsig)
        return cls(kbot, cur, seed, allow, [cur])

    def admits(self, s: FinStructure) -> bool:
        return self.kbot.member_bot(s) and (self.allow is None or self.allow(s))

    def amalgamate(self, a_elems, e_bot: FinStructure) -> dict | None:
        """Add a copy of ``e_bot`` over the closed set ``a_elems`` of the base.

        ``e_bot`` must contain ``restrict(current, a_elems)`` literally.
        Returns the renaming of ``e_bot`` into the new base, or None when no
        admissible amalgam exists."""
        cur = self.current
        a = restrict(cur, a_elems)
        others = [x for x in e_bot.ordered_elements() if x not in a.elements]
        fresh = fresh_ids("g", len(others), set(cur.elements) | set(e_bot.elements))
        mp = dict(zip(others, fresh))
        e2 = rename(e_bot, mp)
        for d in self.kbot.oracle.amalgams(a, cur, e2):
            if is_substructure(cur, d) and is_substructure(e2, d) and self.admits(d):
                self.current = d
                self.log.append(d)
                return {**{x: x for x in a.elements}, **mp}
        return None


def grow_base(g: GrowableBase, steps: int, width: int = 1) -> list[dict]:
    """Perform ``steps`` fresh extension moves, round-robin over the closures
    of at most ``width`` elements and their one-point extensions.  Returns
    the certificate: one entry per move."""
    cert = []
    done = 0
    rnd = 0
    while done < steps:
        cur = g.current
        seeds = [()] + [(x,) for x in cur.ordered_elements()]
        if width > 1:
            seeds += [tuple(c) for c in _pairs(cur.ordered_elements())]
        moved = False
        for seed in seeds:
            if done >= steps:
                break
            x = tdcl(g.current, seed)
            for ext in g.kbot.oracle.extensions(restrict(g.current, x)):
                if done >= steps:
                    break
                mp = g.amalgamate(x, ext)
                entry = {"round": rnd, "over": ordered(x), "status": "met" if mp else "blocked"}
                if mp is not None:
                    entry["new"] = ordered(set(mp.values()) - x)
                    done += 1
                    moved = True
                cert.append(entry)
        rnd += 1
        if not moved:
            break
    return cert


def _pairs(xs):
    for i, x in enumerate(xs):
        for y in xs[i + 1:]:
            yield (x, y)


# -- conditions and requirements -------------------------------------------------------

@dataclass(frozen=True)
class Condition:
    structure: FinStructure
    stage: int


@dataclass
class Requirement:
    kind: str  # "realize" or "extend"
    b: FinStructure
    a: FinStructure
    embedding: dict
    round: int
    index: int
    status: str = "pending"
    step: int | None = None

    def describe(self) -> dict:
        return {"kind": self.kind, "round": self.round, "index": self.index, "status": self.status,
                "step": self.step, "a": ordered(self.a.elements), "b": ordered(self.b.elements),
                "embedding": dict(sorted(self.embedding.items()))}


@dataclass
class BuildResult:
    generic: FinStructure
    base: GrowableBase
    chain: list
    certificate: list
    closed: bool
    steps: int

    def summary(self) -> str:
        met = sum(1 for r in self.certificate if r["status"] in ("met", "extended"))
        blocked = sum(1 for r in self.certificate if r["status"] == "blocked")
        state = "closed" if self.closed else "budget reached"
        return (f"{len(self.generic)} elements after {self.steps} extension moves ({state}); "
                f"{met} requirements met, {blocked} blocked by the base")


class Builder:
    """Condition chain meeting RealizeB and ExtendPair requirements fairly."""

    def __init__(self, k: AgeSpec, base: GrowableBase, n: int, seed: int = 0,
                 room_tries: int = 8):
        self.k = k
        self.base = base
        self.n = n
        self.rng = random.Random(seed)
        self.room_tries = room_tries
        self.members = k.enumerate(n).members
        self._exts: dict = {}
        init_bot = generated_sub(base.current, ())
        first = next(iter(k.decorations(init_bot, limit=1)), None)
        if first is None:
            raise OracleFailure("the structure generated by the empty set has no admissible decoration")
        self.p = first
        self.chain = [Condition(first, 0)]
        self.certificate: list = []
        self.steps = 0

    def extensions_of(self, a: FinStructure):
        if id(a) not in self._exts:
            self._exts[id(a)] = self.k.one_point_extensions(a)[0]
        return self._exts[id(a)]

    # requirements ------------------------------------------------------------

    def round_requirements(self, rnd: int):
        idx = 0
        p = self.p
        gp = generated_sub(p, ())
        for b in self.members:
            a = generated_sub(b, ())
            e = find_isomorphism(a, gp)
            if e is not None:
                yield Requirement("realize", b, a, dict(e.mapping), rnd, idx)
                idx += 1
        for a in self.members:
            for e in iter_embeddings(a, p):
                for b in self.extensions_of(a):
                    yield Requirement("extend", b, a, dict(e.mapping), rnd, idx)
                    idx += 1

    def met(self, req: Requirement) -> bool:
        return bool(find_embeddings(req.b, self.p, limit=1, partial=req.embedding))

    # realization ----------------------------------------------------------------

    def _decorate(self, b_bot_map: dict, req: Requirement) -> FinStructure | None:
        """Decorate the base part generated by the condition and the image of B."""
        b2 = rename(req.b, b_bot_map)
        dbot = generated_sub(self.base.current, self.p.elements | b2.elements)
        for d in self.k.decorations(dbot, fixed=[self.p, b2], limit=1, rng=self.rng):
            return d
        return None

    def realize(self, req: Requirement) -> FinStructure | None:
        cur = self.base.current
        b_bot = reduct(req.b, self.k.subsig)
        avoid = self.p.elements - set(req.embedding.values())
        tries = 0
        for e in iter_embeddings(b_bot, cur, partial=req.embedding, avoid=avoid):
            tries += 1
            d = self._decorate(dict(e.mapping), req)
            if d is not None:
                return d
            if tries >= self.room_tries:
                break
        # grow the base over the image of A
        a_img = set(req.embedding.values())
        others = [x for x in b_bot.ordered_elements() if x not in req.a.elements]
        tmp = fresh_ids("q", len(others), set(cur.elements) | set(b_bot.elements))
        pre = {**req.embedding, **dict(zip(others, tmp))}
        e_bot = rename(b_bot, pre)
        mp = self.base.amalgamate(tdcl(cur, a_img), e_bot)
        if mp is None:
            return None
        full = {x: mp[pre[x]] for x in req.b.elements}
        return self._decorate(full, req)

    def step(self, req: Requirement) -> None:
        if self.met(req):
            req.status = "met"
            return
        d = self.realize(req)
        if d is None:
            req.status = "blocked"
            return
        self.steps += 1
        self.p = d
        self.chain.append(Condition(d, self.steps))
        req.status, req.step = "extended", self.steps

    def run(self, steps: int, max_rounds: int | None = None) -> BuildResult:
        rnd = 0
        closed = False
        while self.steps < steps and (max_rounds is None or rnd < max_rounds):
            progressed = False
            for req in self.round_requirements(rnd):
                if self.steps >= steps:
                    break
                before = self.steps
                self.step(req)
                progressed |= self.steps > before
                self.certificate.append(req.describe())
            else:
                if not progressed:
                    closed = True
                    break
            rnd += 1
        return BuildResult(self.p, self.base, self.chain, self.certificate, closed, self.steps)


def build_generic(k: AgeSpec, base: GrowableBase | None = None, steps: int = 100, seed: int = 0,
                  n: int = 2, max_rounds: int | None = None) -> BuildResult:
    if base is None:
        base = GrowableBase.start(k.bot(), seed=seed)
    return Builder(k, base, n, seed).run(steps, max_rounds)


# -- verification -------------------------------------------------------------------------

def verify_fr_axioms(g: FinStructure, k: AgeSpec, n: int, cap=None) -> PropertyReport:
    """(a) every member of rank ≤ n embeds in g; (b) every embedding of a
    member A of rank ≤ n into g extends along every one-point extension of A."""
    en = k.enumerate(n)
    rep = PropertyReport("fr", k.name, n, "pass", en.exhaustive)
    for b in en.members:
        rep.checked += 1
        if not find_embeddings(b, g, limit=1):
            rep.verdict = "fail"
            rep.counterexample = {"clause": "a", "b": b}
            return rep
    for a in en.members:
        exts, complete = k.one_point_extensions(a)
        rep.exhaustive &= complete
        for e in iter_embeddings(a, g):
            for b in exts:
                rep.checked += 1
                if not find_embeddings(b, g, limit=1, partial=e.mapping):
                    rep.verdict = "fail"
                    rep.counterexample = {"clause": "b", "a": a, "b": b, "embedding": dict(e.mapping)}
                    return rep
                if cap is not None and rep.checked >= cap:
                    rep.exhaustive = False
                    rep.note = f"stopped after {cap} instances"
                    return rep
    return rep


def chain_unions_are_conditions(result: BuildResult, k: AgeSpec) -> tuple[int, int]:
    """For every prefix of the logged chain: the union is a member and its
    L⊥-reduct is a substructure of the final base.  Returns (ok, total)."""
    ok = 0
    conds = [c.structure for c in result.chain]
    for i in range(1, len(conds) + 1):
        u = union(conds[:i])
        if k.member(u) and is_substructure(reduct(u, k.subsig), result.base.current):
            ok += 1
    return ok, len(conds)


def chain_is_monotone(result: BuildResult) -> bool:
    conds = [c.structure for c in result.chain]
    return all(is_substructure(x, y) for x, y in zip(conds, conds[1:]))
