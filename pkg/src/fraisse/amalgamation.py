"""Disjoint, free and extended strong amalgams."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .ages import AgeSpec
from .embeddings import Embedding, find_embeddings
from .structure import (FinStructure, StructureError, fresh_ids, is_substructure, reduct, rename,
                        restrict, tdcl, union)


class AmalgamationError(ValueError):
    pass


@dataclass(frozen=True)
class AmalgamProblem:
    """``a ⊆ b``, ``a ⊆ c`` with ``carrier(b) ∩ carrier(c) = carrier(a)``."""

    a: FinStructure
    b: FinStructure
    c: FinStructure

    def __post_init__(self):
        for x in (self.b, self.c):
            if not is_substructure(self.a, x):
                raise AmalgamationError("a is not a substructure of both sides")
        if self.b.elements & self.c.elements != self.a.elements:
            raise AmalgamationError("sides overlap outside a")

    @property
    def overlap(self) -> set[str]:
        return self.b.elements & self.c.elements


@dataclass(frozen=True)
class ExtendedProblem:
    base: AmalgamProblem
    dbot: FinStructure

    def __post_init__(self):
        p = self.base
        sub = self.dbot.sig
        for x in (p.b, p.c):
            if not is_substructure(reduct(x, sub), self.dbot):
                raise AmalgamationError("dbot does not contain the L⊥-reduct of a side")
        if tdcl(self.dbot, p.b.elements | p.c.elements) != self.dbot.elements:
            raise AmalgamationError("dbot is not generated by the union of the sides")


def normalize_disjoint(b: FinStructure, c: FinStructure, a: FinStructure,
                       into_b: Embedding | None = None, into_c: Embedding | None = None) -> AmalgamProblem:
    """Rename so that ``a`` literally sits in both sides and they meet only in ``a``.

    The result keeps ``a``'s ids; ``b``'s other elements keep theirs and
    ``c``'s other elements get fresh ids.
    """
    if into_b is None:
        found = find_embeddings(a, b, limit=1)
        if not found:
            raise AmalgamationError("a does not embed in b")
        into_b = found[0]
    if into_c is None:
        found = find_embeddings(a, c, limit=1)
        if not found:
            raise AmalgamationError("a does not embed in c")
        into_c = found[0]
    # move b so that the image of a carries a's ids
    inv_b = {y: x for x, y in into_b.mapping.items()}
    clashing = [x for x in b.ordered_elements() if x not in inv_b and x in a.elements]
    fresh_b = fresh_ids("b", len(clashing), a.elements | b.elements | c.elements)
    b2 = rename(b, {**inv_b, **dict(zip(clashing, fresh_b))})
    inv_c = {y: x for x, y in into_c.mapping.items()}
    c_others = [x for x in c.ordered_elements() if x not in inv_c]
    fresh_c = fresh_ids("c", len(c_others), b2.elements | c.elements | a.elements)
    c2 = rename(c, {**inv_c, **dict(zip(c_others, fresh_c))})
    return AmalgamProblem(a, b2, c2)


def free_amalgam(p: AmalgamProblem) -> FinStructure:
    """Union of the two sides; raises when the union is not term-closed."""
    b, c = p.b, p.c
    carrier = b.elements | c.elements
    for f, (dom, _) in b.sig.functions.items():
        pools = [[x for x in carrier if b.sort_of.get(x, c.sort_of.get(x)) == d] for d in dom]
        for args in itertools.product(*pools):
            if args not in b.funcs[f] and args not in c.funcs[f]:
                raise AmalgamationError(f"not term-closed: {f}{args} is undefined on the union")
    try:
        return union([b, c])
    except StructureError as exc:
        raise AmalgamationError(str(exc)) from None


def dbot_candidates(k: AgeSpec, p: AmalgamProblem) -> list[FinStructure]:
    """L⊥-amalgams generated by the union of the sides, from the age's oracle."""
    rb, rc, ra = k.reduct(p.b), k.reduct(p.c), k.reduct(p.a)
    out = []
    for d in k.oracle.amalgams(ra, rb, rc):
        if is_substructure(rb, d) and is_substructure(rc, d) and k.member_bot(d):
            out.append(d)
    return out


def extended_amalgams(p: ExtendedProblem, k: AgeSpec, limit: int | None = 1, rng=None,
                      relevant=(), check=None, budget=None) -> list[FinStructure]:
    """Members D with b, c ⊆ D and D↾L⊥ = dbot (up to ``limit``), canonical order."""
    return list(k.decorations(p.dbot, fixed=[p.base.b, p.base.c], limit=limit, rng=rng,
                              relevant=relevant, check=check, budget=budget))


def strong_amalgams(k: AgeSpec, p: AmalgamProblem, limit: int | None = 1) -> list[FinStructure]:
    """Disjoint amalgams of ``p`` in ``k`` over every candidate L⊥-amalgam."""
    out = []
    for d in dbot_candidates(k, p):
        need = None if limit is None else limit - len(out)
        out.extend(extended_amalgams(ExtendedProblem(p, d), k, limit=need))
        if limit is not None and len(out) >= limit:
            break
    return out


def identifications(p: AmalgamProblem) -> list[AmalgamProblem]:
    """Problems obtained by identifying elements of ``c∖a`` with elements of
    ``b∖a`` (sort-respecting partial injections), whenever both sides stay
    consistent; the trivial identification comes first."""
    b, c, a = p.b, p.c, p.a
    bs = [x for x in b.ordered_elements() if x not in a.elements]
    cs = [x for x in c.ordered_elements() if x not in a.elements]
    out = []

    def extend(i, mapping, used):
        if i == len(cs):
            yield dict(mapping)
            return
        x = cs[i]
        yield from extend(i + 1, mapping, used)
        for y in bs:
            if y not in used and b.sort_of[y] == c.sort_of[x]:
                mapping[x] = y
                used.add(y)
                yield from extend(i + 1, mapping, used)
                del mapping[x]
                used.discard(y)

    for mp in extend(0, {}, set()):
        c2 = rename(c, mp)
        shared = b.elements & c2.elements
        sb, sc = restrict(b, shared), restrict(c2, shared)
        if sb != sc or tdcl(b, shared) != shared or tdcl(c2, shared) != shared:
            continue
        try:
            out.append(AmalgamProblem(sb, b, c2))
        except AmalgamationError:
            continue
    return out
