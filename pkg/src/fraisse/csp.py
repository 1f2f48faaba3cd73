"""Relation decorations as boolean constraint problems.

Given an L⊥-structure ``dbot`` and members ``b``, ``c`` whose L⊥-reducts sit
inside it, the unknowns are the (L∖L⊥)-tuples of ``dbot`` that lie neither
inside ``b`` nor inside ``c``.  Tuples inside ``b`` or ``c`` are fixed by those
structures.  Constraints ground to CNF over the unknowns, and a small DPLL
solver enumerates solutions.

The solver decides variables in a fixed canonical order, trying False first,
so the first solution is the sparsest one in lexicographic order (the free
decoration when it is admissible) and enumeration is deterministic.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .constraints import Constraint, Context
from .signature import Signature
from .structure import FinStructure, expand, tuple_key


class Solver:
    """DPLL with unit propagation over clauses given as lists of nonzero ints."""

    def __init__(self, nvars: int, clauses: Sequence[Sequence[int]]):
        self.n = nvars
        self.clauses = [list(c) for c in clauses]
        self.occ = [[] for _ in range(2 * nvars + 2)]
        self.units = []
        self.unsat = False
        self.budget_hit = False
        for i, c in enumerate(self.clauses):
            if not c:
                self.unsat = True
            elif len(c) == 1:
                self.units.append(c[0])
            for lit in c:
                self.occ[self._slot(-lit)].append(i)

    def _slot(self, lit):
        return 2 * abs(lit) + (lit < 0)

    def _propagate(self, val, trail, lits) -> bool:
        queue = list(lits)
        while queue:
            lit = queue.pop()
            v = abs(lit)
            want = 1 if lit > 0 else -1
            if val[v]:
                if val[v] != want:
                    return False
                continue
            val[v] = want
            trail.append(v)
            # clauses in which lit's negation occurs may have become unit
            for ci in self.occ[self._slot(lit)]:
                free = None
                nfree = 0
                sat = False
                for x in self.clauses[ci]:
                    vx = val[abs(x)]
                    if vx == 0:
                        nfree += 1
                        free = x
                        if nfree > 1:
                            break
                    elif (vx > 0) == (x > 0):
                        sat = True
                        break
                if sat or nfree > 1:
                    continue
                if nfree == 0:
                    return False
                queue.append(free)
        return True

    def solutions(self, order: Sequence[int] | None = None, phase: Callable[[int], bool] | None = None,
                  prefix: int = 0, check: Callable[[list], bool] | None = None,
                  budget: int | None = None) -> Iterator[list[int]]:
        """Enumerate solutions as value arrays (index v holds +1/-1).

        ``order`` fixes the decision order and ``phase(v)`` the first value
        tried.  When ``prefix`` > 0, ``check`` is consulted once the first
        ``prefix`` variables of ``order`` are decided; each accepted prefix
        yields a single completion.
        """
        if self.unsat:
            return
        order = list(order) if order is not None else list(range(1, self.n + 1))
        phase = phase or (lambda v: False)
        val = [0] * (self.n + 1)
        trail: list[int] = []
        if not self._propagate(val, trail, self.units):
            return
        frames = []  # (trail mark, position in order, flipped?)
        checked = prefix == 0
        nodes = 0

        def undo(mark):
            while len(trail) > mark:
                val[trail.pop()] = 0

        def backtrack():
            nonlocal checked
            while frames:
                mark, pos, flipped = frames.pop()
                v = order[pos]
                first = 1 if phase(v) else -1
                undo(mark)
                if pos < prefix:
                    checked = False
                if flipped:
                    continue
                frames.append((mark, pos, True))
                if self._propagate(val, trail, [-first * v]):
                    return True
            return False

        pos = 0
        while True:
            nodes += 1
            if budget is not None and nodes > budget:
                self.budget_hit = True
                return
            while pos < len(order) and val[order[pos]]:
                pos += 1
            conflict = False
            if not checked and (pos >= prefix):
                checked = True
                if check is not None and not check(val):
                    conflict = True
            if not conflict and pos == len(order):
                yield list(val)
                if prefix:
                    # one completion per accepted prefix
                    while frames and frames[-1][1] >= prefix:
                        undo(frames.pop()[0])
                conflict = True
            elif not conflict:
                v = order[pos]
                frames.append((len(trail), pos, False))
                lit = v if phase(v) else -v
                if not self._propagate(val, trail, [lit]):
                    conflict = True
            if conflict:
                if not backtrack():
                    return
                pos = frames[-1][1]

    def solve(self, **kw) -> list[int] | None:
        return next(iter(self.solutions(**kw)), None)


@dataclass
class DecorationProblem:
    """Admissible (L∖L⊥)-decorations of ``dbot`` extending ``fixed`` members."""

    sig: Signature
    dbot: FinStructure
    constraints: Sequence[Constraint]
    fixed: Sequence[FinStructure] = ()
    unknowns: list = field(default_factory=list)
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        self.extra = self.sig.extra_relations(self.dbot.sig)
        if set(self.sig.functions) != set(self.dbot.sig.functions):
            raise ValueError("decorations add relations only; functions must all be in the base signature")
        self.regions = [f.elements for f in self.fixed]
        # the largest fixed part goes last: grounding enumerates around it
        self.regions.sort(key=len)
        self.fixed_rels = {r: set() for r in self.extra}
        for f in self.fixed:
            for r in self.extra:
                self.fixed_rels[r] |= set(f.rels[r])
        for r in self.extra:
            for t in self._new_tuples(r):
                self.unknowns.append((r, t))
        self.unknowns.sort(key=lambda rt: (rt[0], tuple_key(rt[1])))
        self.index = {rt: i + 1 for i, rt in enumerate(self.unknowns)}
        skeleton = expand(self.dbot, self.sig, self.fixed_rels)
        self.skeleton = skeleton
        ctx = Context(skeleton, self.index, self.regions)
        self.cnf = []
        for c in self.constraints:
            self.cnf.extend(c.ground(ctx))
        self.solver = Solver(len(self.unknowns), self.cnf)

    def _new_tuples(self, r):
        s = self.dbot
        sorts = self.sig.relations[r]
        ctx = Context(s, inside=self.regions)
        for pools in ctx.pools(sorts):
            for t in itertools.product(*pools):
                if not ctx.within_region(t):
                    yield t

    def structure(self, val: list[int]) -> FinStructure:
        rels = {r: set(ts) for r, ts in self.fixed_rels.items()}
        for (r, t), i in self.index.items():
            if val[i] > 0:
                rels[r].add(t)
        return expand(self.dbot, self.sig, rels)

    def solutions(self, limit: int | None = None, rng: random.Random | None = None,
                  relevant: Sequence = (), check: Callable | None = None,
                  budget: int | None = None) -> Iterator[FinStructure]:
        """Decorated structures; ``relevant`` tuples are decided first and
        ``check`` (on a partial structure over them) filters before completion."""
        order = list(range(1, len(self.unknowns) + 1))
        prefix = 0
        wrapped = None
        if relevant:
            front = [self.index[rt] for rt in relevant if rt in self.index]
            seen = set(front)
            order = front + [v for v in order if v not in seen]
            prefix = len(front)
            if check is not None:
                wrapped = lambda val: check(self.structure(val))  # noqa: E731
        phase = None
        if rng is not None:
            bits = {v: rng.random() < 0.5 for v in order}
            phase = bits.__getitem__
        count = 0
        for val in self.solver.solutions(order=order, phase=phase, prefix=prefix,
                                         check=wrapped, budget=budget):
            yield self.structure(val)
            count += 1
            if limit is not None and count >= limit:
                return
