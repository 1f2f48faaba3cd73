"""Universal constraints defining ages, and their grounding to CNF.

A universal clause reads ``body -> head``: every atom of the body true implies
some atom of the head true (an empty head means the body is contradictory).
Atoms are relation atoms or equalities between terms.

Grounding is shared by two consumers.  Membership evaluates every clause
instance on a finished structure.  Decoration search (``csp``) evaluates the
same instances on a partially decided structure, in which some relation
tuples are boolean unknowns, and emits the undecided instances as CNF.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .signature import Signature
from .structure import FinStructure


class ConstraintError(ValueError):
    pass


# -- terms and atoms --------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple = ()

    def __str__(self):
        return f"({self.fn}{''.join(' ' + str(a) for a in self.args)})" if self.args else self.fn


@dataclass(frozen=True)
class Eq:
    left: object
    right: object

    def __str__(self):
        return f"(= {self.left} {self.right})"


@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple

    def __str__(self):
        return f"({self.rel} {' '.join(map(str, self.args))})"


def term_vars(t) -> list[str]:
    if isinstance(t, Var):
        return [t.name]
    out = []
    for a in t.args:
        for v in term_vars(a):
            if v not in out:
                out.append(v)
    return out


def atom_terms(a) -> tuple:
    return (a.left, a.right) if isinstance(a, Eq) else a.args


def eval_term(t, env: dict, s: FinStructure) -> str:
    if isinstance(t, Var):
        return env[t.name]
    return s.funcs[t.fn][tuple(eval_term(a, env, s) for a in t.args)]


def compile_term(t, s: FinStructure) -> Callable[[dict], str]:
    """``eval_term`` specialised to ``t`` and the tables of ``s``."""
    if isinstance(t, Var):
        name = t.name
        return lambda env: env[name]
    table = s.funcs[t.fn]
    if not t.args:
        val = table[()]
        return lambda env: val
    subs = [compile_term(a, s) for a in t.args]
    if len(subs) == 1:
        f0 = subs[0]
        return lambda env: table[(f0(env),)]
    if len(subs) == 2:
        f0, f1 = subs
        return lambda env: table[(f0(env), f1(env))]
    return lambda env: table[tuple(f(env) for f in subs)]


# -- evaluation context -------------------------------------------------------

class Context:
    """Truth values of atoms in a (possibly partially decided) structure.

    ``unknown`` maps (relation, tuple) to a positive CNF variable; every other
    tuple takes its value from ``s``.  ``inside`` lists carriers on which every
    constraint is already known to hold, so groundings entirely within one of
    them are skipped.
    """

    def __init__(self, s: FinStructure, unknown=None, inside: Sequence[set] = ()):
        self.s = s
        self.unknown = unknown or {}
        self.inside = [set(x) for x in inside]

    def rel_value(self, rel, t):
        v = self.unknown.get((rel, t))
        if v is not None:
            return v
        return t in self.s.rels[rel]

    def pools(self, sorts: Sequence[str]):
        """Variable value pools: one list of pool-tuples per grounding pass.

        Without regions this is a single pass over the full carriers.  With
        regions, the last region plays the role of the large fixed part: the
        passes cover exactly the assignments using some element outside it.
        """
        full = [self.s.carrier[srt] for srt in sorts]
        if not self.inside:
            return [full]
        big = self.inside[-1]
        inner = [[x for x in pool if x in big] for pool in full]
        outer = [[x for x in pool if x not in big] for pool in full]
        return [inner[:j] + [outer[j]] + full[j + 1:] for j in range(len(sorts))]

    def within_region(self, values) -> bool:
        return any(all(v in reg for v in values) for reg in self.inside)


# -- constraints ----------------------------------------------------------------

class Constraint:
    """Interface: ``symbols``, ``violations`` and ``ground``."""

    label = "constraint"

    def symbols(self) -> set[str]:
        raise NotImplementedError

    def violations(self, s: FinStructure, limit: int = 1) -> list[str]:
        out = []
        ctx = Context(s)
        for cl in self.ground(ctx):
            if not cl:
                out.append(self.label)
                if len(out) >= limit:
                    break
        return out

    def holds(self, s: FinStructure) -> bool:
        return not self.violations(s, limit=1)

    def ground(self, ctx: Context) -> Iterable[list[int]]:
        """Undecided instances as CNF clauses; ``[]`` marks a violated instance."""
        raise NotImplementedError

    def check_signature(self, sig: Signature) -> None:
        pass


@dataclass(frozen=True)
class Clause(Constraint):
    body: tuple = ()
    head: tuple = ()
    label: str = "clause"
    sorts: tuple = field(default=(), compare=False)  # (var, sort) pairs, filled by bind()

    def __str__(self):
        b = " ".join(map(str, self.body))
        h = " ".join(map(str, self.head)) if self.head else "false"
        return f"(-> ({b}) {h})" if self.body else f"(-> () {h})"

    def symbols(self):
        out = set()

        def walk(t):
            if isinstance(t, App):
                out.add(t.fn)
                for a in t.args:
                    walk(a)
        for a in (*self.body, *self.head):
            if isinstance(a, Atom):
                out.add(a.rel)
            for t in atom_terms(a):
                walk(t)
        return out

    def variables(self) -> list[str]:
        out = []
        for a in (*self.body, *self.head):
            for t in atom_terms(a):
                for v in term_vars(t):
                    if v not in out:
                        out.append(v)
        return out

    def infer_sorts(self, sig: Signature) -> dict[str, str]:
        """Sort of every variable; raises ``ConstraintError`` when ill-sorted."""
        found: dict[str, str] = {}

        def need(t, srt):
            if isinstance(t, Var):
                if srt is None:
                    return
                if found.setdefault(t.name, srt) != srt:
                    raise ConstraintError(f"variable {t.name} used at sorts {found[t.name]} and {srt}")
                return
            got = sort_of_term(t)
            if srt is not None and got != srt:
                raise ConstraintError(f"term {t} has sort {got}, expected {srt}")

        def sort_of_term(t):
            if isinstance(t, Var):
                return found.get(t.name)
            if t.fn not in sig.functions:
                raise ConstraintError(f"undeclared function {t.fn}")
            dom, cod = sig.functions[t.fn]
            if len(dom) != len(t.args):
                raise ConstraintError(f"arity mismatch for {t.fn}: {len(t.args)} arguments, expected {len(dom)}")
            for a, d in zip(t.args, dom):
                need(a, d)
            return cod

        for _ in range(2):
            for a in (*self.body, *self.head):
                if isinstance(a, Atom):
                    if a.rel not in sig.relations:
                        raise ConstraintError(f"undeclared relation {a.rel}")
                    ar = sig.relations[a.rel]
                    if len(ar) != len(a.args):
                        raise ConstraintError(f"arity mismatch for {a.rel}: {len(a.args)} arguments, expected {len(ar)}")
                    for t, srt in zip(a.args, ar):
                        need(t, srt)
                else:
                    ls, rs = sort_of_term(a.left), sort_of_term(a.right)
                    if ls and rs and ls != rs:
                        raise ConstraintError(f"equation {a} compares sorts {ls} and {rs}")
                    need(a.left, ls or rs)
                    need(a.right, ls or rs)
        for v in self.variables():
            if v not in found:
                if len(sig.sorts) == 1:
                    found[v] = sig.sorts[0]
                else:
                    raise ConstraintError(f"cannot infer the sort of variable {v}")
        return found

    def bind(self, sig: Signature) -> "Clause":
        srt = self.infer_sorts(sig)
        return Clause(self.body, self.head, self.label, tuple((v, srt[v]) for v in self.variables()))

    def check_signature(self, sig):
        self.infer_sorts(sig)

    # grounding ------------------------------------------------------------

    def _plan(self, names):
        """Group literals by the position of their last variable."""
        pos = {v: i for i, v in enumerate(names)}
        plan = [[] for _ in range(len(names) + 1)]
        for polarity, atoms in ((False, self.body), (True, self.head)):
            for a in atoms:
                vs = [v for t in atom_terms(a) for v in term_vars(t)]
                at = max((pos[v] + 1 for v in vs), default=0)
                plan[at].append((polarity, a))
        return plan

    def ground(self, ctx: Context):
        if not self.sorts and self.variables():
            raise ConstraintError("clause must be bound to a signature before grounding")
        names = [v for v, _ in self.sorts]
        sorts = [s for _, s in self.sorts]
        plan = self._plan(names)
        s = ctx.s
        passes = ctx.pools(sorts) if names else [[]]

        compiled = {}
        for atoms in (self.body, self.head):
            for a in atoms:
                compiled[id(a)] = [compile_term(t, s) for t in atom_terms(a)]

        def lit(polarity, a, env):
            """None if this literal makes the instance satisfied, else a CNF
            literal (int) or False for a literal that is fixed false."""
            fs = compiled[id(a)]
            if isinstance(a, Eq):
                val = fs[0](env) == fs[1](env)
            else:
                val = ctx.rel_value(a.rel, tuple(f(env) for f in fs))
            if isinstance(val, bool):
                return None if val == polarity else False
            return val if polarity else -val

        for pools in passes:
            env: dict = {}
            acc: list = []
            # iterative depth-first enumeration with literal evaluation per level
            yield from self._walk(0, names, pools, plan, env, acc, lit, ctx)

    def _walk(self, depth, names, pools, plan, env, acc, lit, ctx):
        mark = len(acc)
        for polarity, a in plan[depth]:
            r = lit(polarity, a, env)
            if r is None:
                del acc[mark:]
                return
            if r is not False:
                acc.append(r)
        if depth == len(names):
            if not (ctx.inside and ctx.within_region(env.values())):
                lits = set(acc)
                if not any(-x in lits for x in lits):
                    yield sorted(lits, key=abs)
        else:
            name = names[depth]
            for x in pools[depth]:
                env[name] = x
                yield from self._walk(depth + 1, names, pools, plan, env, acc, lit, ctx)
            env.pop(name, None)
        del acc[mark:]


@dataclass(frozen=True)
class Eventually(Constraint):
    """Every element reaches ``const`` by iterating the unary ``fn`` at most
    ``|carrier|`` times."""

    fn: str
    const: str
    label: str = "eventually"

    def __str__(self):
        return f"(eventually {self.fn} {self.const})"

    def symbols(self):
        return {self.fn, self.const}

    def check_signature(self, sig):
        if self.fn not in sig.functions or len(sig.functions[self.fn][0]) != 1:
            raise ConstraintError(f"{self.fn} is not a unary function")
        if self.const not in sig.functions or sig.functions[self.const][0]:
            raise ConstraintError(f"{self.const} is not a constant")

    def ground(self, ctx):
        s = ctx.s
        target = s.const(self.const)
        table = s.funcs[self.fn]
        bound = len(s)
        for x in s.carrier[s.sig.functions[self.fn][1]]:
            y = x
            for _ in range(bound):
                y = table[(y,)]
            if y != target:
                yield []


@dataclass(frozen=True)
class PlaneOrientation(Constraint):
    """Every 2-dimensional subspace carries exactly one ordered independent
    pair in ``rel``; ``rel`` never holds of a dependent pair."""

    rel: str
    add: str
    scalars: tuple  # names of the scalar multiplication functions
    label: str = "orientation"

    def __str__(self):
        return f"(orientation {self.rel} {self.add} {' '.join(self.scalars)})"

    def symbols(self):
        return {self.rel, self.add, *self.scalars}

    def span(self, s, u, v):
        add = s.funcs[self.add]
        mult = [s.funcs[f] for f in self.scalars]
        us = {m[(u,)] for m in mult}
        vs = {m[(v,)] for m in mult}
        return frozenset(add[(a, b)] for a in us for b in vs)

    def line(self, s, u):
        return frozenset(s.funcs[f][(u,)] for f in self.scalars)

    def dependent(self, s, u, v) -> bool:
        return v in self.line(s, u) or u in self.line(s, v)

    def planes(self, ctx: Context):
        s = ctx.s
        srt = s.sig.relations[self.rel][0]
        pool = s.carrier[srt]
        big = ctx.inside[-1] if ctx.inside else None
        first = [x for x in pool if big is None or x not in big]
        seen = set()
        for u in first:
            lu = self.line(s, u)
            if len(lu) == 1:
                continue
            for v in pool:
                if v in lu:
                    continue
                p = self.span(s, u, v)
                if p in seen:
                    continue
                seen.add(p)
                if ctx.inside and ctx.within_region(p):
                    continue
                yield p

    def ground(self, ctx):
        s = ctx.s
        for p in self.planes(ctx):
            members = sorted(p)
            lits = []
            forced = 0
            for u in members:
                lu = self.line(s, u)
                if len(lu) == 1:
                    continue
                for v in members:
                    if v in lu:
                        continue
                    val = ctx.rel_value(self.rel, (u, v))
                    if val is True:
                        forced += 1
                    elif val is not False:
                        lits.append(val)
            if forced > 1:
                yield []
            elif forced == 1:
                for x in lits:
                    yield [-x]
            else:
                yield sorted(lits)
                for x, y in itertools.combinations(lits, 2):
                    yield [-x, -y]
        # dependent pairs never carry the relation
        for (rel, t), x in ctx.unknown.items():
            if rel == self.rel and self.dependent(s, *t):
                yield [-x]

    def violations(self, s, limit=1):
        out = []
        for t in s.rels[self.rel]:
            if self.dependent(s, *t):
                out.append(f"{self.label}: {self.rel} holds of dependent pair {t}")
        for cl in self.ground(Context(s)):
            if not cl:
                out.append(self.label)
            if len(out) >= limit:
                break
        return out[:limit]


# -- macros ---------------------------------------------------------------------

def perm_closed(rel: str, arity: int, label: str | None = None) -> list[Clause]:
    """Closure of ``rel`` under coordinate permutations (transposition of the
    first two places and a cyclic shift generate the symmetric group)."""
    xs = tuple(Var(f"x{i}") for i in range(arity))
    label = label or f"perm-closed {rel}"
    if arity < 2:
        return []
    swap = (xs[1], xs[0], *xs[2:])
    out = [Clause((Atom(rel, xs),), (Atom(rel, swap),), label)]
    if arity > 2:
        cyc = (*xs[1:], xs[0])
        out.append(Clause((Atom(rel, xs),), (Atom(rel, cyc),), label))
    return out


def partition(u: str, w: str, label: str = "partition") -> list[Clause]:
    x = Var("x")
    return [Clause((), (Atom(u, (x,)), Atom(w, (x,))), label),
            Clause((Atom(u, (x,)), Atom(w, (x,))), (), label)]


def bind_all(constraints: Iterable[Constraint], sig: Signature) -> list[Constraint]:
    out = []
    for c in constraints:
        if isinstance(c, Clause):
            out.append(c.bind(sig))
        else:
            c.check_signature(sig)
            out.append(c)
    return out


def violations(constraints: Iterable[Constraint], s: FinStructure, limit: int = 1) -> list[str]:
    out = []
    for c in constraints:
        out.extend(c.violations(s, limit=limit - len(out)))
        if len(out) >= limit:
            break
    return out


def satisfies(constraints: Iterable[Constraint], s: FinStructure) -> bool:
    return not violations(constraints, s, limit=1)
