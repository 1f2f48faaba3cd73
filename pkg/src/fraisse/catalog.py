"""The example classes: vector spaces (with plane orientations), rooted trees
(with parent colorings), names for sequences, hypergraphs, the two-color
graph class, and small fixtures on which individual properties fail.

Each entry bundles an ``AgeSpec`` with the verdicts expected from the
property checkers at a published bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .ages import AgeSpec, BaseOracle, BruteForceOracle
from .constraints import (App, Atom, Clause, Eq, Eventually, PlaneOrientation, Var, partition,
                          perm_closed)
from .signature import Signature
from .structure import FinStructure, fresh_ids, ordered, tdcl

X, Y, Z, V_ = Var("x"), Var("y"), Var("z"), Var("v")


# -- finite fields ---------------------------------------------------------------

@dataclass(frozen=True)
class Field:
    q: int

    def __post_init__(self):
        if self.q not in (2, 3, 4):
            raise ValueError(f"unsupported field size {self.q}; use 2, 3 or 4")

    @property
    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return a ^ b if self.q == 4 else (a + b) % self.q

    def mul(self, a: int, b: int) -> int:
        if self.q != 4:
            return (a * b) % self.q
        # GF(4) = GF(2)[w]/(w^2 + w + 1), element 2 is w and 3 is w + 1
        out = 0
        for i in range(2):
            if (b >> i) & 1:
                out ^= a << i
        if out & 4:
            out ^= 0b111
        return out

    def scalar(self, c: int) -> str:
        return f"f{c}"


def vector_signature(fld: Field, with_orientation: bool = False) -> tuple[Signature, Signature]:
    funs = {"plus": (("V", "V"), "V"), "v0": ((), "V")}
    for c in fld.elements:
        funs[fld.scalar(c)] = (("V",), "V")
    sub = Signature(("V",), {}, funs)
    full = sub.extend({"R": ("V", "V")}) if with_orientation else sub
    return full, sub


def vector_axioms(fld: Field) -> list[Clause]:
    def plus(a, b):
        return App("plus", (a, b))

    def sc(c, a):
        return App(fld.scalar(c), (a,))

    zero = App("v0")
    lab = "vector space"
    out = [
        Clause((), (Eq(plus(plus(X, Y), Z), plus(X, plus(Y, Z))),), lab),
        Clause((), (Eq(plus(X, Y), plus(Y, X)),), lab),
        Clause((), (Eq(plus(X, zero), X),), lab),
        Clause((), (Eq(sc(1, X), X),), lab),
        Clause((), (Eq(sc(0, X), zero),), lab),
    ]
    for c in fld.elements:
        out.append(Clause((), (Eq(sc(c, plus(X, Y)), plus(sc(c, X), sc(c, Y))),), lab))
        for d in fld.elements:
            out.append(Clause((), (Eq(sc(c, sc(d, X)), sc(fld.mul(c, d), X)),), lab))
            out.append(Clause((), (Eq(plus(sc(c, X), sc(d, X)), sc(fld.add(c, d), X)),), lab))
    return out


class VectorSpaceOracle(BaseOracle):
    """Finite vector spaces over GF(q); rank is the dimension.

    Elements are named by linear combinations of basis ids; an amalgam of
    ``b`` and ``c`` over ``a`` is their direct sum over ``a`` and names a new
    element ``u+w`` after its components in ``b`` and in a complement of
    ``a`` inside ``c``.
    """

    name = "vector-space"

    def __init__(self, q: int):
        self.field = Field(q)
        self.params = (q,)
        self.sig = vector_signature(self.field)[1]

    # coordinates --------------------------------------------------------------

    def basis(self, s: FinStructure, start=()) -> list[str]:
        basis = list(start)
        span = self.span(s, basis)
        for x in s.ordered_elements():
            if x not in span:
                basis.append(x)
                span = self.span(s, basis)
        return basis

    def span(self, s: FinStructure, vecs) -> set[str]:
        return set(self.combos(s, vecs).values())

    def combos(self, s: FinStructure, vecs) -> dict[tuple, str]:
        out = {}
        plus = s.funcs["plus"]
        for coeffs in itertools.product(self.field.elements, repeat=len(vecs)):
            acc = s.const("v0")
            for c, v in zip(coeffs, vecs):
                acc = plus[(acc, s.funcs[self.field.scalar(c)][(v,)])]
            out[coeffs] = acc
        return out

    def rank(self, s):
        d, n = 0, 1
        while n < len(s):
            n *= self.field.q
            d += 1
        return d

    def space(self, vecs: dict[tuple, str], dim: int) -> FinStructure:
        """Structure on coordinate vectors named by ``vecs``."""
        fld = self.field
        inv = {v: k for k, v in vecs.items()}
        funcs = {"plus": {}, "v0": {(): vecs[(0,) * dim]}}
        for c in fld.elements:
            funcs[fld.scalar(c)] = {}
        for u, cu in inv.items():
            for c in fld.elements:
                funcs[fld.scalar(c)][(u,)] = vecs[tuple(fld.mul(c, x) for x in cu)]
            for w, cw in inv.items():
                funcs["plus"][(u, w)] = vecs[tuple(fld.add(x, y) for x, y in zip(cu, cw))]
        return FinStructure(self.sig, {"V": list(vecs.values())}, funcs, {})

    def initial(self, sub):
        return self.space({(): "0"}, 0)

    def _name(self, coeffs, basis):
        parts = []
        for c, b in zip(coeffs, basis):
            if c:
                parts.append(b if c == 1 else f"{c}{b}")
        return "+".join(parts) if parts else "0"

    def extensions(self, a):
        basis = self.basis(a)
        old = self.combos(a, basis)
        x = fresh_ids("e", 1, a.elements | {p for y in a.elements for p in y.split("+")})[0]
        dim = len(basis) + 1
        vecs = {}
        for coeffs in itertools.product(self.field.elements, repeat=dim):
            head, c = coeffs[:-1], coeffs[-1]
            if not c:
                vecs[coeffs] = old[head]
            else:
                tail = x if c == 1 else f"{c}{x}"
                vecs[coeffs] = tail if not any(head) else f"{old[head]}+{tail}"
        return [self.space(vecs, dim)]

    def amalgams(self, a, b, c):
        ba = self.basis(a)
        bb = self.basis(b, ba)
        bc = self.basis(c, ba)
        cb, cc = self.combos(b, bb), self.combos(c, bc)
        na, nb, nc = len(ba), len(bb) - len(ba), len(bc) - len(ba)
        dim = na + nb + nc
        vecs = {}
        taken = set(b.elements) | set(c.elements)
        for coeffs in itertools.product(self.field.elements, repeat=dim):
            ca, cbx, ccx = coeffs[:na], coeffs[na:na + nb], coeffs[na + nb:]
            if not any(ccx):
                vecs[coeffs] = cb[ca + cbx]
            elif not any(cbx):
                vecs[coeffs] = cc[ca + ccx]
            else:
                name = f"{cb[ca + cbx]}+{cc[(0,) * na + ccx]}"
                if name in taken:
                    name = fresh_ids(name + "'", 1, taken)[0]
                taken.add(name)
                vecs[coeffs] = name
        return [self.space(vecs, dim)]


# -- rooted trees --------------------------------------------------------------------

def tree_signature(colored: bool) -> tuple[Signature, Signature]:
    sub = Signature(("V",), {}, {"p": (("V",), "V"), "r": ((), "V")})
    return (sub.extend({"R": ("V", "V")}) if colored else sub), sub


class TreeOracle(BaseOracle):
    """Finite rooted trees under the parent function; rank is the number of non-root nodes."""

    name = "tree"

    def __init__(self):
        self.sig = tree_signature(False)[1]

    def initial(self, sub):
        return FinStructure(self.sig, {"V": ["r"]}, {"p": {("r",): "r"}, "r": {(): "r"}}, {})

    def extensions(self, a):
        x = fresh_ids("t", 1, a.elements)[0]
        out = []
        for v in a.ordered_elements():
            p = dict(a.funcs["p"])
            p[(x,)] = v
            out.append(FinStructure(self.sig, {"V": [*a.carrier["V"], x]}, {"p": p, "r": a.funcs["r"]}, {}))
        return out

    def amalgams(self, a, b, c):
        p = {**b.funcs["p"], **c.funcs["p"]}
        return [FinStructure(self.sig, {"V": sorted(b.elements | c.elements)}, {"p": p, "r": b.funcs["r"]}, {})]

    def rank(self, s):
        return len(s) - 1


# -- names for sequences ---------------------------------------------------------------

def seq_signature(n: int, with_relation: bool) -> tuple[Signature, Signature]:
    funs = {"f": (("U",) * n, "W")}
    for i in range(n):
        funs[f"pi{i}"] = (("W",), "U")
    sub = Signature(("U", "W"), {}, funs)
    return (sub.extend({"R": ("U",) * n}) if with_relation else sub), sub


def seq_axioms(n: int) -> list[Clause]:
    xs = tuple(Var(f"x{i}") for i in range(n))
    out = [Clause((), (Eq(App(f"pi{i}", (App("f", xs),)), xs[i]),), "names decode")
           for i in range(n)]
    out.append(Clause((), (Eq(App("f", tuple(App(f"pi{i}", (V_,)) for i in range(n))), V_),), "names encode"))
    return out


class SeqNameOracle(BaseOracle):
    """Sets U with a name in W for every n-tuple; rank is ``|U|``."""

    name = "seq-names"

    def __init__(self, n: int):
        self.n = n
        self.params = (n,)
        self.sig = seq_signature(n, False)[1]

    @staticmethod
    def tuple_name(t) -> str:
        return "<" + ",".join(t) + ">"

    def build(self, us, names: dict) -> FinStructure:
        n = self.n
        funcs = {"f": {}}
        for i in range(n):
            funcs[f"pi{i}"] = {}
        for t in itertools.product(us, repeat=n):
            w = names.get(t) or self.tuple_name(t)
            funcs["f"][t] = w
            for i in range(n):
                funcs[f"pi{i}"][(w,)] = t[i]
        return FinStructure(self.sig, {"U": us, "W": list(funcs["f"].values())}, funcs, {})

    def initial(self, sub):
        return self.build([], {})

    def extensions(self, a):
        u = fresh_ids("u", 1, a.elements)[0]
        return [self.build([*a.carrier["U"], u], a.funcs["f"])]

    def amalgams(self, a, b, c):
        us = sorted(set(b.carrier["U"]) | set(c.carrier["U"]))
        names = {**b.funcs["f"], **c.funcs["f"]}
        taken = set(names.values())
        for t in itertools.product(us, repeat=self.n):
            if t not in names and self.tuple_name(t) in taken:
                names[t] = fresh_ids(self.tuple_name(t) + "'", 1, taken)[0]
        return [self.build(us, names)]

    def rank(self, s):
        return s.size("U")


# -- catalog entries --------------------------------------------------------------------

@dataclass
class Expected:
    verdict: str
    bound: int
    anchor: str
    args: dict = field(default_factory=dict)


@dataclass
class CatalogEntry:
    name: str
    params: dict
    age: AgeSpec
    expected: dict = field(default_factory=dict)
    base: str | None = None
    pin_sort: str | None = None
    note: str = ""

    def key(self) -> str:
        if not self.params:
            return self.name
        return self.name + "(" + ",".join(f"{k}={v}" for k, v in self.params.items()) + ")"


def _graph_constraints(rel="E"):
    return [Clause((Atom(rel, (X, Y)),), (Atom(rel, (Y, X)),), "symmetric"),
            Clause((Atom(rel, (X, X)),), (), "irreflexive")]


def make_graph_class() -> CatalogEntry:
    sig = Signature.one_sorted({"E": 2})
    age = AgeSpec("graphs", sig, Signature(("V",)), _graph_constraints())
    return CatalogEntry("graphs", {}, age, {
        "hp": Expected("pass", 4, "all finite graphs"),
        "jep": Expected("pass", 3, "disjoint union"),
        "sap": Expected("pass", 3, "free amalgam"),
        "esap": Expected("pass", 3, "free amalgam over the empty base"),
        "cu": Expected("pass", 3, "unions of graphs"),
    })


def make_empty_class(sorts=("V",)) -> CatalogEntry:
    sig = Signature(tuple(sorts))
    age = AgeSpec("sets", sig, sig, [])
    return CatalogEntry("sets", {}, age, {
        "hp": Expected("pass", 3, "bare sets"),
        "sap": Expected("pass", 3, "bare sets"),
    })


def make_vector_space_class(q: int = 2, with_orientation: bool = False) -> CatalogEntry:
    fld = Field(q)
    sig, sub = vector_signature(fld, with_orientation)
    cons = vector_axioms(fld)
    name = "orientation" if with_orientation else "vector-space"
    if with_orientation:
        cons.append(PlaneOrientation("R", "plus", tuple(fld.scalar(c) for c in fld.elements)))
    age = AgeSpec(name, sig, sub, cons, VectorSpaceOracle(q), decoration_cap=8 if with_orientation else 512)
    if with_orientation:
        age.config_cap = 150
    # membership rechecks every axiom instance, so larger fields get a smaller bound
    bound = 2 if q == 2 else 1
    expected = {
        "hp": Expected("pass", bound, "subspaces"),
        "jep": Expected("pass", bound, "direct sum"),
        "sap": Expected("pass", bound, "direct sum over the common subspace"),
    }
    if with_orientation:
        expected["esap"] = Expected("pass", 2, "free choice of orientation on new planes")
        expected["2types"] = Expected("pass", 2, "orient one plane and not its mirror", {"sort": "V"})
        expected["pins"] = Expected("pass", 2, "one sort", {"sort": "V"})
    return CatalogEntry(name, {"q": q}, age, expected,
                        base="vector-space" if with_orientation else None, pin_sort="V")


def make_tree_class(colored: bool = False) -> CatalogEntry:
    sig, sub = tree_signature(colored)
    a, b = Var("a"), Var("b")
    cons = [Clause((), (Eq(App("p", (App("r"),)), App("r")),), "root is fixed"), Eventually("p", "r")]
    if colored:
        cons.append(Clause((Atom("R", (a, b)),), (Eq(App("p", (a,)), b),), "colors follow parents"))
    name = "colored-tree" if colored else "tree"
    age = AgeSpec(name, sig, sub, cons, TreeOracle())
    # R(r, r) is allowed since p(r) = r, and the root generates itself, so two
    # roots that disagree on it have no joint embedding
    jep = Expected("fail", 3, "the root loop R(r, r) is undetermined") if colored else \
        Expected("pass", 3, "glue at the root")
    expected = {
        "hp": Expected("pass", 4, "rooted subtrees"),
        "jep": jep,
        "sap": Expected("pass", 3, "union of trees over a common subtree"),
        "esap": Expected("pass", 3, "colorings are independent"),
        "cu": Expected("pass", 3, "unions of trees"),
    }
    return CatalogEntry(name, {}, age, expected, base="tree" if colored else None)


def make_seq_name_class(n: int = 2, with_relation: bool = True, config_cap: int | None = 300,
                        decoration_cap: int = 6) -> CatalogEntry:
    if n < 2:
        raise ValueError("sequence names need n >= 2")
    sig, sub = seq_signature(n, with_relation)
    name = "seq-names" if with_relation else "seq-names-bot"
    age = AgeSpec(name, sig, sub, seq_axioms(n), SeqNameOracle(n), decoration_cap=decoration_cap)
    # the base grows like |U|^n, so high arities sample fewer configurations
    age.config_cap = config_cap if n <= 3 or config_cap is None else min(config_cap, 80)
    bound = 3
    expected = {
        "sap": Expected("pass", bound, "the base class amalgamates freely"),
        "esap": Expected("pass", bound, "R is unconstrained"),
        "pins": Expected("pass", bound, "names determine coordinates", {"sort": "W"}),
    }
    if with_relation:
        if n == 2:
            expected["2types"] = Expected("fail", 3, "x0 = f(y0,y1), x1 = f(y0,z1)", {"sort": "W"})
        elif n >= 5:
            expected["2types"] = Expected("pass", 2, "arity at least five", {"sort": "W"})
    return CatalogEntry(name, {"n": n}, age, expected, base="seq-names-bot" if with_relation else None,
                        pin_sort="W")


def make_hypergraph_class(n: int = 3, symmetric: bool = False) -> CatalogEntry:
    sig = Signature.one_sorted({"R": n})
    cons = perm_closed("R", n) if symmetric else []
    name = "sym-hypergraph" if symmetric else "hypergraph"
    age = AgeSpec(name, sig, Signature(("V",)), cons, decoration_cap=64)
    return CatalogEntry(name, {"n": n}, age, {
        "hp": Expected("pass", 2, "substructures"),
        "sap": Expected("pass", 2, "free amalgam"),
        "esap": Expected("pass", 2, "free amalgam over the empty base"),
    })


def make_two_color_class() -> CatalogEntry:
    sub = Signature(("V",), {"U": ("V",), "W": ("V",)})
    sig = sub.extend({"E": ("V", "V")})
    cons = partition("U", "W") + _graph_constraints() + [
        Clause((Atom("E", (X, Y)), Atom("U", (X,))), (Atom("U", (Y,)),), "no cross edges"),
        Clause((Atom("E", (X, Y)), Atom("U", (Y,))), (Atom("U", (X,)),), "no cross edges"),
    ]
    age = AgeSpec("two-color", sig, sub, cons)
    return CatalogEntry("two-color", {}, age, {
        "hp": Expected("pass", 3, "substructures"),
        "sap": Expected("pass", 3, "free amalgam"),
        "esap": Expected("pass", 3, "edges only inside a color"),
        "2types": Expected("pass", 4, "edge to one mirror image, not the other", {"sort": "V"}),
    })


# -- fixtures on which a property fails ---------------------------------------------------------

def make_min_collapse_class() -> CatalogEntry:
    """Strict linear orders with a function naming the least element.  Two
    one-point structures cannot be amalgamated disjointly over the empty
    structure: each point is its own least element."""
    sig = Signature(("V",), {"lt": ("V", "V")}, {"m": (("V",), "V")})

    def m(t):
        return App("m", (t,))
    cons = [
        Clause((Atom("lt", (X, X)),), (), "irreflexive"),
        Clause((Atom("lt", (X, Y)), Atom("lt", (Y, Z))), (Atom("lt", (X, Z)),), "transitive"),
        Clause((), (Atom("lt", (X, Y)), Atom("lt", (Y, X)), Eq(X, Y)), "total"),
        Clause((), (Atom("lt", (m(Y), X)), Eq(m(Y), X)), "m names the least element"),
    ]
    age = AgeSpec("min-collapse", sig, sig, cons, BruteForceOracle())
    age.oracle.constraints = age.base_constraints
    return CatalogEntry("min-collapse", {}, age, {
        "hp": Expected("pass", 3, "initial segments"),
        "jep": Expected("pass", 2, "identify the least elements"),
        "sap": Expected("fail", 1, "two least elements"),
    })


def make_forced_edge_class() -> CatalogEntry:
    """Graphs in the base; S- and T-points must be P-related, and P needs an
    edge.  Strong amalgams exist (add the edge) but not over an edgeless base."""
    sub = Signature.one_sorted({"E": 2})
    sig = sub.extend({"S": ("V",), "T": ("V",), "P": ("V", "V")})
    cons = _graph_constraints() + [
        Clause((Atom("S", (X,)), Atom("T", (Y,))), (Atom("P", (X, Y)),), "S-T pairs are P"),
        Clause((Atom("P", (X, Y)),), (Atom("E", (X, Y)),), "P needs an edge"),
        Clause((Atom("S", (X,)), Atom("T", (X,))), (), "S and T are disjoint"),
    ]
    age = AgeSpec("forced-edge", sig, sub, cons)
    return CatalogEntry("forced-edge", {}, age, {
        "sap": Expected("pass", 1, "amalgam with the edge"),
        "esap": Expected("fail", 1, "edgeless base forbids P"),
    })


def make_clique_or_empty_class() -> CatalogEntry:
    sig = Signature.one_sorted({"E": 2})
    w = Var("w")
    cons = _graph_constraints() + [
        Clause((Atom("E", (X, Y)),), (Atom("E", (Z, w)), Eq(Z, w)), "complete or edgeless")]
    age = AgeSpec("clique-or-empty", sig, Signature(("V",)), cons,
                  extra=lambda s: len(s) >= 2, extra_label="at least two vertices")
    return CatalogEntry("clique-or-empty", {}, age, {
        "jep": Expected("fail", 2, "a clique and an edgeless graph"),
        "hp": Expected("fail", 2, "one vertex"),
    })


def make_small_graph_class(size: int = 3) -> CatalogEntry:
    sig = Signature.one_sorted({"E": 2})
    age = AgeSpec(f"graphs-le{size}", sig, Signature(("V",)), _graph_constraints(),
                  extra=lambda s: len(s) <= size, extra_label=f"at most {size} vertices")
    return CatalogEntry("small-graphs", {"size": size}, age, {
        "hp": Expected("pass", size, "substructures"),
        "cu": Expected("fail", size, "chain reaching size four"),
    })


def make_two_sort_class() -> CatalogEntry:
    sig = Signature(("P", "Q"))
    age = AgeSpec("two-sets", sig, sig, [])
    return CatalogEntry("two-sets", {}, age, {
        "pins": Expected("fail", 2, "transposition of Q", {"sort": "P"}),
    })


ENTRIES: dict[str, Callable[..., CatalogEntry]] = {
    "graphs": make_graph_class,
    "sets": make_empty_class,
    "vector-space": lambda q=2: make_vector_space_class(q, False),
    "orientation": lambda q=2: make_vector_space_class(q, True),
    "tree": lambda: make_tree_class(False),
    "colored-tree": lambda: make_tree_class(True),
    "seq-names": lambda n=2: make_seq_name_class(n, True),
    "seq-names-bot": lambda n=2: make_seq_name_class(n, False),
    "hypergraph": lambda n=3: make_hypergraph_class(n, False),
    "sym-hypergraph": lambda n=3: make_hypergraph_class(n, True),
    "two-color": make_two_color_class,
}

FIXTURES: dict[str, Callable[..., CatalogEntry]] = {
    "min-collapse": make_min_collapse_class,
    "forced-edge": make_forced_edge_class,
    "clique-or-empty": make_clique_or_empty_class,
    "small-graphs": make_small_graph_class,
    "two-sets": make_two_sort_class,
}


def get(name: str, **params) -> CatalogEntry:
    table = ENTRIES if name in ENTRIES else FIXTURES
    if name not in table:
        raise KeyError(f"unknown class {name}; known: {', '.join(sorted(ENTRIES))}")
    return table[name](**params)


def listing() -> list[str]:
    return sorted(ENTRIES)


def seq_witness_shape(cfg: dict) -> bool:
    """True iff ``x0``, ``x1`` are pairs sharing one coordinate outside ``a``
    whose other coordinates differ and lie in ``a``."""
    b = cfg["b"]
    a = set(cfg["a"].elements)
    c0 = (b.apply("pi0", cfg["x0"]), b.apply("pi1", cfg["x0"]))
    c1 = (b.apply("pi0", cfg["x1"]), b.apply("pi1", cfg["x1"]))
    for keep, other in ((0, 1), (1, 0)):
        if (c0[keep] == c1[keep] and c0[keep] not in a
                and c0[other] != c1[other] and c0[other] in a and c1[other] in a):
            return True
    return False


def generated_by(s: FinStructure, xs) -> list[str]:
    return ordered(tdcl(s, xs))


# -- parameter families for the splitting checker ----------------------------------------------

def seq_split_setup(n: int = 2, free: int = 2, block: int = 2):
    """A base for names of sequences on ``free`` ordinary points and a block
    of ``block`` points; the family is the names whose first coordinate lies
    in the block."""
    from .rigidity import SplitFamily
    orc = SeqNameOracle(n)
    us = [f"u{i}" for i in range(1, free + 1)] + [f"p{i}" for i in range(1, block + 1)]
    base = orc.build(us, {})
    fset = frozenset(w for w in base.carrier["W"] if base.apply("pi0", w).startswith("p"))
    return base, SplitFamily(fset, "W", f"names with first coordinate in a block of {block}")


def orientation_split_setup(q: int = 2, dim: int = 4, block: int = 3):
    """A ``dim``-dimensional space and the subspace spanned by the first
    ``block`` basis vectors as the family."""
    from .rigidity import SplitFamily
    orc = VectorSpaceOracle(q)
    names = [f"e{i}" for i in range(dim)]
    vecs = {c: orc._name(c, names) for c in itertools.product(orc.field.elements, repeat=dim)}
    base = orc.space(vecs, dim)
    fset = frozenset(v for c, v in vecs.items() if not any(c[block:]))
    return base, SplitFamily(fset, "V", f"subspace of dimension {block} in dimension {dim}")


def two_color_base(u: int = 5, seed: int = 0):
    """A growable base with ``u`` U-points whose U-part never grows."""
    from .generic import GrowableBase
    k = make_two_color_class().age
    kbot = k.bot()
    pts = [f"u{i}" for i in range(1, u + 1)]
    init = FinStructure(kbot.sig, {"V": pts}, {}, {"U": {(x,) for x in pts}, "W": set()})
    return GrowableBase.start(kbot, seed=seed, allow=lambda s: s.size("V") - len(s.rels["W"]) <= u,
                              initial=init)


def w_side(g: FinStructure) -> FinStructure:
    """The graph induced on the W-points of a two-color structure."""
    ws = {t[0] for t in g.rels["W"]}
    sig = Signature.one_sorted({"E": 2})
    return FinStructure(sig, {"V": ordered(ws)}, {},
                        {"E": {t for t in g.rels["E"] if t[0] in ws and t[1] in ws}})
