"""Definition files: signatures, structures, ages, families and condition
lists as s-expressions.

    (signature graph (sorts V) (rel E (V V)))
    (structure k2 (over graph) (carrier V (a b)) (rel E ((a b) (b a))))
    (age graphs (over graph) (sub bare)
      (constraints
        (clause "symmetric" (body (E x y)) (head (E y x)))
        (not (E x x))))

Function entries read ``(fun p ((a) b) ...)``; a declaration ``(fun f ((U U) -> W))``;
constants ``(const v0 V)``.  In constraints a symbol is a variable unless it
names a constant.  Constraint forms: ``clause``, ``implies``, ``not``, ``or``,
a bare atom or equation, and the macros ``perm-closed``, ``partition``,
``eventually`` and ``orientation``.  An age may name a base oracle with
``(oracle NAME PARAM...)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ages import AgeSpec, BruteForceOracle
from .constraints import (App, Atom, Clause, ConstraintError, Eq, Eventually, PlaneOrientation, Var,
                          bind_all, partition, perm_closed)
from .sexpr import Diagnostic, Int, SexpError, SList, Str, Sym, dumps, lst, parse
from .signature import Signature, SignatureError
from .structure import FinStructure, ordered, tuple_key, validate

ARITY = "E002"
UNDECLARED_SYMBOL = "E003"
ILL_SORTED = "E004"
UNDECLARED_ELEMENT = "E005"
MALFORMED = "E006"
UNKNOWN_REF = "E007"
DUPLICATE = "E008"
INVALID_STRUCTURE = "E009"


class DslError(SexpError):
    pass


@dataclass
class Family:
    name: str
    host: FinStructure
    sets: list


@dataclass
class ConditionList:
    name: str
    age: AgeSpec
    base: FinStructure
    conditions: list


@dataclass
class Document:
    signatures: dict = field(default_factory=dict)
    structures: dict = field(default_factory=dict)
    ages: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)
    conditions: dict = field(default_factory=dict)
    reports: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)


class _Fail(Exception):
    def __init__(self, code, message, node):
        self.diag = Diagnostic(code, message, getattr(node, "span", None))


def _text(node, what="a name") -> str:
    if isinstance(node, (Sym, Str)):
        return node.value
    if isinstance(node, Int):
        return str(node.value)
    raise _Fail(MALFORMED, f"expected {what}", node)


def _list(node, what="a list") -> SList:
    if not isinstance(node, SList):
        raise _Fail(MALFORMED, f"expected {what}", node)
    return node


def _int(node) -> int:
    if not isinstance(node, Int):
        raise _Fail(MALFORMED, "expected an integer", node)
    return node.value


def _sections(form: SList, start: int = 2) -> list[SList]:
    return [_list(x, "a (key ...) section") for x in form.items[start:]]


# -- oracles referenced by name ---------------------------------------------------------

def _oracles():
    from .catalog import SeqNameOracle, TreeOracle, VectorSpaceOracle
    return {"vector-space": VectorSpaceOracle, "tree": TreeOracle, "seq-names": SeqNameOracle}


# -- parsing -------------------------------------------------------------------------------

class _Parser:
    def __init__(self, age: AgeSpec | None = None):
        self.doc = Document()
        self.default_age = age

    def run(self, nodes) -> Document:
        diags = []
        for node in nodes:
            try:
                self.form(node)
            except _Fail as exc:
                diags.append(exc.diag)
        if diags:
            raise DslError(diags)
        return self.doc

    def form(self, node):
        f = _list(node, "a top-level form")
        head = f.head
        handlers = {"signature": self.signature, "structure": self.structure, "age": self.age,
                    "family": self.family, "conditions": self.condition_list, "meta": self.meta,
                    "report": self.report}
        if head not in handlers:
            raise _Fail(MALFORMED, f"unknown form {head!r}", f)
        handlers[head](f)

    def _name(self, f: SList, table: dict):
        if len(f) < 2:
            raise _Fail(MALFORMED, f"{f.head} needs a name", f)
        name = _text(f[1])
        if name in table:
            raise _Fail(DUPLICATE, f"duplicate definition of {name}", f[1])
        return name

    # signatures ------------------------------------------------------------------

    def signature(self, f: SList) -> Signature:
        name = self._name(f, self.doc.signatures)
        sig = self.signature_body(f, 2)
        self.doc.signatures[name] = sig
        return sig

    def signature_body(self, f: SList, start: int) -> Signature:
        sorts, rels, funs = [], {}, {}
        for sec in _sections(f, start):
            key = sec.head
            if key == "sorts":
                sorts.extend(_text(x, "a sort") for x in sec.items[1:])
            elif key == "rel":
                if len(sec) != 3:
                    raise _Fail(MALFORMED, "rel needs a name and a sort list", sec)
                rels[_text(sec[1])] = tuple(self._sort(x, sorts) for x in _list(sec[2]).items)
            elif key == "fun":
                if len(sec) != 3:
                    raise _Fail(MALFORMED, "fun needs a name and ((sorts) -> sort)", sec)
                decl = _list(sec[2])
                if len(decl) != 3 or _text(decl[1]) != "->":
                    raise _Fail(MALFORMED, "function declaration must read ((sorts) -> sort)", decl)
                dom = tuple(self._sort(x, sorts) for x in _list(decl[0]).items)
                funs[_text(sec[1])] = (dom, self._sort(decl[2], sorts))
            elif key == "const":
                if len(sec) != 3:
                    raise _Fail(MALFORMED, "const needs a name and a sort", sec)
                funs[_text(sec[1])] = ((), self._sort(sec[2], sorts))
            else:
                raise _Fail(MALFORMED, f"unknown signature section {key!r}", sec)
        try:
            return Signature(tuple(sorts), rels, funs)
        except SignatureError as exc:
            raise _Fail(MALFORMED, str(exc), f) from None

    def _sort(self, node, sorts) -> str:
        s = _text(node, "a sort")
        if s not in sorts:
            raise _Fail(UNDECLARED_SYMBOL, f"undeclared sort {s}", node)
        return s

    def sig_ref(self, node) -> Signature:
        if isinstance(node, SList) and node.head == "signature":
            return self.signature_body(node, 1)
        name = _text(node, "a signature name")
        if name not in self.doc.signatures:
            raise _Fail(UNKNOWN_REF, f"unknown signature {name}", node)
        return self.doc.signatures[name]

    # structures -----------------------------------------------------------------------

    def structure(self, f: SList) -> FinStructure:
        if len(f) > 1 and isinstance(f[1], SList):
            name, start = f"structure{len(self.doc.structures)}", 1
        else:
            name, start = self._name(f, self.doc.structures), 2
        s = self.structure_body(f, start)
        self.doc.structures[name] = s
        return s

    def structure_body(self, f: SList, start: int, sig: Signature | None = None) -> FinStructure:
        secs = _sections(f, start)
        for sec in secs:
            if sec.head == "over":
                sig = self.sig_ref(sec[1])
        if sig is None:
            sig = self._infer_signature(secs)
        carrier = {s: [] for s in sig.sorts}
        funcs = {g: {} for g in sig.functions}
        rels = {r: set() for r in sig.relations}
        where = {}
        for sec in secs:
            if sec.head == "carrier":
                srt = _text(sec[1])
                if srt not in carrier:
                    raise _Fail(UNDECLARED_SYMBOL, f"undeclared sort {srt}", sec[1])
                for x in _list(sec[2]).items:
                    carrier[srt].append(_text(x, "an element"))
                    where[_text(x)] = srt
        for sec in secs:
            key = sec.head
            if key in ("over", "carrier"):
                continue
            if key == "fun":
                g = _text(sec[1])
                if g not in funcs:
                    raise _Fail(UNDECLARED_SYMBOL, f"undeclared function {g}", sec[1])
                dom, _ = sig.functions[g]
                for entry in sec.items[2:]:
                    e = _list(entry, "an entry ((args) value)")
                    if len(e) != 2:
                        raise _Fail(MALFORMED, "function entry must read ((args) value)", e)
                    args = tuple(self._elem(x, where) for x in _list(e[0]).items)
                    if len(args) != len(dom):
                        raise _Fail(ARITY, f"arity mismatch for {g}: {len(args)} arguments, expected {len(dom)}", e[0])
                    funcs[g][args] = self._elem(e[1], where)
            elif key == "rel":
                r = _text(sec[1])
                if r not in rels:
                    raise _Fail(UNDECLARED_SYMBOL, f"undeclared relation {r}", sec[1])
                for tup in _tuples(sec):
                    t = tuple(self._elem(x, where) for x in _list(tup).items)
                    if len(t) != len(sig.relations[r]):
                        raise _Fail(ARITY, f"arity mismatch for {r}: {len(t)} places, expected {len(sig.relations[r])}", tup)
                    rels[r].add(t)
            else:
                raise _Fail(MALFORMED, f"unknown structure section {key!r}", sec)
        s = FinStructure(sig, carrier, funcs, rels)
        problems = validate(s)
        if problems:
            sorted_ = [p for p in problems if "escaping" in p or "ill-sorted" in p or "sorts" in p]
            if sorted_:
                raise _Fail(ILL_SORTED, sorted_[0], f)
            raise _Fail(INVALID_STRUCTURE, problems[0], f)
        return s

    def _infer_signature(self, secs) -> Signature:
        """Signature read off an anonymous structure's own tables."""
        where, sorts, rels, funs = {}, [], {}, {}
        for sec in secs:
            if sec.head == "carrier":
                srt = _text(sec[1], "a sort")
                sorts.append(srt)
                for x in _list(sec[2]).items:
                    where[_text(x, "an element")] = srt
        for sec in secs:
            if sec.head == "fun":
                entries = [_list(e) for e in sec.items[2:]]
                if not entries:
                    raise _Fail(MALFORMED, "cannot infer the type of a function without entries", sec)
                e = entries[0]
                dom = tuple(where[self._elem(x, where)] for x in _list(e[0]).items)
                for e in entries:
                    for x in (*_list(e[0]).items, e[1]):
                        self._elem(x, where)
                funs[_text(sec[1])] = (dom, where[_text(e[1])])
            elif sec.head == "rel":
                tups = _tuples(sec)
                if not tups:
                    raise _Fail(MALFORMED, "cannot infer the type of a relation without tuples", sec)
                rels[_text(sec[1])] = tuple(where[self._elem(x, where)] for x in _list(tups[0]).items)
        try:
            return Signature(tuple(sorts), rels, funs)
        except SignatureError as exc:
            raise _Fail(MALFORMED, str(exc), secs[0] if secs else None) from None

    def _elem(self, node, where) -> str:
        x = _text(node, "an element")
        if x not in where:
            raise _Fail(UNDECLARED_ELEMENT, f"undeclared element {x}", node)
        return x

    def struct_ref(self, node, sig=None) -> FinStructure:
        if isinstance(node, SList) and node.head == "structure":
            return self.structure_body(node, 1, sig)
        name = _text(node, "a structure name")
        if name not in self.doc.structures:
            raise _Fail(UNKNOWN_REF, f"unknown structure {name}", node)
        return self.doc.structures[name]

    # ages ---------------------------------------------------------------------------------

    def age(self, f: SList) -> AgeSpec:
        name = self._name(f, self.doc.ages)
        sig = sub = None
        cons_nodes, oracle, opts = [], None, {}
        for sec in _sections(f):
            key = sec.head
            if key == "over":
                sig = self.sig_ref(sec[1])
            elif key == "sub":
                sub = self.sig_ref(sec[1])
            elif key == "constraints":
                cons_nodes.extend(sec.items[1:])
            elif key == "oracle":
                oracle = sec
            elif key in ("decoration-cap", "config-cap", "seed"):
                opts[key] = _int(sec[1])
            else:
                raise _Fail(MALFORMED, f"unknown age section {key!r}", sec)
        if sig is None:
            raise _Fail(MALFORMED, "age needs (over SIGNATURE)", f)
        sub = sub or Signature(sig.sorts, {}, dict(sig.functions))
        cons = []
        for node in cons_nodes:
            for c in self.constraint(node, sig):
                try:
                    cons.extend(_bind_one(c, sig))
                except ConstraintError as exc:
                    raise _Fail(_constraint_code(str(exc)), str(exc), node) from None
        orc = self.oracle(oracle) if oracle is not None else None
        try:
            k = AgeSpec(name, sig, sub, cons, orc, decoration_cap=opts.get("decoration-cap", 512),
                        seed=opts.get("seed", 0))
        except (ValueError, ConstraintError) as exc:
            raise _Fail(MALFORMED, str(exc), f) from None
        if "config-cap" in opts:
            k.config_cap = opts["config-cap"]
        self.doc.ages[name] = k
        return k

    def oracle(self, sec: SList):
        name = _text(sec[1], "an oracle name")
        if name == "brute":
            return None
        table = _oracles()
        if name not in table:
            raise _Fail(UNKNOWN_REF, f"unknown oracle {name}", sec[1])
        return table[name](*[_int(x) for x in sec.items[2:]])

    # constraints ----------------------------------------------------------------------

    def constraint(self, node, sig: Signature) -> list:
        f = _list(node, "a constraint")
        head = f.head
        if head == "clause":
            label = _text(f[1], "a label")
            body = self._atoms(_list(f[2]), "body", sig)
            hd = self._atoms(_list(f[3]), "head", sig)
            return [Clause(tuple(body), tuple(hd), label)]
        if head == "implies":
            return [Clause(tuple(self._conj(f[1], sig)), tuple(self._disj(f[2], sig)))]
        if head == "not":
            return [Clause(tuple(self._conj(f[1], sig)), ())]
        if head == "or":
            return [Clause((), tuple(self._disj(f, sig)))]
        if head == "perm-closed":
            return perm_closed(_text(f[1]), _int(f[2]))
        if head == "partition":
            return partition(_text(f[1]), _text(f[2]))
        if head == "eventually":
            return [Eventually(_text(f[1]), _text(f[2]))]
        if head == "orientation":
            return [PlaneOrientation(_text(f[1]), _text(f[2]), tuple(_text(x) for x in f.items[3:]))]
        return [Clause((), (self.atom(f, sig),))]

    def _atoms(self, sec: SList, key: str, sig) -> list:
        if sec.head != key:
            raise _Fail(MALFORMED, f"expected ({key} ...)", sec)
        return [self.atom(x, sig) for x in sec.items[1:]]

    def _conj(self, node, sig) -> list:
        if isinstance(node, Sym) and node.value == "true":
            return []
        f = _list(node, "an atom or (and ...)")
        if f.head == "and":
            return [self.atom(x, sig) for x in f.items[1:]]
        return [self.atom(f, sig)]

    def _disj(self, node, sig) -> list:
        if isinstance(node, Sym) and node.value == "false":
            return []
        f = _list(node, "an atom or (or ...)")
        if f.head == "or":
            return [self.atom(x, sig) for x in f.items[1:]]
        return [self.atom(f, sig)]

    def atom(self, node, sig):
        f = _list(node, "an atom")
        if f.head == "=":
            if len(f) != 3:
                raise _Fail(ARITY, "equation needs two terms", f)
            return Eq(self.term(f[1], sig), self.term(f[2], sig))
        rel = _text(f[0], "a relation")
        if rel not in sig.relations:
            raise _Fail(UNDECLARED_SYMBOL, f"undeclared relation {rel}", f[0])
        if len(f) - 1 != len(sig.relations[rel]):
            raise _Fail(ARITY, f"arity mismatch for {rel}: {len(f) - 1} arguments, expected {len(sig.relations[rel])}", f)
        return Atom(rel, tuple(self.term(x, sig) for x in f.items[1:]))

    def term(self, node, sig):
        if isinstance(node, SList):
            fn = _text(node[0], "a function")
            if fn not in sig.functions:
                raise _Fail(UNDECLARED_SYMBOL, f"undeclared function {fn}", node[0])
            if len(node) - 1 != len(sig.functions[fn][0]):
                raise _Fail(ARITY, f"arity mismatch for {fn}: {len(node) - 1} arguments, expected {len(sig.functions[fn][0])}", node)
            return App(fn, tuple(self.term(x, sig) for x in node.items[1:]))
        name = _text(node, "a term")
        if name in sig.functions and not sig.functions[name][0]:
            return App(name)
        return Var(name)

    # families, conditions, meta ---------------------------------------------------------------

    def family(self, f: SList):
        name = self._name(f, self.doc.families)
        host, sets = None, []
        for sec in _sections(f):
            if sec.head == "host":
                host = self.struct_ref(sec[1])
            elif sec.head == "sets":
                sets = [[_text(x) for x in _list(s).items] for s in sec.items[1:]]
            else:
                raise _Fail(MALFORMED, f"unknown family section {sec.head!r}", sec)
        if host is None:
            raise _Fail(MALFORMED, "family needs (host STRUCTURE)", f)
        for s, node in zip(sets, _sections(f)[-1].items[1:] if sets else []):
            bad = [x for x in s if x not in host.elements]
            if bad:
                raise _Fail(UNDECLARED_ELEMENT, f"undeclared element {bad[0]}", node)
        self.doc.families[name] = Family(name, host, sets)

    def condition_list(self, f: SList):
        name = self._name(f, self.doc.conditions)
        age, base = self.default_age, None
        conds = []
        for sec in _sections(f):
            if sec.head == "age":
                ref = _text(sec[1])
                if ref in self.doc.ages:
                    age = self.doc.ages[ref]
                else:
                    age = _catalog_age(ref, sec.items[2:], sec)
            elif sec.head == "base":
                base = self.struct_ref(sec[1])
            elif sec.head == "structure":
                if age is None:
                    raise _Fail(MALFORMED, "(age ...) must precede the conditions", sec)
                conds.append(self.structure_body(sec, 1, age.sig))
            else:
                raise _Fail(MALFORMED, f"unknown conditions section {sec.head!r}", sec)
        if age is None or base is None:
            raise _Fail(MALFORMED, "conditions need (age ...) and (base ...)", f)
        self.doc.conditions[name] = ConditionList(name, age, base, conds)

    def meta(self, f: SList):
        for sec in _sections(f, 1):
            vals = [self.value(x) for x in sec.items[1:]]
            self.doc.meta[sec.head] = vals[0] if len(vals) == 1 else vals

    def report(self, f: SList):
        from .properties import PropertyReport
        name = self._name(f, self.doc.reports)
        fields = {}
        for sec in _sections(f):
            if sec.head in ("params", "counterexample"):
                fields[sec.head] = {_text(_list(e)[0]): self.value(e[1]) for e in sec.items[1:]}
            elif len(sec) == 2:
                fields[sec.head] = self.value(sec[1])
            else:
                raise _Fail(MALFORMED, f"malformed report section {sec.head!r}", sec)
        try:
            rep = PropertyReport(fields["property"], fields["age"], fields["bound"], fields["verdict"],
                                 fields.get("exhaustive", True), fields.get("checked", 0),
                                 fields.get("counterexample"), fields.get("note", ""), fields.get("params", {}))
        except KeyError as exc:
            raise _Fail(MALFORMED, f"report lacks the {exc.args[0]} section", f) from None
        rep.seed = fields.get("seed", 0)
        self.doc.reports[name] = rep

    def value(self, node):
        if isinstance(node, Int) or isinstance(node, Str):
            return node.value
        if isinstance(node, Sym):
            return {"true": True, "false": False}.get(node.value, node.value)
        head = node.head
        if head == "structure":
            return self.structure_body(node, 1)
        if head == "map":
            return {self.value(_list(e)[0]): self.value(e[1]) for e in node.items[1:]}
        if head == "set":
            return {self.value(x) for x in node.items[1:]}
        if head == "list":
            return [self.value(x) for x in node.items[1:]]
        raise _Fail(MALFORMED, f"unknown value form {head!r}", node)


def _tuples(sec: SList) -> list:
    """Tuples of a relation section, written ``(rel R ((a b) ...))`` or
    ``(rel R (a b) ...)``."""
    if len(sec) == 3 and isinstance(sec[2], SList) and all(isinstance(x, SList) for x in sec[2].items):
        return list(sec[2].items)
    return list(sec.items[2:])


def _catalog_age(name, params, node):
    from . import catalog
    kw = {}
    for p in params:
        p = _list(p)
        kw[_text(p[0])] = _int(p[1])
    try:
        return catalog.get(name, **kw).age
    except (KeyError, TypeError) as exc:
        raise _Fail(UNKNOWN_REF, f"unknown class {name}: {exc}", node) from None


def _bind_one(c, sig):
    return bind_all([c], sig)


def _constraint_code(msg: str) -> str:
    if msg.startswith("undeclared"):
        return UNDECLARED_SYMBOL
    if msg.startswith("arity"):
        return ARITY
    return ILL_SORTED


def parse_document(text: str, age: AgeSpec | None = None) -> Document:
    """Parse every form of ``text``; ``age`` is the default age of condition lists."""
    return _Parser(age).run(parse(text))


def parse_signature(text: str) -> Signature:
    doc = parse_document(text)
    return _only(doc.signatures, "signature")


def parse_structure(text: str) -> FinStructure:
    doc = parse_document(text)
    return _only(doc.structures, "structure")


def parse_age(text: str) -> AgeSpec:
    doc = parse_document(text)
    return _only(doc.ages, "age")


def _only(table, what):
    if len(table) != 1:
        raise DslError([Diagnostic(MALFORMED, f"expected exactly one {what}, found {len(table)}")])
    return next(iter(table.values()))


# -- export ---------------------------------------------------------------------------------

def signature_form(name: str, sig: Signature) -> SList:
    items = ["signature", name, ["sorts", *sig.sorts]]
    for r, ar in sig.relations.items():
        items.append(["rel", r, list(ar)])
    for g, (dom, cod) in sig.functions.items():
        if dom:
            items.append(["fun", g, [list(dom), "->", cod]])
        else:
            items.append(["const", g, cod])
    return lst(*items)


def structure_form(name: str, s: FinStructure, sig_name: str | None = None) -> SList:
    items = ["structure", name, ["over", sig_name if sig_name else _inline_sig(s.sig)]]
    for srt in s.sig.sorts:
        items.append(["carrier", srt, list(s.carrier[srt])])
    for g in s.sig.functions:
        items.append(["fun", g, *[[list(args), v] for args, v in sorted(s.funcs[g].items(), key=lambda kv: _tkey(kv[0]))]])
    for r in s.sig.relations:
        items.append(["rel", r, [list(t) for t in sorted(s.rels[r], key=_tkey)]])
    return lst(*items)


def _inline_sig(sig: Signature) -> SList:
    f = signature_form("", sig)
    return SList((f.items[0],) + f.items[2:])


def _tkey(t):
    return tuple_key(t)


def term_form(t):
    if isinstance(t, Var):
        return t.name
    return [t.fn, *[term_form(a) for a in t.args]] if t.args else t.fn


def atom_form(a):
    if isinstance(a, Eq):
        return ["=", term_form(a.left), term_form(a.right)]
    return [a.rel, *[term_form(x) for x in a.args]]


def constraint_form(c):
    if isinstance(c, Clause):
        return ["clause", Str(c.label), ["body", *[atom_form(a) for a in c.body]],
                ["head", *[atom_form(a) for a in c.head]]]
    if isinstance(c, Eventually):
        return ["eventually", c.fn, c.const]
    if isinstance(c, PlaneOrientation):
        return ["orientation", c.rel, c.add, *c.scalars]
    raise TypeError(f"no export for constraint {type(c).__name__}")


def age_forms(k: AgeSpec, name: str | None = None) -> list[SList]:
    """Signature, base signature and age forms for ``k``."""
    if k.extra is not None:
        raise ValueError("ages with a non-universal predicate cannot be exported")
    name = name or k.name
    sig_name, sub_name = f"{name}-sig", f"{name}-sub"
    items = ["age", name, ["over", sig_name], ["sub", sub_name]]
    orc = k.oracle
    if not isinstance(orc, BruteForceOracle):
        items.append(["oracle", orc.name, *orc.params])
    items.append(["decoration-cap", k.decoration_cap])
    if getattr(k, "config_cap", None) is not None:
        items.append(["config-cap", k.config_cap])
    items.append(["seed", k.seed])
    items.append(["constraints", *[constraint_form(c) for c in k.constraints]])
    return [signature_form(sig_name, k.sig), signature_form(sub_name, k.subsig), lst(*items)]


def export_age(k: AgeSpec, name: str | None = None) -> str:
    return dumps(age_forms(k, name))


def export_structure(s: FinStructure, name: str = "G", sig_name: str = "sig") -> str:
    return dumps([signature_form(sig_name, s.sig), structure_form(name, s, sig_name)])


def meta_form(**fields) -> SList:
    return lst("meta", *[[k, _value_form(v, {})] for k, v in fields.items() if v is not None])


# -- property reports ------------------------------------------------------------------------

def _value_form(v, names: dict):
    if isinstance(v, FinStructure):
        f = structure_form("", v, names.get(v.sig))
        return SList((Sym("structure"),) + f.items[2:])
    if isinstance(v, bool):
        return Sym("true" if v else "false")
    if isinstance(v, int):
        return Int(v)
    if isinstance(v, str):
        return _atom_node(v)
    if isinstance(v, dict):
        return lst("map", *[[_value_form(a, names), _value_form(b, names)] for a, b in v.items()])
    if isinstance(v, (set, frozenset)):
        return lst("set", *[_value_form(x, names) for x in ordered(v)])
    if isinstance(v, (list, tuple)):
        return lst("list", *[_value_form(x, names) for x in v])
    if hasattr(v, "mapping"):
        return _value_form(dict(v.mapping), names)
    raise TypeError(f"cannot export a {type(v).__name__}")


def _atom_node(v: str):
    node = lst(v).items[0]
    return Str(v) if isinstance(node, Sym) and node.value in ("true", "false", "map", "set", "list", "structure") else node


def report_forms(rep, k: AgeSpec, name: str = "report") -> list[SList]:
    """Signatures and a ``report`` form carrying the verdict, the bound, the
    seed and the full counterexample configuration."""
    sig_name, sub_name = f"{k.name}-sig", f"{k.name}-sub"
    names = {k.sig: sig_name, k.subsig: sub_name}
    items = ["report", name, ["property", rep.property], ["age", rep.age], ["bound", rep.bound],
             ["seed", k.seed], ["verdict", rep.verdict], ["exhaustive", rep.exhaustive],
             ["checked", rep.checked]]
    if rep.note:
        items.append(["note", Str(rep.note)])
    if rep.params:
        items.append(["params", *[[a, _value_form(b, names)] for a, b in rep.params.items()]])
    if rep.counterexample is not None:
        items.append(["counterexample", *[[a, _value_form(b, names)] for a, b in rep.counterexample.items()]])
    return [signature_form(sig_name, k.sig), signature_form(sub_name, k.subsig), lst(*items)]


def export_report(rep, k: AgeSpec, name: str = "report") -> str:
    return dumps(report_forms(rep, k, name))


def parse_report(text: str):
    doc = parse_document(text)
    return _only(doc.reports, "report")
