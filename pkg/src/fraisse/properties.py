"""Bounded verification of class properties.

Every checker walks a finite space of configurations in a deterministic
order, tests each one, and stops at the first failure.  The report records
the bound, whether the walk covered the whole space, and the failing
configuration so that ``replay`` can re-run exactly that instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .ages import AgeSpec, closed_subsets
from .amalgamation import (AmalgamProblem, ExtendedProblem, dbot_candidates, extended_amalgams,
                           identifications, normalize_disjoint, strong_amalgams)
from .embeddings import CapExceeded, Embedding, automorphisms, find_embeddings, find_isomorphism
from .structure import generated_sub, restrict, union


@dataclass
class PropertyReport:
    property: str
    age: str
    bound: int
    verdict: str
    exhaustive: bool = True
    checked: int = 0
    counterexample: dict | None = None
    note: str = ""
    params: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def line(self) -> str:
        scope = "exhaustive" if self.exhaustive else "sampled"
        return (f"{self.property} [{self.age}] bound={self.bound}: {self.verdict.upper()} "
                f"({self.checked} configurations, {scope})")


class _Walk:
    """Shared driver: iterate configurations, stop at the first failure."""

    def __init__(self, name, k: AgeSpec, bound: int, cap: int | None, exhaustive: bool = True, **params):
        self.report = PropertyReport(name, k.name, bound, "pass", exhaustive, params=params)
        self.cap = cap

    def run(self, configs: Iterator[dict], test: Callable[[dict], bool]) -> PropertyReport:
        r = self.report
        if self.cap is not None:
            pool = list(itertools.islice(configs, SAMPLE_POOL + 1))
            if len(pool) > self.cap:
                # evenly spaced sample so that large configurations are reached too
                r.exhaustive = False
                r.note = f"{self.cap} of {len(pool)}{'+' if len(pool) > SAMPLE_POOL else ''} configurations, evenly spaced"
                pool = [pool[i * len(pool) // self.cap] for i in range(self.cap)]
            configs = iter(pool)
        for cfg in configs:
            r.checked += 1
            if not test(cfg):
                r.verdict = "fail"
                r.counterexample = cfg
                break
        return r


SAMPLE_POOL = 100000


def _cap(k: AgeSpec, cap):
    return cap if cap is not None else getattr(k, "config_cap", None)


# -- hereditary property ----------------------------------------------------------

def _hp_configs(k: AgeSpec, n: int):
    for b in k.enumerate(n).members:
        for sub in reversed(closed_subsets(b, proper=True)):
            yield {"b": b, "a": sub}


def _hp_instance(k: AgeSpec, cfg) -> bool:
    return k.member(restrict(cfg["b"], cfg["a"]))


def check_hp(k: AgeSpec, n: int, cap=None) -> PropertyReport:
    en = k.enumerate(n)
    return _Walk("hp", k, n, _cap(k, cap), en.exhaustive).run(_hp_configs(k, n), lambda c: _hp_instance(k, c))


# -- joint embedding ---------------------------------------------------------------------

def _jep_configs(k: AgeSpec, n: int):
    ms = k.enumerate(n).members
    for i, b in enumerate(ms):
        for c in ms[i:]:
            yield {"b": b, "c": c}


def _jep_instance(k: AgeSpec, cfg) -> bool:
    b, c = cfg["b"], cfg["c"]
    ab, ac = generated_sub(b, ()), generated_sub(c, ())
    iso = find_isomorphism(ab, ac)
    if iso is None:
        return False
    p = normalize_disjoint(b, c, ab, into_b=Embedding(ab, b, {x: x for x in ab.elements}), into_c=iso)
    return any(strong_amalgams(k, q, limit=1) for q in identifications(p))


def check_jep(k: AgeSpec, n: int, cap=None) -> PropertyReport:
    en = k.enumerate(n)
    return _Walk("jep", k, n, _cap(k, cap), en.exhaustive).run(_jep_configs(k, n), lambda c: _jep_instance(k, c))


# -- amalgamation ----------------------------------------------------------------------

def _automorphisms(s, cache: dict):
    """Automorphisms of ``s``, or just the identity when the search is too large."""
    if s not in cache:
        try:
            cache[s] = automorphisms(s, cap=AUT_REDUCTION_CAP)
        except CapExceeded:
            cache[s] = [Embedding(s, s, {x: x for x in s.elements})]
    return cache[s]


def _subset_reps(b, auts):
    """Closed subsets of ``b``, one per orbit of ``Aut(b)``."""
    seen = set()
    for sub in closed_subsets(b):
        key = min(tuple(sorted(g.mapping[x] for x in sub)) for g in auts)
        if key not in seen:
            seen.add(key)
            yield sub


def _embedding_reps(a, c, auts):
    """Embeddings of ``a`` into ``c``, one per orbit of ``Aut(c)``."""
    order = a.ordered_elements()
    seen = set()
    for e in find_embeddings(a, c):
        key = min(tuple(g.mapping[e.mapping[x]] for x in order) for g in auts)
        if key not in seen:
            seen.add(key)
            yield e


AUT_REDUCTION_CAP = 20000


def amalgam_problems(k: AgeSpec, n: int) -> Iterator[AmalgamProblem]:
    """Normalized problems with sides of rank ≤ n, smallest sides first.

    Problems related by automorphisms of ``b`` or of ``c`` have the same
    amalgams up to isomorphism, so one per orbit is produced."""
    ms = k.enumerate(n).members
    cache: dict = {}
    for b in ms:
        for sub in _subset_reps(b, _automorphisms(b, cache)):
            a = restrict(b, sub)
            ident = Embedding(a, b, {x: x for x in a.elements})
            for c in ms:
                if len(c) < len(a):
                    continue
                for e in _embedding_reps(a, c, _automorphisms(c, cache)):
                    yield normalize_disjoint(b, c, a, into_b=ident, into_c=e)


def _sap_configs(k, n):
    for p in amalgam_problems(k, n):
        yield {"a": p.a, "b": p.b, "c": p.c}


def _problem(cfg) -> AmalgamProblem:
    return AmalgamProblem(cfg["a"], cfg["b"], cfg["c"])


def _sap_instance(k: AgeSpec, cfg) -> bool:
    return bool(strong_amalgams(k, _problem(cfg), limit=1))


def _ap_instance(k: AgeSpec, cfg) -> bool:
    return any(strong_amalgams(k, q, limit=1) for q in identifications(_problem(cfg)))


def check_sap(k: AgeSpec, n: int, cap=None) -> PropertyReport:
    en = k.enumerate(n)
    return _Walk("sap", k, n, _cap(k, cap), en.exhaustive).run(_sap_configs(k, n), lambda c: _sap_instance(k, c))


def check_ap(k: AgeSpec, n: int, cap=None) -> PropertyReport:
    en = k.enumerate(n)
    return _Walk("ap", k, n, _cap(k, cap), en.exhaustive).run(_sap_configs(k, n), lambda c: _ap_instance(k, c))


def _esap_instance(k: AgeSpec, cfg) -> bool:
    """Every candidate L⊥-amalgam (or the recorded one) admits a decoration."""
    p = _problem(cfg)
    dbots = [cfg["dbot"]] if "dbot" in cfg else dbot_candidates(k, p)
    for d in dbots:
        if not extended_amalgams(ExtendedProblem(p, d), k, limit=1):
            cfg["dbot"] = d
            return False
    return True


def check_extended_sap(k: AgeSpec, n: int, cap=None) -> PropertyReport:
    en = k.enumerate(n)
    return _Walk("esap", k, n, _cap(k, cap), en.exhaustive).run(_sap_configs(k, n), lambda c: _esap_instance(k, c))


# -- unions of chains ----------------------------------------------------------------------

def _chain_configs(k: AgeSpec, n: int, length: int):
    """Chains A0 ⊂ ... ⊂ Ak of one-step extensions whose proper stages are
    members of rank ≤ n; the last stage satisfies the universal constraints
    and is the union of the chain."""
    ambient = AgeSpec(k.name + "-ambient", k.sig, k.subsig, k.constraints, k.oracle,
                      decoration_cap=k.decoration_cap, seed=k.seed)

    def grow(chain):
        top = chain[-1]
        if len(chain) > length:
            return
        exts, _ = ambient.one_point_extensions(top)
        for e in exts:
            yield {"chain": chain + [e]}
            if k.member(e) and k.rank(e) <= n:
                yield from grow(chain + [e])

    for a0 in k.enumerate(n).members:
        yield from grow([a0])


def _chain_instance(k: AgeSpec, cfg) -> bool:
    chain = cfg["chain"]
    return k.member(union(chain))


def check_chain_union(k: AgeSpec, n: int, length: int = 3, cap=None) -> PropertyReport:
    en = k.enumerate(n)
    return _Walk("cu", k, n, _cap(k, cap), en.exhaustive, length=length).run(
        _chain_configs(k, n, length), lambda c: _chain_instance(k, c))


# -- replay ----------------------------------------------------------------------------------

_INSTANCES = {
    "hp": _hp_instance,
    "jep": _jep_instance,
    "sap": _sap_instance,
    "ap": _ap_instance,
    "esap": _esap_instance,
    "cu": _chain_instance,
}

CHECKERS = {
    "hp": check_hp,
    "jep": check_jep,
    "sap": check_sap,
    "ap": check_ap,
    "esap": check_extended_sap,
    "cu": check_chain_union,
}


def register_instance(name: str, fn: Callable, checker: Callable | None = None) -> None:
    _INSTANCES[name] = fn
    if checker is not None:
        CHECKERS[name] = checker


def replay(report: PropertyReport, k: AgeSpec) -> bool:
    """True iff the recorded counterexample still fails its instance test."""
    if report.counterexample is None:
        return False
    _load_extra()
    return not _INSTANCES[report.property](k, report.counterexample)


def _load_extra() -> None:
    # the rigidity module registers "2types" and "pins" on import
    from . import rigidity  # noqa: F401


def check(k: AgeSpec, prop: str, n: int, **kw) -> PropertyReport:
    _load_extra()
    return CHECKERS[prop](k, n, **kw)
