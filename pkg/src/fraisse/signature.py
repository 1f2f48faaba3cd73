"""Multi-sorted signatures.

A signature declares sorts, relation symbols (with a sort for every argument
place) and function symbols (with a domain sequence and a codomain sort).
Constants are function symbols with an empty domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping


class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    sorts: tuple[str, ...]
    relations: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    functions: Mapping[str, tuple[tuple[str, ...], str]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "sorts", tuple(self.sorts))
        object.__setattr__(
            self, "relations",
            {name: tuple(ar) for name, ar in sorted(self.relations.items())})
        object.__setattr__(
            self, "functions",
            {name: (tuple(dom), cod) for name, (dom, cod) in sorted(self.functions.items())})
        problems = self.problems()
        if problems:
            raise SignatureError("; ".join(problems))

    @classmethod
    def one_sorted(cls, relations=None, functions=None, sort: str = "V") -> "Signature":
        """Build a signature over a single sort from plain arities.

        ``relations`` maps names to integer arities and ``functions`` maps names
        to integer arities (0 for constants).
        """
        rels = {r: (sort,) * n for r, n in (relations or {}).items()}
        funs = {f: ((sort,) * n, sort) for f, n in (functions or {}).items()}
        return cls((sort,), rels, funs)

    def problems(self) -> list[str]:
        out = []
        if len(set(self.sorts)) != len(self.sorts):
            out.append("duplicate sort name")
        declared = set(self.sorts)
        for name, ar in self.relations.items():
            if not ar:
                out.append(f"relation {name} has empty arity")
            for s in ar:
                if s not in declared:
                    out.append(f"relation {name} uses undeclared sort {s}")
        for name, (dom, cod) in self.functions.items():
            for s in (*dom, cod):
                if s not in declared:
                    out.append(f"function {name} uses undeclared sort {s}")
        names = [set(self.sorts), set(self.relations), set(self.functions)]
        if (names[0] & names[1]) or (names[0] & names[2]) or (names[1] & names[2]):
            out.append("sort, relation and function names must be disjoint")
        return out

    def __hash__(self):
        return hash((self.sorts, tuple(self.relations.items()), tuple(self.functions.items())))

    @property
    def is_relational(self) -> bool:
        return not self.functions

    @property
    def constants(self) -> list[str]:
        return [f for f, (dom, _) in self.functions.items() if not dom]

    def symbols(self) -> set[str]:
        return set(self.relations) | set(self.functions)

    def is_subsignature_of(self, other: "Signature") -> bool:
        return (set(self.sorts) <= set(other.sorts)
                and all(other.relations.get(r) == ar for r, ar in self.relations.items())
                and all(other.functions.get(f) == ar for f, ar in self.functions.items()))

    def restrict(self, symbols: Iterable[str], sorts: Iterable[str] | None = None) -> "Signature":
        """Subsignature keeping only ``symbols`` (and ``sorts``, default all)."""
        keep = set(symbols)
        return Signature(
            tuple(sorts) if sorts is not None else self.sorts,
            {r: ar for r, ar in self.relations.items() if r in keep},
            {f: ar for f, ar in self.functions.items() if f in keep},
        )

    def extend(self, relations: Mapping[str, tuple[str, ...]]) -> "Signature":
        rels = dict(self.relations)
        rels.update(relations)
        return Signature(self.sorts, rels, self.functions)

    def extra_relations(self, sub: "Signature") -> list[str]:
        """Relation symbols of ``self`` that are not in ``sub``."""
        return [r for r in self.relations if r not in sub.relations]
