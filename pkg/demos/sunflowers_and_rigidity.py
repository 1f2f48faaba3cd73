"""Sunflowers of conditions and automorphisms of generic stages.

The seven lines of GF(2)^3 pairwise meet in the zero vector, so they form a
sunflower with core {0}.  Copies of one graph condition glued along a shared
vertex are pairwise compatible, so the whole family is linked.

A relational class with interchangeable points (the U-points of the two-color
class) has stages with a nontrivial automorphism swapping two of them.  The
orientation stage has no automorphism found by exhaustive search.

    python3 demos/sunflowers_and_rigidity.py
"""

import pathlib

from fraisse import catalog, dsl
from fraisse.generic import build_generic
from fraisse.poset import find_sunflower, linked_subfamily
from fraisse.rigidity import rigidity_report
from fraisse.structure import make_structure

DATA = pathlib.Path(__file__).parent / "data"


def main():
    doc = dsl.parse_document((DATA / "gf2_lines.sexp").read_text())
    fam = doc.families["lines"]
    cert = find_sunflower(fam.host, fam.sets, 7)
    print(f"GF(2)^3 lines: sunflower of {len(cert.indices)} with core {sorted(cert.core)}, "
          f"replay {cert.replay(fam.host, fam.sets)}")

    k = catalog.get("graphs").age
    base = make_structure(k.subsig, {"V": ["o"] + [f"p{i}" for i in range(5)]})
    petals = [make_structure(k.sig, {"V": ["o", f"p{i}"]}, rels={"E": {("o", f"p{i}"), (f"p{i}", "o")}})
              for i in range(5)]
    lf = linked_subfamily(petals, k, base)
    print(f"edge petals at o: linked subfamily {lf.indices} of {len(petals)}")

    tc = build_generic(catalog.get("two-color").age, base=catalog.two_color_base(5), steps=200, seed=7)
    print(rigidity_report(tc.generic, name="two-color stage").line())
    ori = build_generic(catalog.get("orientation").age, steps=300, seed=7, n=1)
    print(rigidity_report(ori.generic, name="orientation stage").line())


if __name__ == "__main__":
    main()
