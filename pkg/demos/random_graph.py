"""Build a finite stage of the random graph and of the two-color class.

The graph stage is checked against the 2-level extension property (any two
vertices, in any adjacency pattern, have a common witness).  The two-color
stage keeps five U-points fixed; its W-side passes the same check, which is
how the W-part ends up looking like the random graph.

    python3 demos/random_graph.py [--steps 400] [--seed 7]
"""

import argparse

from fraisse import catalog
from fraisse.generic import build_generic, chain_unions_are_conditions, verify_fr_axioms


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=400)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    graphs = catalog.get("graphs").age

    res = build_generic(graphs, steps=args.steps, seed=args.seed, n=2)
    print("graphs:", res.summary())
    print("  ", verify_fr_axioms(res.generic, graphs, 2).line())
    ok, total = chain_unions_are_conditions(res, graphs)
    print(f"   chain unions that are conditions: {ok}/{total}")

    tc = catalog.get("two-color").age
    res = build_generic(tc, base=catalog.two_color_base(5, seed=args.seed), steps=args.steps, seed=args.seed, n=2)
    w = catalog.w_side(res.generic)
    print("two-color:", res.summary())
    print(f"   U-points: {len(res.generic.rels['U'])}, W-points: {len(w)}")
    print("   W-side", verify_fr_axioms(w, graphs, 2).line())


if __name__ == "__main__":
    main()
