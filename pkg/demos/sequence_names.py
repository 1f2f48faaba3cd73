"""Names for pairs: where amalgamation of distinct 2-types breaks down.

In K_{s,2} every pair (u, v) of U-points has a name f(u, v) in W.  Two names
that share their first coordinate outside the base and differ inside it
cannot be separated over a mirror copy, so the distinct 2-types check fails
with that shape.  With five coordinates the same check passes.

    python3 demos/sequence_names.py
"""

from fraisse import catalog
from fraisse.properties import check, replay


def show(cfg):
    b = cfg["b"]
    for key in ("x0", "x1"):
        x = cfg[key]
        print(f"   {key} = {x} = f({b.apply('pi0', x)}, {b.apply('pi1', x)})")
    print(f"   base A: U = {sorted(cfg['a'].carrier['U'])}")


def main():
    e = catalog.get("seq-names", n=2)
    rep = check(e.age, "2types", 3, sort="W")
    print(rep.line())
    show(rep.counterexample)
    print("   shape f(y0,y1) / f(y0,z1):", catalog.seq_witness_shape(rep.counterexample))
    print("   replays:", replay(rep, e.age))

    for n in (2, 3, 4, 5):
        print(f"n={n}:", check(catalog.get("seq-names", n=n).age, "pins", 3, sort="W").line())
    print("n=5:", check(catalog.get("seq-names", n=5).age, "2types", 2, sort="W").line())


if __name__ == "__main__":
    main()
