"""Print the verdict of every catalog class at its published bound.

Each row compares the checker's verdict with the expected one; failures come
with a counterexample that is replayed before it is shown.

    python3 demos/verdict_table.py [--quick]
"""

import argparse
import time

from fraisse import catalog
from fraisse.properties import check, replay


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="skip checks slower than a few seconds")
    args = ap.parse_args()
    slow = {("hypergraph", "sap"), ("hypergraph", "esap"), ("sym-hypergraph", "sap"), ("sym-hypergraph", "esap")}
    for name in catalog.listing():
        e = catalog.get(name)
        for prop, x in e.expected.items():
            if args.quick and (name, prop) in slow:
                continue
            t = time.time()
            rep = check(e.age, prop, x.bound, **x.args)
            mark = "ok " if rep.verdict == x.verdict else "!! "
            extra = ""
            if rep.verdict == "fail":
                extra = "  replay " + ("ok" if replay(rep, e.age) else "FAILED")
            print(f"{mark}{e.key():18} {prop:6} bound {x.bound}: {rep.verdict:4} "
                  f"(expected {x.verdict}; {x.anchor}) {time.time() - t:5.1f}s{extra}")


if __name__ == "__main__":
    main()
