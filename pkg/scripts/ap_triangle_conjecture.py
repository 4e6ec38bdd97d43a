"""Compare the approach-axiom scan with the matrix triangle inequality.

Exhaustive over every structure on up to ``--max-size`` points with values in
``--grid``; prints the number of structures per size and any divergence.
"""

import argparse
import sys

from capmeasure.capspace import check_ap, triangle_inequality
from capmeasure.harness import InstanceSpec, enum_spaces, parse_grid


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-size", type=int, default=3)
    ap.add_argument("--grid", default="0,1,2,inf")
    args = ap.parse_args(argv)

    spec = InstanceSpec(sizes=(args.max_size,), grid=parse_grid(args.grid))
    diverging = 0
    for n in range(1, args.max_size + 1):
        count = agree_ap = 0
        for S in enum_spaces(spec, n):
            count += 1
            ap_ok, tri_ok = bool(check_ap(S)), bool(triangle_inequality(S))
            agree_ap += ap_ok
            if ap_ok != tri_ok:
                diverging += 1
                print(f"  divergence: {S!r} ap={ap_ok} triangle={tri_ok}")
        print(f"n={n}: {count} structures, {agree_ap} approach spaces")
    print("no divergence" if not diverging else f"{diverging} divergences")
    return 1 if diverging else 0


if __name__ == "__main__":
    sys.exit(main())
