"""Counterexample search for every registered weakening, optionally on larger specs.

    python scripts/search_weakenings.py                 # registered specs
    python scripts/search_weakenings.py --wide          # a few larger sweeps
"""

import argparse
import sys

from capmeasure.harness import WEAKENINGS, get_theorem, search_counterexample
from capmeasure.extlat import ex

# larger sweeps than the registered defaults; each stays within a few minutes
WIDE = {
    "LEM2-POINT-FILTERS": {"sizes": (3, 2), "classes": ("PointFilters",)},
    "LEM1-POINT-FILTERS": {"sizes": (3, 2), "classes": ("All", "PointFilters")},
    "THM4-NON-AP": {"sizes": (3, 3), "grid": ("0", "1", "2", "inf"), "mode": "random", "count": 2000, "seed": 1},
    "MAIN-PRODUCT-POINT-FILTERS": {"sizes": (2, 2), "grid": ("0", "1", "2", "inf"), "classes": ("PointFilters",)},
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--wide", action="store_true", help="run the larger sweeps where defined")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--only", nargs="*")
    args = ap.parse_args(argv)

    for wid in args.only or list(WEAKENINGS):
        w = WEAKENINGS[wid]
        spec = None
        if args.wide and wid in WIDE:
            kw = dict(WIDE[wid])
            if "grid" in kw:
                kw["grid"] = tuple(ex(g) for g in kw["grid"])
            spec = get_theorem(w.theorem_id).default_spec(**kw)
        r = search_counterexample(wid, spec, jobs=args.jobs)
        print(f"{wid:28s} {r.instances:8d} instances ({r.skipped} skipped)  {r.violation_count:8d} violations  "
              f"{r.runtime:7.1f}s  {w.description}")
        if r.violations:
            v = r.violations[0]
            print(f"    first witness: instance #{v.index}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
