"""Run every catalog statement on its default spec and print a one-line table.

    python scripts/run_catalog.py [--jobs 2] [--json out.json]
"""

import argparse
import json
import sys

from capmeasure.harness import CATALOG, verify


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--only", nargs="*", help="theorem ids to run")
    ap.add_argument("--json", help="write all summaries to this file")
    args = ap.parse_args(argv)

    ids = args.only or list(CATALOG)
    summaries, failed = [], 0
    print(f"{'theorem':24s} {'instances':>9s} {'skipped':>8s} {'violations':>10s} {'seconds':>8s}")
    for tid in ids:
        r = verify(tid, jobs=args.jobs)
        failed += not r.ok
        summaries.append(r.summary())
        print(f"{tid:24s} {r.instances:9d} {r.skipped:8d} {r.violation_count:10d} {r.runtime:8.2f}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(summaries, fh, sort_keys=True, indent=2, ensure_ascii=False)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
