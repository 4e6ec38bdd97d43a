"""Command-line front end.

Exit status: 0 success or verified, 1 violations found, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .capspace import CapStructure, check_subcategory, validate_axioms
from .compactness import measure_at_set
from .errors import AxiomViolation, BudgetExceeded, CapError, CoverageError, UnknownTheorem
from .filtercalc import BUILTIN_CLASSES, CLASS_ALIASES, Filter, filter_class
from .harness import (
    CATALOG,
    MUTATIONS,
    WEAKENINGS,
    InstanceSpec,
    enum_spaces,
    get_theorem,
    mutation_report,
    parse_grid,
    search_counterexample,
    verify,
)
from .harness.instances import space_count
from .io import format_space, load_map, load_space, space_to_json
from .mapclass import classify

OK, VIOLATIONS, INPUT_ERROR = 0, 1, 2


def _labels(text: str) -> list:
    return [t.strip() for t in text.split(",") if t.strip()]


def _flag(v) -> str:
    return "yes" if v else "no"


def _witness(v) -> str:
    if not v.witness:
        return ""
    return " (" + ", ".join(f"{k}={val}" for k, val in v.witness.items()) + ")"


# commands ----------------------------------------------------------------

def cmd_check(args) -> int:
    try:
        S = load_space(args.file)
    except AxiomViolation as exc:
        bad = ", ".join(f"{x}={v}" for x, v in exc.report["cal1"])
        print(f"CAL1 violated: nonzero diagonal ({bad})")
        return INPUT_ERROR
    try:
        rep = validate_axioms(S)
    except CoverageError as exc:
        print(f"incomplete table: {exc}")
        return INPUT_ERROR
    parts = []
    for name, v in (("CAL1", rep.cal1), ("CAL2", rep.cal2), ("CAL3", rep.cal3)):
        parts.append(f"{name} ok" if v else f"{name} violated{_witness(v)}")
    if not rep.ok:
        print(", ".join(parts))
        return INPUT_ERROR
    canonical = isinstance(S, CapStructure) or S.is_canonical()
    parts[-1] += " (canonical)" if canonical else " (not canonical)"
    sub = check_subcategory(S)
    parts += [f"PSAP {_flag(sub.psap)}", f"PRAP {_flag(sub.prap)}", f"AP {_flag(sub.ap)}"]
    print(", ".join(parts))
    if args.verbose:
        for name, v in (("PSAP", sub.psap), ("PRAP", sub.prap), ("AP", sub.ap)):
            if not v:
                print(f"  {name} fails{_witness(v)}")
    return OK


def cmd_measure(args) -> int:
    S = load_space(args.file)
    c = S.carrier
    D = filter_class(args.cls)
    at = _labels(args.at) if args.at else list(c.elements)
    core = _labels(args.filter)
    if not at:
        raise ValueError("--at needs at least one element")
    rep = measure_at_set(S, D, at, Filter(c, c.mask(core)))
    if args.format == "json":
        print(json.dumps({"value": str(rep.value), "class": D.name, "at": at, "filter": core,
                          "witness": None if rep.witness is None else list(c.labels(rep.witness.mask))},
                         sort_keys=True))
        return OK
    print(rep.value)
    if rep.witness is None:
        print("witness: none (no class filter meshes the filter)")
    else:
        print(f"witness: {rep.witness}")
    return OK


def cmd_classify(args) -> int:
    X, Y = load_space(args.domain), load_space(args.codomain)
    f = load_map(args.map, X.carrier, Y.carrier)
    for line in classify(f, X, Y).lines():
        print(line)
    return OK


def _spec(args, theorem_id: str, base: dict = None):
    """The theorem's default spec, overridden by whatever flags were given."""
    kw = dict(base or {})
    if args.sizes:
        kw["sizes"] = tuple(int(s) for s in _labels(args.sizes))
    if args.grid:
        kw["grid"] = parse_grid(args.grid)
    if args.mode:
        kw["mode"] = args.mode
    if args.seed is not None:
        kw["seed"] = args.seed
    if args.count is not None:
        kw["count"] = args.count
    if args.budget is not None:
        kw["budget"] = args.budget
    if args.classes:
        kw["classes"] = tuple(_labels(args.classes))
    if "grid" in kw:
        kw["grid"] = parse_grid(",".join(str(g) for g in kw["grid"]))
    spec = get_theorem(theorem_id).default_spec(**kw)
    if args.max_size is not None:
        spec = spec.with_max_size(args.max_size)
    return spec


def _emit(reports, fmt: str, timing: bool) -> None:
    if fmt == "summary":
        body = [r.summary(timing) for r in reports]
        print(json.dumps(body[0] if len(body) == 1 else body, sort_keys=True, ensure_ascii=False, indent=2))
        return
    for k, r in enumerate(reports):
        if k:
            print()
        print(r.render())
        if timing:
            print(f"  runtime: {r.runtime:.2f} s")


def cmd_verify(args) -> int:
    if args.theorem == "all":
        ids = list(MUTATIONS) if args.mutated else list(CATALOG)
    else:
        get_theorem(args.theorem)
        ids = [args.theorem]
    if args.mutated:
        # self-test: success means the mutated statement was caught
        reports = [mutation_report(t, jobs=args.jobs) for t in ids]
        _emit(reports, args.format, args.timing)
        caught = all(not r.ok for r in reports)
        if args.format != "summary":
            print()
            print("mutation caught" if caught else "MUTATION NOT CAUGHT")
        return OK if caught else VIOLATIONS
    reports = [verify(t, _spec(args, t), jobs=args.jobs, max_witnesses=args.witnesses) for t in ids]
    _emit(reports, args.format, args.timing)
    return OK if all(r.ok for r in reports) else VIOLATIONS


def cmd_search(args) -> int:
    if args.list or not args.weakening:
        for w in WEAKENINGS.values():
            print(f"{w.id:28s} {w.theorem_id:24s} {w.description}")
        return OK
    try:
        w = WEAKENINGS[args.weakening]
    except KeyError:
        raise UnknownTheorem(f"unknown weakening {args.weakening!r}; known: {', '.join(WEAKENINGS)}") from None
    overridden = any(getattr(args, k) is not None
                     for k in ("sizes", "grid", "mode", "seed", "count", "budget", "classes", "max_size"))
    spec = _spec(args, w.theorem_id, w.spec) if overridden else None
    report = search_counterexample(w.id, spec, jobs=args.jobs)
    _emit([report], args.format, args.timing)
    if args.format != "summary":
        print()
        print(f"{report.violation_count} counterexamples within the searched range" if not report.ok
              else "no counterexample within the searched range")
    return OK if report.ok else VIOLATIONS


def cmd_enumerate(args) -> int:
    what = args.what
    if what == "theorems":
        for t in CATALOG.values():
            print(f"{t.id:24s} {t.statement}")
    elif what == "mutations":
        for m in MUTATIONS.values():
            print(f"{m.theorem_id:24s} {m.name:18s} {m.description}")
    elif what == "weakenings":
        for w in WEAKENINGS.values():
            print(f"{w.id:28s} {w.theorem_id:24s} {w.description}")
    elif what == "classes":
        for name, D in BUILTIN_CLASSES.items():
            aliases = sorted(a for a, C in CLASS_ALIASES.items() if C is D)
            print(f"{name:16s} aliases: {', '.join(aliases)}")
    else:
        kw = {"sizes": (args.size,)}
        if args.grid:
            kw["grid"] = parse_grid(args.grid)
        if args.budget is not None:
            kw["budget"] = args.budget
        spec = InstanceSpec(**kw)
        if args.count_only:
            print(space_count(args.size, spec.grid))
            return OK
        spaces = enum_spaces(spec)
        if args.format == "json":
            print(json.dumps([space_to_json(S) for S in spaces], ensure_ascii=False))
        else:
            for k, S in enumerate(spaces):
                if k:
                    print()
                sys.stdout.write(format_space(S))
    return OK


# parser ------------------------------------------------------------------

def _spec_options(p) -> None:
    g = p.add_argument_group("instance spec")
    g.add_argument("--max-size", type=int, help="largest carrier size for every space role")
    g.add_argument("--sizes", help="per-role largest sizes, e.g. 3,2")
    g.add_argument("--grid", help="value grid, e.g. 0,1,inf")
    g.add_argument("--mode", choices=("exhaustive", "random"))
    g.add_argument("--seed", type=int)
    g.add_argument("--count", type=int, help="number of random instances")
    g.add_argument("--budget", type=int, help="instance ceiling (default from CAPMEASURE_BUDGET)")
    g.add_argument("--classes", help="filter classes, e.g. All,PointFilters")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--format", choices=("text", "summary"), default="text")
    p.add_argument("--timing", action="store_true", help="include runtimes (breaks byte-identical output)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="capmeasure", description="Exact measures of compactness on finite spaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="axiom and subcategory checks for a space file")
    p.add_argument("file")
    p.add_argument("-v", "--verbose", action="store_true", help="show witnesses for failed subcategory checks")
    p.set_defaults(func=cmd_check, paths=("file",))

    p = sub.add_parser("measure", help="measure of compactness of a filter at a set")
    p.add_argument("file")
    p.add_argument("--class", dest="cls", default="all", help="filter class (all, principal, points, ...)")
    p.add_argument("--at", help="comma-separated set A (default: whole carrier)")
    p.add_argument("--filter", required=True, help="comma-separated core of the filter")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_measure, paths=("file",))

    p = sub.add_parser("classify", help="classify a map between two spaces")
    p.add_argument("domain")
    p.add_argument("codomain")
    p.add_argument("map")
    p.set_defaults(func=cmd_classify, paths=("domain", "codomain", "map"))

    p = sub.add_parser("verify", help="check a catalog statement (or 'all')")
    p.add_argument("theorem")
    p.add_argument("--mutated", action="store_true",
                   help="run the registered mutation; succeeds iff it is caught")
    p.add_argument("--witnesses", type=int, default=25, help="witnesses kept in the report")
    _spec_options(p)
    p.set_defaults(func=cmd_verify, paths=())

    p = sub.add_parser("search", help="look for counterexamples to a weakened statement")
    p.add_argument("weakening", nargs="?")
    p.add_argument("--list", action="store_true")
    _spec_options(p)
    p.set_defaults(func=cmd_search, paths=())

    p = sub.add_parser("enumerate", help="list spaces, theorems, mutations, weakenings or classes")
    p.add_argument("what", choices=("spaces", "theorems", "mutations", "weakenings", "classes"))
    p.add_argument("--size", type=int, default=2)
    p.add_argument("--grid")
    p.add_argument("--budget", type=int)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_enumerate, paths=())
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    for name in args.paths:
        path = getattr(args, name)
        if not Path(path).is_file():
            print(f"capmeasure: {path}: no such file", file=sys.stderr)
            return INPUT_ERROR
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"capmeasure: refused: {exc} (estimate {exc.estimate})", file=sys.stderr)
        return INPUT_ERROR
    except UnknownTheorem as exc:
        print(f"capmeasure: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (CapError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"capmeasure: {msg}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
