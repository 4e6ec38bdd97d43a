"""Running catalog entries: reports, sharded verification, replay, mutations and searches."""

from __future__ import annotations

import json
import multiprocessing
import operator
import random
import time
from dataclasses import dataclass, field, replace
from typing import Optional

from ..capspace import CapStructure, RawLambdaTable
from ..errors import BudgetExceeded, UnknownTheorem
from ..extlat import ExtReal, ex, ex_join, ex_meet
from ..filtercalc import Filter, FilterClass, Map, Relation
from .catalog import CATALOG, EXACT, Ops, ex_sum, get_theorem
from .instances import ExhaustiveSource, InstanceSpec, RandomSource
from .serial import from_jsonable, to_jsonable

MAX_WITNESSES = 25


@dataclass(frozen=True)
class Mutation:
    theorem_id: str
    name: str
    description: str
    ops: Ops


MUTATIONS = {m.theorem_id: m for m in (
    Mutation("ADH-TWO-FORMS", "meet-to-join", "mesh form takes the join instead of the meet",
             Ops(meet=ex_join)),
    Mutation("THM1-ADH-MEASURE", "drop-mesh-guard", "measure ranges over all class filters, meshing or not",
             Ops(guard=False)),
    Mutation("LEM2-POINTWISE", "flip-inequality", "pointwise criterion compared with ≥ instead of ≤",
             Ops(le=operator.ge)),
    Mutation("PROP-CLOSED-F0", "flip-inequality", "closedness inequality reversed", Ops(le=operator.ge)),
    Mutation("LEM-ADH-FINAL", "meet-to-join", "fiber side takes the join instead of the meet",
             Ops(meet=ex_join)),
    Mutation("THM8-QUOTIENT", "flip-inequality", "quotient inequality reversed", Ops(le=operator.ge)),
    Mutation("MAIN-PRODUCT-12", "join-to-meet", "bound uses ∧ instead of ∨", Ops(join=ex_meet)),
    Mutation("TYCHONOFF-FINITE", "join-to-sum", "factor measures added instead of joined", Ops(join=ex_sum)),
    Mutation("COR-PRODUCT-MEASURE", "drop-mesh-guard", "product measure ranges over all class filters",
             Ops(guard=False)),
)}


@dataclass(frozen=True)
class Weakening:
    id: str
    theorem_id: str
    description: str
    ops: Ops = EXACT
    spec: dict = field(default_factory=dict)


WEAKENINGS = {w.id: w for w in (
    Weakening("MAIN-PRODUCT-STRICT", "MAIN-PRODUCT-12",
              "conclusion strengthened to a strict inequality", Ops(le=operator.lt)),
    Weakening("THM4-NON-AP", "THM4-APPROACH-CODOMAIN",
              "codomain no longer required to be an approach space", Ops(hypotheses=False),
              {"sizes": (2, 3), "grid": ("0", "1", "2", "inf"), "mode": "random", "count": 400}),
    Weakening("LEM2-POINT-FILTERS", "LEM2-POINTWISE",
              "class of point filters, which is not F0-composable", EXACT, {"classes": ("PointFilters",)}),
    Weakening("LEM1-POINT-FILTERS", "LEM1-CLASS-DECREASE",
              "decrease to the point filters, which are not F0-composable", Ops(hypotheses=False),
              {"classes": ("All", "PointFilters")}),
    Weakening("THM6-NON-AP", "THM6-PERFECT",
              "domain no longer required to be an approach space", Ops(hypotheses=False)),
    Weakening("MAIN-PRODUCT-POINT-FILTERS", "MAIN-PRODUCT-12",
              "class of point filters, which is not composable", EXACT, {"classes": ("PointFilters",)}),
)}


@dataclass
class Violation:
    index: int
    instance: dict  # JSON-safe encoding of the instance
    detail: dict  # JSON-safe encoding of both sides and the local witness


@dataclass
class TheoremReport:
    theorem_id: str
    statement: str
    spec: InstanceSpec
    instances: int = 0
    skipped: int = 0
    violation_count: int = 0
    violations: list = field(default_factory=list)
    runtime: float = 0.0
    variant: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.violation_count == 0

    def summary(self, timing: bool = False) -> dict:
        out = {
            "theorem": self.theorem_id,
            "statement": self.statement,
            "spec": self.spec.describe(),
            "instances": self.instances,
            "skipped": self.skipped,
            "violation_count": self.violation_count,
            "violations": [{"index": v.index, "instance": v.instance, "detail": v.detail}
                           for v in self.violations],
        }
        if self.variant:
            out["variant"] = self.variant
        if timing:
            out["runtime_s"] = round(self.runtime, 3)
        return out

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.summary(timing), sort_keys=True, ensure_ascii=False, indent=2)

    def render(self) -> str:
        head = f"{self.theorem_id}"
        if self.variant:
            head += f" [{self.variant}]"
        lines = [head, f"  {self.statement}",
                 f"  spec: {json.dumps(self.spec.describe(), sort_keys=True, ensure_ascii=False)}",
                 f"  instances checked: {self.instances}"
                 + (f" ({self.skipped} outside the hypotheses)" if self.skipped else ""),
                 f"  violations: {self.violation_count}"]
        for k, v in enumerate(self.violations, 1):
            lines.append("")
            lines.append(f"  --- witness {k} (instance #{v.index}) ---")
            for key, val in from_jsonable(v.instance).items():
                lines.extend(_show_entry(key, val))
            for key, val in from_jsonable(v.detail).items():
                lines.extend(_show_entry(key, val))
        if self.violation_count > len(self.violations):
            lines.append(f"  ... {self.violation_count - len(self.violations)} more not shown")
        return "\n".join(lines)


def show(obj) -> str:
    if isinstance(obj, CapStructure):
        rows = "; ".join(" ".join(str(v) for v in r) for r in obj.matrix)
        return f"carrier {' '.join(obj.carrier.elements)} | matrix {rows}"
    if isinstance(obj, RawLambdaTable):
        rows = "; ".join(f"{obj.carrier.render(m)}↑: {' '.join(str(v) for v in vec)}"
                         for m, vec in sorted(obj.values.items()))
        return f"table {rows}"
    if isinstance(obj, Map):
        return "{" + ", ".join(f"{x}->{y}" for x, y in obj.as_dict().items()) + "}"
    if isinstance(obj, Relation):
        pairs = sorted(obj.graph, key=lambda p: (obj.domain.index(p[0]), obj.codomain.index(p[1])))
        return "{" + ", ".join(f"({x},{y})" for x, y in pairs) + "}"
    if isinstance(obj, (Filter, ExtReal)):
        return str(obj)
    if isinstance(obj, FilterClass):
        return obj.name
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{k}: {show(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        if all(isinstance(v, str) for v in obj):
            return "{" + ",".join(obj) + "}"
        return "[" + ", ".join(show(v) for v in obj) + "]"
    if obj is True:
        return "yes"
    if obj is False:
        return "no"
    return str(obj)


def _show_entry(key, val) -> list:
    if isinstance(val, list) and val and isinstance(val[0], CapStructure):
        if len(val) > 4:
            return [f"    {key}: {len(val)} spaces"]
        return [f"    {key}[{i}]: {show(v)}" for i, v in enumerate(val)]
    return [f"    {key}: {show(val)}"]


# running --------------------------------------------------------------------

def _variant_ops(variant: Optional[str]) -> Ops:
    if variant is None:
        return EXACT
    if variant.startswith("mutation:"):
        return MUTATIONS[variant.split(":", 1)[1]].ops
    if variant.startswith("weakening:"):
        return WEAKENINGS[variant.split(":", 1)[1]].ops
    raise ValueError(f"unknown variant {variant!r}")


def _stream(theorem, spec: InstanceSpec):
    if spec.mode == "exhaustive":
        yield from theorem.instances(ExhaustiveSource(spec), spec)
        return
    for rep in range(spec.count):
        rng = random.Random(f"{spec.seed}:{rep}")
        yield from theorem.instances(RandomSource(spec, rng), spec)


def _run_shard(theorem_id: str, spec: InstanceSpec, variant: Optional[str], shard: int, jobs: int) -> tuple:
    theorem = get_theorem(theorem_id)
    ops = _variant_ops(variant)
    checked = skipped = 0
    found = []
    for index, inst in enumerate(_stream(theorem, spec)):
        if index % jobs != shard:
            continue
        details = theorem.check(inst, ops)
        if details is None:
            skipped += 1
            continue
        checked += 1
        if details:
            enc = to_jsonable(inst)
            found.extend((index, enc, to_jsonable(d)) for d in details)
    return checked, skipped, found


def _shard_args(args):
    return _run_shard(*args)


def check_budget(theorem_id: str, spec: InstanceSpec) -> int:
    theorem = get_theorem(theorem_id)
    if spec.mode != "exhaustive" or theorem.estimate is None:
        return 0
    est = theorem.estimate(spec)
    if est > spec.budget:
        raise BudgetExceeded(
            f"{theorem_id}: about {est} instances exceed the budget {spec.budget}; "
            f"lower the sizes, shrink the grid or raise the budget", estimate=est, budget=spec.budget)
    return est


def verify(theorem_id: str, spec: Optional[InstanceSpec] = None, jobs: int = 1,
           variant: Optional[str] = None, max_witnesses: int = MAX_WITNESSES) -> TheoremReport:
    """Check a catalog statement on every instance an InstanceSpec describes.

    ``jobs > 1`` partitions the instance stream by index across worker
    processes; results are merged by index so the report does not depend on
    the number of workers.
    """
    theorem = get_theorem(theorem_id)
    spec = spec or theorem.default_spec()
    check_budget(theorem_id, spec)
    start = time.perf_counter()
    if jobs <= 1:
        parts = [_run_shard(theorem_id, spec, variant, 0, 1)]
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(jobs) as pool:
            parts = pool.map(_shard_args, [(theorem_id, spec, variant, k, jobs) for k in range(jobs)])
    found = sorted((v for p in parts for v in p[2]), key=lambda v: v[0])
    report = TheoremReport(
        theorem_id=theorem_id,
        statement=theorem.statement,
        spec=spec,
        instances=sum(p[0] for p in parts),
        skipped=sum(p[1] for p in parts),
        violation_count=len(found),
        violations=[Violation(i, inst, det) for i, inst, det in found[:max_witnesses]],
        runtime=time.perf_counter() - start,
        variant=variant,
    )
    return report


def replay(theorem_id: str, violation: Violation, variant: Optional[str] = None) -> bool:
    """Rebuild the recorded instance, re-run the check and look for the recorded witness."""
    theorem = get_theorem(theorem_id)
    inst = from_jsonable(violation.instance)
    details = theorem.check(inst, _variant_ops(variant)) or []
    return any(to_jsonable(d) == violation.detail for d in details)


def replay_report(report: TheoremReport) -> list:
    return [replay(report.theorem_id, v, report.variant) for v in report.violations]


def mutate_and_expect_failure(theorem_id: str, jobs: int = 1) -> bool:
    """True iff the registered mutation of the statement produces a violation on its default spec."""
    if theorem_id not in MUTATIONS:
        return False
    return not verify(theorem_id, jobs=jobs, variant=f"mutation:{theorem_id}", max_witnesses=1).ok


def mutation_report(theorem_id: str, jobs: int = 1) -> TheoremReport:
    if theorem_id not in MUTATIONS:
        raise UnknownTheorem(f"no mutation registered for {theorem_id!r}; known: {', '.join(MUTATIONS)}")
    return verify(theorem_id, jobs=jobs, variant=f"mutation:{theorem_id}", max_witnesses=3)


def search_counterexample(weakening_id: str, spec: Optional[InstanceSpec] = None,
                          jobs: int = 1) -> TheoremReport:
    """Run a statement with a hypothesis dropped or the conclusion strengthened.

    The report lists what was found within the searched range; an empty
    report says nothing about larger instances.
    """
    try:
        w = WEAKENINGS[weakening_id]
    except KeyError:
        raise UnknownTheorem(f"unknown weakening {weakening_id!r}; known: {', '.join(WEAKENINGS)}") from None
    if spec is None:
        theorem = get_theorem(w.theorem_id)
        kw = dict(w.spec)
        if "grid" in kw:
            kw["grid"] = tuple(ex(g) for g in kw["grid"])
        spec = theorem.default_spec(**kw)
    elif "classes" in w.spec and not spec.classes:
        spec = replace(spec, classes=tuple(w.spec["classes"]))
    report = verify(w.theorem_id, spec, jobs=jobs, variant=f"weakening:{weakening_id}")
    return report


def theorem_ids() -> list:
    return list(CATALOG)
