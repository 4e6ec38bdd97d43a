"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line (collected
again in the terminal summary).  Equalities are exact; runtime bounds are
part of the criteria that state one.
"""

import pytest

from capmeasure.harness import (
    MUTATIONS,
    get_theorem,
    mutation_report,
    replay_report,
    verify,
)
from capmeasure.harness.instances import InstanceSpec

from conftest import ACCEPTANCE_LINES

GRID = (0, 1, "inf")


def record(n, ok, what):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {what}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def run(theorem_id, **spec):
    theorem = get_theorem(theorem_id)
    return verify(theorem_id, theorem.default_spec(grid=GRID, **spec))


def describe(reports):
    return "; ".join(f"{r.theorem_id} {r.instances} inst {r.violation_count} viol {r.runtime:.1f}s"
                     for r in reports)


def criterion(n, reports, limit=None):
    ok = all(r.ok for r in reports)
    total = sum(r.runtime for r in reports)
    if limit is not None:
        ok = ok and total < limit
    text = describe(reports) + (f" (limit {limit}s)" if limit else "")
    assert record(n, ok, text), "\n\n".join(r.render() for r in reports if not r.ok) or text


def test_criterion_01_adherence_forms():
    criterion(1, [run("ADH-TWO-FORMS", sizes=(3,))], limit=5)


def test_criterion_02_adherence_reflection_is_point_measure():
    criterion(2, [run("THM1-ADH-MEASURE", sizes=(3,), classes=("All", "Principal", "PointFilters"))], limit=10)


def test_criterion_03_pointwise_relation_compactness():
    criterion(3, [run("LEM2-POINTWISE", sizes=(2, 2), classes=("All",))], limit=60)


def test_criterion_04_approach_codomain_characterisation():
    criterion(4, [run("THM4-APPROACH-CODOMAIN", sizes=(2, 2)), run("COR-CHAR", sizes=(2, 2))])


def test_criterion_05_closed_and_perfect_maps():
    criterion(5, [run("PROP-CLOSED-F0", sizes=(3, 2)), run("THM6-PERFECT", sizes=(3, 2))], limit=60)


def test_criterion_06_quotients():
    criterion(6, [run("THM8-QUOTIENT", sizes=(3, 2)), run("PROP-PERFECT-QUOTIENT", sizes=(3, 2))])


def test_criterion_07_main_product_theorem():
    criterion(7, [run("MAIN-PRODUCT-12", sizes=(2, 2)), run("MAIN-PRODUCT-23"), run("MAIN-PRODUCT-31", sizes=(2,))],
              limit=120)


def test_criterion_08_finite_tychonoff():
    criterion(8, [run("TYCHONOFF-FINITE", sizes=(2, 2, 2))])


def test_criterion_09_finite_collapse():
    criterion(9, [run("META-COLLAPSE")])


@pytest.fixture(scope="module")
def mutation_reports():
    return {tid: mutation_report(tid) for tid in MUTATIONS}


def test_criterion_10_mutations_are_caught(mutation_reports):
    kinds = {m.name for m in MUTATIONS.values()}
    missed = [tid for tid, r in mutation_reports.items() if r.ok]
    ok = len(MUTATIONS) >= 6 and not missed and "flip-inequality" in kinds and len(kinds) >= 3
    text = f"{len(MUTATIONS)} mutations ({', '.join(sorted(kinds))}); missed: {missed or 'none'}"
    assert record(10, ok, text), text


def test_criterion_11_determinism_and_replay(mutation_reports):
    problems = []
    for tid, first in mutation_reports.items():
        again = mutation_report(tid)
        if again.to_json() != first.to_json():
            problems.append(f"{tid}: report differs between runs")
        if not all(replay_report(first)):
            problems.append(f"{tid}: a witness does not replay")
    spec = get_theorem("MAPS-PRODUCT").default_spec(mode="random", seed=7, count=30)
    a, b = verify("MAPS-PRODUCT", spec), verify("MAPS-PRODUCT", spec)
    if a.to_json() != b.to_json():
        problems.append("random-mode report differs between runs")
    witnesses = sum(len(r.violations) for r in mutation_reports.values())
    text = f"{len(mutation_reports) + 1} report pairs compared, {witnesses} witnesses replayed; " \
           f"problems: {problems or 'none'}"
    assert record(11, not problems, text), text
