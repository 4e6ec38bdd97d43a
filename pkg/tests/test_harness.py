import pytest
from hypothesis import given

from capmeasure.errors import BudgetExceeded, UnknownTheorem
from capmeasure.extlat import INF, ex
from capmeasure.filtercalc import ALL, Carrier, Map, Relation, principal
from capmeasure.harness import (
    CATALOG,
    MUTATIONS,
    WEAKENINGS,
    InstanceSpec,
    check_budget,
    dumps,
    enum_spaces,
    from_jsonable,
    get_theorem,
    mutation_report,
    replay,
    replay_report,
    search_counterexample,
    to_jsonable,
    verify,
)
from capmeasure.harness.instances import BUDGET_ENV, default_budget
from capmeasure.capspace import CapStructure

from conftest import spaces


def test_enumeration_counts():
    assert len(list(enum_spaces(InstanceSpec(sizes=(2,)), 2))) == 9
    assert len(list(enum_spaces(InstanceSpec(sizes=(1,)), 1))) == 1
    assert len(list(enum_spaces(InstanceSpec(sizes=(3,), grid=(0, "inf")), 3))) == 64


def test_enumeration_order_is_lexicographic():
    first, second, *_, last = enum_spaces(InstanceSpec(sizes=(2,)), 2)
    assert first.tokens() == [["0", "0"], ["0", "0"]]
    assert second.tokens() == [["0", "0"], ["1", "0"]]
    assert last.tokens() == [["0", "inf"], ["inf", "0"]]


def test_spec_validation():
    with pytest.raises(ValueError):
        InstanceSpec(grid=(1, INF))
    with pytest.raises(ValueError):
        InstanceSpec(sizes=(0,))
    with pytest.raises(ValueError):
        InstanceSpec(mode="sometimes")
    spec = InstanceSpec(sizes=(3, 2), grid=("inf", 0, 1, 1))
    assert spec.grid == (ex(0), ex(1), INF)
    assert spec.with_max_size(2).sizes == (2, 2)
    assert spec.size(5) == 2


def test_budget_refusal():
    spec = InstanceSpec(sizes=(4,), budget=1000)
    with pytest.raises(BudgetExceeded) as err:
        list(enum_spaces(spec, 4))
    assert err.value.estimate == 3 ** 12 and err.value.budget == 1000
    with pytest.raises(BudgetExceeded):
        verify("PROP-CLOSED-F0", get_theorem("PROP-CLOSED-F0").default_spec(budget=1000))
    assert check_budget("ADH-TWO-FORMS", get_theorem("ADH-TWO-FORMS").default_spec()) > 0


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "77")
    assert default_budget() == 77
    assert InstanceSpec().budget == 77
    monkeypatch.setenv(BUDGET_ENV, "lots")
    with pytest.raises(ValueError):
        default_budget()


def test_unknown_ids():
    with pytest.raises(UnknownTheorem):
        verify("NO-SUCH-THEOREM")
    with pytest.raises(UnknownTheorem):
        mutation_report("META-COLLAPSE")
    with pytest.raises(UnknownTheorem):
        search_counterexample("NO-SUCH-WEAKENING")


def test_catalog_and_registries():
    assert len(CATALOG) >= 20
    assert len(MUTATIONS) >= 6
    for tid in MUTATIONS:
        assert tid in CATALOG
    for w in WEAKENINGS.values():
        assert w.theorem_id in CATALOG


def test_reports_are_deterministic():
    a = verify("ADH-TWO-FORMS").to_json()
    b = verify("ADH-TWO-FORMS").to_json()
    assert a == b
    assert "runtime" not in a


def test_parallel_run_matches_serial():
    spec = get_theorem("LEM-ADH-FINAL").default_spec(sizes=(2, 2))
    one = verify("LEM-ADH-FINAL", spec, jobs=1)
    two = verify("LEM-ADH-FINAL", spec, jobs=2)
    assert one.to_json() == two.to_json()
    m1 = verify("ADH-TWO-FORMS", variant="mutation:ADH-TWO-FORMS")
    m2 = verify("ADH-TWO-FORMS", variant="mutation:ADH-TWO-FORMS", jobs=2)
    assert m1.to_json() == m2.to_json() and not m1.ok


def test_random_mode_is_seeded():
    spec = get_theorem("THM1-ADH-MEASURE").default_spec(mode="random", seed=11, count=15)
    a, b = verify("THM1-ADH-MEASURE", spec), verify("THM1-ADH-MEASURE", spec)
    assert a.instances == 15 and a.to_json() == b.to_json()
    m = lambda seed: verify("ADH-TWO-FORMS", get_theorem("ADH-TWO-FORMS").default_spec(
        mode="random", seed=seed, count=40), variant="mutation:ADH-TWO-FORMS")
    assert m(1).to_json() == m(1).to_json()
    assert m(1).to_json() != m(2).to_json()


def test_witnesses_replay():
    report = mutation_report("ADH-TWO-FORMS")
    assert report.violations
    assert all(replay_report(report))
    v = report.violations[0]
    # the unmutated statement does not reproduce the mutated witness
    assert not replay("ADH-TWO-FORMS", v)


def test_weakened_strict_product_bound_fails():
    report = search_counterexample("MAIN-PRODUCT-STRICT")
    assert not report.ok
    assert all(replay_report(report))


def test_report_rendering_lists_witnesses():
    text = mutation_report("MAIN-PRODUCT-12").render()
    assert "witness 1" in text and "[mutation:MAIN-PRODUCT-12]" in text


def test_serial_roundtrip(S2):
    c2 = Carrier(("1", "2"))
    objs = [
        ex("3/4"), INF, S2, S2.table(), principal(S2.carrier, "a"), ALL,
        Map.identity(S2.carrier), Relation(S2.carrier, c2, frozenset({("a", "1")})),
        {"nested": [S2, (1, "x"), None, True]},
    ]
    for obj in objs:
        back = from_jsonable(to_jsonable(obj))
        assert dumps(back) == dumps(obj)


@given(spaces())
def test_serial_roundtrip_of_spaces(S):
    back = from_jsonable(to_jsonable(S))
    assert isinstance(back, CapStructure) and back == S
