import pytest
from hypothesis import given
from hypothesis import strategies as st

from capmeasure.capspace import CapStructure, indiscrete, one_point
from capmeasure.compactness import (
    FnFamily,
    indicator,
    measure_at_family,
    measure_at_set,
    point_measure,
    relation_compact,
    relation_compact_pointwise,
    set_compactness,
    set_measure,
)
from capmeasure.errors import CarrierMismatch
from capmeasure.extlat import ZERO, ex
from capmeasure.filtercalc import (
    ALL,
    BUILTIN_CLASSES,
    POINT_FILTERS,
    PRINCIPAL,
    Carrier,
    Filter,
    Map,
    Relation,
    degenerate,
    enumerate_filters,
    principal,
)

import oracle
from conftest import spaces

AB = Carrier(("a", "b"))
N2 = Carrier(("1", "2"))


def fam(c, F):
    return oracle.up(c.elements, F.core) if F.mask else oracle.degenerate(c.elements)


def test_measure_at_family_examples(S2):
    A = FnFamily.indicator(AB, ["b"])
    assert measure_at_family(S2, ALL, A, principal(AB, "a")).value == ex(2)
    zero = FnFamily(AB, [(ZERO, ZERO)])
    assert measure_at_family(S2, ALL, zero, principal(AB, "ab")).value == ZERO
    assert measure_at_family(S2, ALL, FnFamily(AB, []), principal(AB, "a")).value == ZERO


def test_measure_at_set_examples(S2):
    rep = measure_at_set(S2, ALL, ["b"], principal(AB, "a"))
    assert rep.value == ex(2)
    assert rep.witness == principal(AB, "a")
    assert measure_at_set(S2, ALL, ["a", "b"], principal(AB, "ab")).value == ZERO
    assert measure_at_set(S2, POINT_FILTERS, ["b"], principal(AB, "a")).value == ex(2)
    assert point_measure(S2, ALL, "b", principal(AB, "a")) == ex(2)


def test_degenerate_filter_has_measure_zero(S2):
    rep = measure_at_set(S2, ALL, ["a"], degenerate(AB))
    assert rep.value == ZERO and rep.witness is None


def test_measure_rejects_foreign_filters(S2):
    with pytest.raises(CarrierMismatch):
        measure_at_set(S2, ALL, ["a"], principal(N2, "1"))


def test_set_compactness_examples(S2):
    assert set_compactness(S2, ALL, ["a", "b"], "self")
    assert set_compactness(S2, ALL, ["a", "b"], "whole")
    assert set_compactness(S2, ALL, ["b"], "self")
    for x in ("a", "b"):
        assert set_compactness(S2, POINT_FILTERS, [x])


def test_relation_compact_examples(S2):
    assert relation_compact(ALL, Map.identity(AB), S2, S2)
    pt = one_point("p")
    assert relation_compact(ALL, Map.constant(AB, pt.carrier, "p"), S2, pt)
    assert relation_compact_pointwise(ALL, Map.identity(AB), S2, S2)


def test_relation_compact_failure_on_two_points():
    X = indiscrete(AB)
    Y = CapStructure(N2, [["0", "0"], ["1", "0"]])
    R = Relation(AB, N2, frozenset({("a", "2"), ("b", "1")}))
    v = relation_compact(ALL, R, X, Y)
    assert not v
    assert v.witness == {"F": principal(AB, "a"), "A": ("b",), "lhs": ex(1), "rhs": ZERO}
    assert not oracle.relation_compact("All", R.graph, oracle.Space(AB.elements, X.tokens()),
                                       oracle.Space(N2.elements, Y.tokens()))
    assert not relation_compact_pointwise(ALL, R, X, Y)


def test_pointwise_warns_for_non_composable_classes(S2):
    with pytest.warns(UserWarning):
        v = relation_compact_pointwise(POINT_FILTERS, Map.identity(AB), S2, S2)
    assert v.notes


classes = st.sampled_from(sorted(BUILTIN_CLASSES))


@given(spaces(), classes, st.data())
def test_measure_matches_oracle(S, cls, data):
    c = S.carrier
    O = oracle.Space(c.elements, S.tokens())
    A = data.draw(st.integers(1, c.full))
    for F in enumerate_filters(c, include_degenerate=True):
        got = set_measure(S, BUILTIN_CLASSES[cls], A, F.mask)[0]
        assert oracle.from_ext(got) == O.measure(cls, set(c.labels(A)), fam(c, F))


@given(spaces())
def test_every_finite_space_is_compact(S):
    c = S.carrier
    assert measure_at_set(S, ALL, c.elements, Filter(c, c.full)).value == ZERO


@given(spaces(), st.data())
def test_measure_is_antitone_in_the_set_and_monotone_in_the_class(S, data):
    c = S.carrier
    A = data.draw(st.integers(1, c.full))
    B = data.draw(st.integers(1, c.full))
    for F in range(c.full + 1):
        big = set_measure(S, ALL, A | B, F)[0]
        assert big <= set_measure(S, ALL, A, F)[0]
        assert set_measure(S, POINT_FILTERS, A, F)[0] <= set_measure(S, ALL, A, F)[0]


@given(spaces(), st.data())
def test_witness_attains_the_value(S, data):
    c = S.carrier
    A = data.draw(st.integers(1, c.full))
    F = data.draw(st.integers(1, c.full))
    value, d = set_measure(S, PRINCIPAL, A, F)
    adh = S.adh(d)
    assert d & F
    assert min(adh[i] for i in range(c.n) if (A >> i) & 1) == value


@given(spaces(lo=1, hi=2), spaces(lo=1, hi=2), st.data())
def test_relation_compact_matches_oracle(SX, SY, data):
    X, Y = SX.carrier, Carrier(tuple("12"[: SY.carrier.n]))
    SY = CapStructure(Y, SY.tokens())
    pairs = [(x, y) for x in X.elements for y in Y.elements]
    graph = frozenset(data.draw(st.sets(st.sampled_from(pairs))))
    R = Relation(X, Y, graph)
    want = oracle.relation_compact("All", graph, oracle.Space(X.elements, SX.tokens()),
                                   oracle.Space(Y.elements, SY.tokens()))
    assert bool(relation_compact(ALL, R, SX, SY)) == want
    assert bool(relation_compact_pointwise(ALL, R, SX, SY)) == want


def test_indicator():
    assert indicator(AB, ["a"]) == (ZERO, ex("inf"))
