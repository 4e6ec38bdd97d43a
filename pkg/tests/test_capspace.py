import itertools

import pytest
from hypothesis import given

from capmeasure.capspace import (
    ATOM,
    CapStructure,
    RawLambdaTable,
    adh_reflect,
    adherence,
    adherence_mesh_oracle,
    atomic_space,
    base_coreflect,
    check_ap,
    check_prap,
    check_psap,
    check_subcategory,
    contour,
    conv_parts,
    discrete,
    final_structure,
    from_convergence,
    indiscrete,
    initial_structure,
    is_adh_fixed,
    lambda_eval,
    neighbourhood_filter,
    one_point,
    product_space,
    product_table,
    triangle_inequality,
    validate_axioms,
)
from capmeasure.errors import AxiomViolation, CoverageError
from capmeasure.extlat import INF, ZERO, ex
from capmeasure.filtercalc import (
    ALL,
    POINT_FILTERS,
    PRINCIPAL,
    Carrier,
    Filter,
    Map,
    degenerate,
    enumerate_filters,
    principal,
)
from capmeasure.harness import InstanceSpec, enum_spaces

import oracle
from conftest import spaces

AB = Carrier(("a", "b"))
S3_MATRIX = [["0", "1", "inf"], ["inf", "0", "1"], ["1", "inf", "0"]]


def fam(S, F):
    X = S.carrier.elements
    return oracle.up(X, F.core) if F.mask else oracle.degenerate(X)


# construction and axioms --------------------------------------------------

def test_construction_examples(S2):
    assert one_point().matrix == ((ZERO,),)
    ind = CapStructure(AB, [[0, 0], [0, 0]])
    assert all(v == ZERO for F in range(1, 4) for v in ind.lam(F))
    assert S2.matrix[0][1] == ex(2)


def test_nonzero_diagonal_rejected():
    with pytest.raises(AxiomViolation) as err:
        CapStructure(AB, [["1", "0"], ["0", "0"]])
    assert err.value.report["cal1"] == [("a", "1")]


def test_axioms_of_canonical_tables(S2):
    assert validate_axioms(S2.table()).ok
    assert validate_axioms(RawLambdaTable(Carrier(("x",)), {1: ["0"]})).ok


def test_edited_table_breaks_cal3(S2):
    T = S2.table().with_entry(principal(AB, "ab"), "a", 0)
    rep = validate_axioms(T)
    assert not rep.cal3
    w = rep.cal3.witness
    assert (w["F"], w["G"], w["x"]) == (principal(AB, "a"), principal(AB, "b"), "a")
    assert not T.is_canonical()


def test_incomplete_table_is_reported():
    with pytest.raises(CoverageError):
        validate_axioms(RawLambdaTable(AB, {1: ["0", "1"]}))


def test_lambda_eval_examples(S2):
    assert lambda_eval(S2, principal(AB, "ab"), "a") == ex(3)
    assert lambda_eval(S2, principal(AB, "a"), "b") == ex(2)
    assert lambda_eval(S2, degenerate(AB), "a") == ZERO


@given(spaces())
def test_canonical_extension_matches_ultrafilter_join(S):
    O = oracle.Space(S.carrier.elements, S.tokens())
    for F in enumerate_filters(S.carrier, include_degenerate=True):
        assert [oracle.from_ext(v) for v in S.lam(F.mask)] == [O.lam(fam(S, F), x) for x in O.X]


@given(spaces())
def test_canonical_structures_are_valid_psap_and_prap(S):
    assert validate_axioms(S).ok
    assert check_psap(S)
    assert check_prap(S)


# subcategories ------------------------------------------------------------

def test_two_point_example_is_approach(S2):
    rep = check_subcategory(S2)
    assert rep.psap and rep.prap and rep.ap


def test_three_cycle_is_not_approach():
    S3 = CapStructure(Carrier(("a", "b", "c")), S3_MATRIX)
    v = check_ap(S3)
    assert not v
    w = v.witness
    assert (w["F"], w["y"], w["lhs"], w["rhs"]) == (principal(S3.carrier, "b"), "c", INF, ex(2))
    # the same selection violates the axiom in the set-family oracle
    O = oracle.Space(S3.carrier.elements, S3_MATRIX)
    sel = {x: oracle.up(O.X, F.core) for x, F in w["selection"].items()}
    s = max(O.lam(sel[x], x) for x in O.X)
    C = oracle.contour(O.X, fam(S3, w["F"]), sel)
    assert O.lam(C, "c") > O.lam(fam(S3, w["F"]), "c") + s
    assert not triangle_inequality(S3)


def test_ap_agrees_with_oracle_on_two_points():
    for S in enum_spaces(InstanceSpec(sizes=(2,), grid=(0, 1, 2, "inf")), 2):
        assert bool(check_ap(S)) == oracle.is_ap(oracle.Space(AB.elements, S.tokens()))[0]


@pytest.mark.parametrize("grid", [(0, 1, "inf"), (0, 1, 2, "inf")])
def test_ap_iff_triangle_inequality_up_to_three_points(grid):
    # conjecture: no divergence between the selection scan and the triangle inequality
    spec = InstanceSpec(sizes=(3,), grid=grid)
    for n in (1, 2, 3):
        for S in enum_spaces(spec, n):
            assert bool(check_ap(S)) == bool(triangle_inequality(S)), S


# contour and adherence ----------------------------------------------------

def test_contour_examples():
    X = Carrier(("a", "b", "c"))
    p = lambda s: principal(X, s)
    assert contour(p("a"), {"a": p("b"), "b": p("b"), "c": p("c")}) == p("b")
    F = p("ab")
    assert contour(F, lambda x: p(x)) == F
    assert contour(F, {"a": p("c"), "b": p("a"), "c": p("c")}) == p("ac")


def test_adherence_examples(S2):
    assert adherence(S2, principal(AB, "ab")) == (ZERO, ZERO)
    assert adherence(S2, principal(AB, "a")) == (ZERO, ex(2))
    assert adherence(S2, degenerate(AB)) == (INF, INF)
    assert adherence_mesh_oracle(S2, principal(AB, "a")) == (ZERO, ex(2))
    assert adherence_mesh_oracle(S2, principal(AB, "ab")) == (ZERO, ZERO)
    assert adherence_mesh_oracle(S2, degenerate(AB)) == (INF, INF)


@given(spaces())
def test_adherence_forms_match_oracle(S):
    O = oracle.Space(S.carrier.elements, S.tokens())
    for F in enumerate_filters(S.carrier, include_degenerate=True):
        got, alt = adherence(S, F), adherence_mesh_oracle(S, F)
        assert got == alt
        assert [oracle.from_ext(v) for v in got] == [O.adh(fam(S, F), x) for x in O.X]


# reflectors and coreflectors ----------------------------------------------

def test_adh_reflect_examples(S2):
    assert adh_reflect(S2, ALL) == S2.table()
    assert adh_reflect(S2, POINT_FILTERS).lam(AB.mask("a"))[1] == ex(2)
    assert is_adh_fixed(S2, ALL)


def test_base_coreflect_examples(S2):
    assert base_coreflect(S2, ALL) == S2.table()
    assert base_coreflect(S2, POINT_FILTERS).lam(AB.full) == (INF, INF)
    assert base_coreflect(S2, POINT_FILTERS).lam(AB.mask("a")) == S2.lam(AB.mask("a"))


@given(spaces())
def test_base_coreflection_is_above_the_input(S):
    for J in (ALL, PRINCIPAL, POINT_FILTERS):
        B = base_coreflect(S, J)
        for F in S.carrier.nonempty_subsets():
            assert all(b >= v for b, v in zip(B.lam(F), S.lam(F)))


@given(spaces())
def test_every_finite_structure_is_adherence_fixed(S):
    assert is_adh_fixed(S, ALL)


# convergence parts ----------------------------------------------------------

def test_convergence_parts(S2):
    core, refl = conv_parts(S2)
    assert core.lim(principal(AB, "a")) == {"a"}
    assert core.lim(principal(AB, "b")) == {"b"}
    assert core.lim(principal(AB, "ab")) == frozenset()
    assert refl.lim(principal(AB, "a")) == {"a", "b"}
    ind = indiscrete(AB)
    for part in conv_parts(ind):
        assert all(part.lim(principal(AB, s)) == {"a", "b"} for s in ("a", "b", "ab"))


def test_convergence_embedding_is_zero_inf_valued():
    T = from_convergence(AB, {1: {"a"}, 2: {"b"}, 3: set()})
    assert T == discrete(AB).table()


# products, initial and final structures --------------------------------------

def test_product_examples(S2):
    P = product_space(one_point(), S2)
    assert [[str(v) for v in r] for r in P.matrix] == S2.tokens()
    SS = product_space(S2, S2)
    c = SS.carrier
    assert SS.matrix[c.index("(b,a)")][c.index("(a,b)")] == ex(3)
    assert product_space(indiscrete(AB), indiscrete(AB)) == indiscrete(SS.carrier)
    assert product_table(S2, S2) == SS.table()


def test_initial_structure_examples(S2):
    assert initial_structure(Map.identity(AB), S2) == S2
    pt = one_point("p")
    assert initial_structure(Map.constant(AB, pt.carrier, "p"), pt) == indiscrete(AB)
    f = Map.from_dict(AB, AB, {"a": "a", "b": "a"})
    assert initial_structure(f, S2) == indiscrete(AB)


def test_final_structure_examples(S2):
    assert final_structure(Map.identity(AB), S2) == S2.table()
    pt = one_point("p")
    f = Map.constant(AB, pt.carrier, "p")
    assert final_structure(f, S2).lam(1) == (ZERO,)
    Y = Carrier(("a", "b", "z"))
    g = Map.from_dict(AB, Y, {"a": "a", "b": "b"})
    fin = final_structure(g, S2)
    assert fin.lam(Y.mask("a"))[2] == INF
    assert fin.lam(Y.mask("z"))[2] == ZERO


def test_final_structure_matches_oracle_on_small_maps():
    spec = InstanceSpec(sizes=(3,), grid=(0, 1, "inf"))
    Y = Carrier(("p", "q"))
    for targets in itertools.product("pq", repeat=3):
        X = Carrier(("a", "b", "c"))
        f = Map.from_dict(X, Y, dict(zip(X.elements, targets)))
        for S in list(enum_spaces(spec, 3))[::37]:
            fin = final_structure(f, S)
            want = oracle.final_table(f.graph, oracle.Space(X.elements, S.tokens()), Y.elements)
            for G in Y.nonempty_subsets():
                fG = oracle.up(Y.elements, Y.labels(G))
                assert [oracle.from_ext(v) for v in fin.lam(G)] == [want.lam(fG, y) for y in Y.elements]


def test_final_structure_can_break_cal3_on_four_points():
    X, Y = Carrier(("a", "b", "c", "d")), Carrier(("p", "q", "r"))
    f = Map.from_dict(X, Y, {"a": "p", "b": "p", "c": "q", "d": "r"})
    M = [["0"] * 4 for _ in range(4)]
    M[3][0] = M[2][1] = "inf"
    rep = validate_axioms(final_structure(f, CapStructure(X, M)))
    assert rep.cal1 and rep.cal2 and not rep.cal3
    w = rep.cal3.witness
    assert (w["F"], w["G"], w["x"], w["lambda_meet"], w["join"]) == (
        principal(Y, "q"), principal(Y, "r"), "p", INF, ZERO)


def test_final_structure_satisfies_axioms_onto_two_points():
    spec = InstanceSpec(sizes=(3,), grid=(0, 1, "inf"))
    for m in (1, 2):
        Y = Carrier(tuple("pq"[:m]))
        for n in (1, 2, 3):
            X = Carrier(tuple("abc"[:n]))
            for targets in itertools.product(Y.elements, repeat=n):
                f = Map.from_dict(X, Y, dict(zip(X.elements, targets)))
                for S in enum_spaces(spec, n):
                    assert validate_axioms(final_structure(f, S)).ok


# atomic spaces ------------------------------------------------------------------

def test_atomic_space():
    Y = atomic_space(AB, principal(AB, "a"))
    N = neighbourhood_filter(Y)
    assert N.core == {"a", ATOM}
    assert check_subcategory(Y).ap
    assert adherence(Y, N)[Y.carrier.index(ATOM)] == ZERO
    with pytest.raises(ValueError):
        atomic_space(AB, degenerate(AB))
