"""The theorem catalog: one generator and one pure check per statement.

A check receives an instance dict and an :class:`Ops` bundle and returns a
list of violation details (empty when the statement holds on the instance)
or ``None`` when the instance does not meet the statement's hypotheses.
Comparisons and lattice operations that mutations tamper with go through
``ops``; everything else calls the library directly.
"""

from __future__ import annotations

import itertools
import operator
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Optional

from ..capspace import (
    CapStructure,
    adh_reflect,
    atomic_space,
    check_prap,
    check_psap,
    final_structure,
    initial_structure,
    is_adh_fixed,
    is_approach,
    is_based,
    neighbourhood_filter,
    product_space,
    product_table,
    validate_axioms,
)
from ..compactness import relation_compact, relation_compact_pointwise, set_compactness, set_measure
from ..errors import UnknownTheorem
from ..extlat import INF, ZERO, ExtReal, ex, ex_join, ex_meet
from ..filtercalc import (
    ALL,
    LARGE_CLASSES,
    POINT_FILTERS,
    PRINCIPAL,
    Carrier,
    Filter,
    Map,
    bits,
    check_composable,
    enumerate_families,
    filter_class,
    product_carrier,
    product_relation,
    projection,
)
from ..mapclass import is_closed, is_contraction, is_perfect, is_quotient
from .instances import InstanceSpec, Source, role_carrier, space_count


def ex_sum(values) -> ExtReal:
    total = ZERO
    for v in values:
        total = total + v
    return total


@dataclass(frozen=True)
class Ops:
    """Comparison and lattice operations used at the points mutations target."""

    le: Callable = operator.le
    join: Callable = ex_join
    meet: Callable = ex_meet
    guard: bool = True  # mesh condition inside measures
    hypotheses: bool = True  # enforce side conditions such as "codomain is an approach space"

    @property
    def exact(self) -> bool:
        return self == EXACT


EXACT = Ops()


@dataclass(frozen=True)
class Theorem:
    id: str
    statement: str
    instances: Callable[[Source, InstanceSpec], Iterator[dict]]
    check: Callable[[dict, Ops], Optional[list]]
    sizes: tuple
    classes: tuple = ()
    estimate: Optional[Callable[[InstanceSpec], int]] = None

    def default_spec(self, **overrides) -> InstanceSpec:
        kw = {"sizes": self.sizes}
        kw.update(overrides)
        return InstanceSpec(**kw)

    def resolve_classes(self, spec: InstanceSpec) -> tuple:
        names = getattr(spec, "classes", ()) or ()
        if names:
            return tuple(filter_class(n) for n in names)
        return self.classes


CATALOG: dict = {}


def register(th: Theorem) -> Theorem:
    CATALOG[th.id] = th
    return th


def get_theorem(theorem_id: str) -> Theorem:
    try:
        return CATALOG[theorem_id]
    except KeyError:
        raise UnknownTheorem(f"unknown theorem id {theorem_id!r}; known: {', '.join(CATALOG)}") from None


# shared helpers ---------------------------------------------------------

def proper(c: Carrier) -> range:
    return range(1, c.full + 1)


def _spaces(src: Source, spec: InstanceSpec, role: int) -> Iterator[CapStructure]:
    for n in src.sizes(spec.size(role)):
        yield from src.spaces(n, role)


def _count(spec: InstanceSpec, role: int) -> int:
    return sum(space_count(n, spec.grid) for n in range(1, spec.size(role) + 1))


@lru_cache(maxsize=8192)
def _product(*spaces: CapStructure) -> CapStructure:
    return product_space(*spaces)


@lru_cache(maxsize=8192)
def _initial(f: Map, Y: CapStructure):
    return initial_structure(f, Y)


@lru_cache(maxsize=8192)
def _reflect(S, D):
    return adh_reflect(S, D)


@lru_cache(maxsize=8192)
def _ptable(L2: CapStructure, Y: CapStructure, reflect_second: bool):
    return product_table(L2, adh_reflect(Y, ALL) if reflect_second else Y)


def _c(S, D, A: int, F: int, guard: bool = True) -> ExtReal:
    return set_measure(S, D, A, F, guard)[0]


def _atomic_spaces(src: Source, spec: InstanceSpec, role: int) -> Iterator[CapStructure]:
    """Atomic topological spaces over carriers of the given role."""
    for n in src.sizes(spec.size(role)):
        Z = role_carrier(n, role)
        for m in src.pick(list(proper(Z))):
            yield atomic_space(Z, Filter(Z, m))


def _le_all(ops: Ops, low, high, carrier: Carrier):
    """First (F, x) with ``not ops.le(low(F)[x], high(F)[x])``, or None."""
    for F in proper(carrier):
        a, b = low.lam(F), high.lam(F)
        for x in range(carrier.n):
            if not ops.le(a[x], b[x]):
                return {"F": Filter(carrier, F), "x": carrier.elements[x], "lhs": a[x], "rhs": b[x]}
    return None


def _pointwise(ops: Ops, D, R, X, Y, bound) -> Optional[dict]:
    """First (F, x) with ``c_D^{R(x)}(R[F]) > bound(F, x)`` under ``ops.le``."""
    Xc = X.carrier
    for F in proper(Xc):
        RF = R.image_mask(F)
        for x in range(Xc.n):
            m = _c(Y, D, R.images[x], RF)
            b = bound(F, x)
            if not ops.le(m, b):
                return {"F": Filter(Xc, F), "x": Xc.elements[x], "measure": m, "bound": b}
    return None


def _relations_instances(src: Source, spec: InstanceSpec, classes) -> Iterator[dict]:
    for X in _spaces(src, spec, 0):
        for Y in _spaces(src, spec, 1):
            for R in src.relations(X.carrier, Y.carrier):
                yield {"X": X, "Y": Y, "R": R, "classes": list(classes)}


def _maps_instances(src: Source, spec: InstanceSpec, classes, onto: bool = False) -> Iterator[dict]:
    for X in _spaces(src, spec, 0):
        for Y in _spaces(src, spec, 1):
            for f in src.maps(X.carrier, Y.carrier, onto):
                yield {"X": X, "Y": Y, "f": f, "classes": list(classes)}


def _est_relations(spec: InstanceSpec) -> int:
    return _count(spec, 0) * _count(spec, 1) * (1 << (spec.size(0) * spec.size(1)))


def _est_maps(spec: InstanceSpec) -> int:
    return _count(spec, 0) * _count(spec, 1) * spec.size(1) ** spec.size(0)


def _est_pairs(spec: InstanceSpec) -> int:
    return _count(spec, 0) * _count(spec, 1)


def _est_single(spec: InstanceSpec) -> int:
    return _count(spec, 0)


# adherence ---------------------------------------------------------------

def _single_instances(src, spec):
    for S in _spaces(src, spec, 0):
        yield {"S": S}


def _check_adh_two_forms(inst, ops):
    S = inst["S"]
    c = S.carrier
    out = []
    for H in proper(c):
        ult = S.adh(H)
        for x in range(c.n):
            mesh = ops.meet(S.lam(G)[x] for G in proper(c) if G & H)
            if ult[x] != mesh:
                out.append({"H": Filter(c, H), "x": c.elements[x], "lhs": ult[x], "rhs": mesh})
    return out


register(Theorem(
    "ADH-TWO-FORMS",
    "adherence of a filter: the meet of λ over its ultrafilters equals the meet of λ over all filters meshing it",
    _single_instances, _check_adh_two_forms, sizes=(3,), estimate=_est_single))


def _with_classes(theorem_id):
    def gen(src, spec):
        classes = CATALOG[theorem_id].resolve_classes(spec)
        for S in _spaces(src, spec, 0):
            yield {"S": S, "classes": list(classes)}
    return gen


def _check_adh_measure(inst, ops):
    S = inst["S"]
    c = S.carrier
    out = []
    for J in inst["classes"]:
        T = adh_reflect(S, J)
        for F in proper(c):
            row = T.lam(F)
            for x in range(c.n):
                m = _c(S, J, 1 << x, F, ops.guard)
                if row[x] != m:
                    out.append({"class": J, "F": Filter(c, F), "x": c.elements[x], "lhs": row[x], "rhs": m})
    return out


register(Theorem(
    "THM1-ADH-MEASURE",
    "the J-adherence reflection at (F, x) equals the J-measure of compactness of F at {x}",
    _with_classes("THM1-ADH-MEASURE"), _check_adh_measure, sizes=(3,),
    classes=(ALL, PRINCIPAL, POINT_FILTERS), estimate=lambda s: 3 * _est_single(s)))


# compact relations -------------------------------------------------------

CLASS_PAIRS = (
    (ALL, PRINCIPAL),
    (ALL, LARGE_CLASSES[2]),
    (ALL, LARGE_CLASSES[3]),
    (LARGE_CLASSES[2], PRINCIPAL),
    (LARGE_CLASSES[3], PRINCIPAL),
)


def _lem1_instances(src, spec):
    th = CATALOG["LEM1-CLASS-DECREASE"]
    pairs = CLASS_PAIRS
    if spec.classes:
        cs = th.resolve_classes(spec)
        pairs = tuple((cs[0], J) for J in cs[1:]) or ((cs[0], cs[0]),)
    for X in _spaces(src, spec, 0):
        for Y in _spaces(src, spec, 1):
            for R in src.relations(X.carrier, Y.carrier):
                yield {"X": X, "Y": Y, "R": R, "pairs": [list(p) for p in pairs]}


def _check_lem1(inst, ops):
    X, Y, R = inst["X"], inst["Y"], inst["R"]
    out = []
    checked = False
    for D, J in inst["pairs"]:
        if ops.hypotheses:
            sub = all(set(J.masks(c)) <= set(D.masks(c)) for c in (X.carrier, Y.carrier))
            if not sub or not check_composable(J, PRINCIPAL, Y.carrier, X.carrier):
                continue
        checked = True
        vD = relation_compact(D, R, X, Y)
        if not vD:
            continue
        vJ = relation_compact(J, R, X, Y)
        if not vJ:
            out.append({"D": D, "J": J, "lhs": True, "rhs": False, "witness": vJ.witness})
    return out if checked else None


register(Theorem(
    "LEM1-CLASS-DECREASE",
    "a D-compact relation is J-compact whenever J ⊆ D and J is F0-composable",
    _lem1_instances, _check_lem1, sizes=(2, 2), estimate=lambda s: 5 * _est_relations(s)))


def _gen_relations(theorem_id):
    def gen(src, spec):
        return _relations_instances(src, spec, CATALOG[theorem_id].resolve_classes(spec))
    return gen


def _check_lem2(inst, ops):
    X, Y, R = inst["X"], inst["Y"], inst["R"]
    out = []
    for D in inst["classes"]:
        definitional = relation_compact(D, R, X, Y)
        w = _pointwise(ops, D, R, X, Y, lambda F, x: X.lam(F)[x])
        pointwise = w is None
        if bool(definitional) != pointwise:
            out.append({"class": D, "lhs": bool(definitional), "rhs": pointwise,
                        "definition_witness": definitional.witness, "pointwise_witness": w})
        elif ops.exact:
            lib = relation_compact_pointwise(D, R, X, Y, warn=False)
            if bool(lib) != pointwise:
                out.append({"class": D, "lhs": bool(lib), "rhs": pointwise, "library": "relation_compact_pointwise"})
    return out


register(Theorem(
    "LEM2-POINTWISE",
    "for F0-composable D: R is D-compact iff λ_X(F)(x) ≥ c_D^{R(x)}(R[F]) for every F and x",
    _gen_relations("LEM2-POINTWISE"), _check_lem2, sizes=(2, 2),
    classes=LARGE_CLASSES, estimate=lambda s: 4 * _est_relations(s)))


def _gen_maps(theorem_id, onto=False):
    def gen(src, spec):
        return _maps_instances(src, spec, CATALOG[theorem_id].resolve_classes(spec), onto)
    return gen


def _check_contraction(inst, ops):
    X, Y, f = inst["X"], inst["Y"], inst["f"]
    out = []
    checked = False
    for D in inst["classes"]:
        if ops.hypotheses and not is_adh_fixed(Y, D):
            continue
        checked = True
        a = bool(is_contraction(f, X, Y))
        b = bool(relation_compact(ALL, f, X, Y))
        c = bool(relation_compact(D, f, X, Y))
        if not a == b == c:
            out.append({"class": D, "contraction": a, "compact": b, "D_compact": c, "lhs": a, "rhs": c})
    return out if checked else None


register(Theorem(
    "COR-CONTRACTION",
    "into a codomain fixed by the D-adherence reflector: contraction ⇔ compact relation ⇔ D-compact relation",
    _gen_maps("COR-CONTRACTION"), _check_contraction, sizes=(2, 2),
    classes=LARGE_CLASSES, estimate=lambda s: 4 * _est_maps(s)))


def _check_cor_pointwise(inst, ops):
    X, Y, R = inst["X"], inst["Y"], inst["R"]
    out = []
    for D in inst["classes"]:
        definitional = relation_compact(D, R, X, Y)
        w = _pointwise(ops, D, R, X, Y, lambda F, x: _c(X, D, 1 << x, F))
        if bool(definitional) != (w is None):
            out.append({"class": D, "lhs": bool(definitional), "rhs": w is None,
                        "definition_witness": definitional.witness, "pointwise_witness": w})
    return out


register(Theorem(
    "COR-POINTWISE",
    "for F0-composable D: R is D-compact iff c_D^{x}(F) ≥ c_D^{R(x)}(R[F]) for every F and x",
    _gen_relations("COR-POINTWISE"), _check_cor_pointwise, sizes=(2, 2),
    classes=LARGE_CLASSES, estimate=lambda s: 4 * _est_relations(s)))


def _fibers_compact(Y, D, R) -> bool:
    return all(set_compactness(Y, D, Y.carrier.labels(m)) for m in R.images)


def _thm4_parts(inst, ops, D):
    X, Y, R = inst["X"], inst["Y"], inst["R"]
    f0 = bool(relation_compact(PRINCIPAL, R, X, Y))
    fibers = _fibers_compact(Y, D, R)
    full = relation_compact(D, R, X, Y)
    return f0, fibers, full


def _check_thm4(inst, ops):
    if ops.hypotheses and not is_approach(inst["Y"]):
        return None
    out = []
    for D in inst["classes"]:
        f0, fibers, full = _thm4_parts(inst, ops, D)
        if f0 and fibers and not full:
            out.append({"class": D, "lhs": True, "rhs": False, "witness": full.witness})
    return out


def _check_cor_char(inst, ops):
    if ops.hypotheses and not is_approach(inst["Y"]):
        return None
    out = []
    for D in inst["classes"]:
        f0, fibers, full = _thm4_parts(inst, ops, D)
        if (f0 and fibers) != bool(full):
            out.append({"class": D, "F0_compact": f0, "images_compact": fibers,
                        "lhs": f0 and fibers, "rhs": bool(full), "witness": full.witness})
    return out


register(Theorem(
    "THM4-APPROACH-CODOMAIN",
    "into an approach space: an F0-compact relation whose images R(x) are D-compact sets is D-compact",
    _gen_relations("THM4-APPROACH-CODOMAIN"), _check_thm4, sizes=(2, 2),
    classes=LARGE_CLASSES, estimate=lambda s: 4 * _est_relations(s)))

register(Theorem(
    "COR-CHAR",
    "into an approach space: D-compact ⇔ F0-compact with every image R(x) a D-compact set",
    _gen_relations("COR-CHAR"), _check_cor_char, sizes=(2, 2),
    classes=LARGE_CLASSES, estimate=lambda s: 4 * _est_relations(s)))


# closed, perfect and quotient maps ---------------------------------------

def _closed_with(ops, f, X, Y) -> Optional[dict]:
    Xc, Yc = X.carrier, Y.carrier
    for y in range(Yc.n):
        fiber = f.fiber_mask(y)
        for A in proper(Xc):
            adh = X.adh(A)
            lhs = ex_meet(adh[x] for x in bits(fiber))
            rhs = Y.adh(f.image_mask(A))[y]
            if not ops.le(lhs, rhs):
                return {"y": Yc.elements[y], "A": Xc.labels(A), "lhs": lhs, "rhs": rhs}
    return None


def _check_closed_f0(inst, ops):
    X, Y, f = inst["X"], inst["Y"], inst["f"]
    w = _closed_with(ops, f, X, Y)
    closed = w is None
    perfect = is_perfect(f, X, Y, PRINCIPAL)
    out = []
    if closed != bool(perfect):
        out.append({"lhs": closed, "rhs": bool(perfect), "closed_witness": w, "perfect_witness": perfect.witness})
    elif ops.exact and bool(is_closed(f, X, Y)) != closed:
        out.append({"lhs": bool(is_closed(f, X, Y)), "rhs": closed, "library": "is_closed"})
    return out


register(Theorem(
    "PROP-CLOSED-F0",
    "a map is closed iff its inverse relation is F0-compact",
    _gen_maps("PROP-CLOSED-F0"), _check_closed_f0, sizes=(3, 2), estimate=_est_maps))


def _check_thm6(inst, ops):
    X, Y, f = inst["X"], inst["Y"], inst["f"]
    if ops.hypotheses and not is_approach(X):
        return None
    out = []
    closed = bool(is_closed(f, X, Y))
    for D in inst["classes"]:
        perfect = is_perfect(f, X, Y, D)
        fibers = all(set_compactness(X, D, X.carrier.labels(f.fiber_mask(y))) for y in range(Y.carrier.n))
        if bool(perfect) != (closed and fibers):
            out.append({"class": D, "lhs": bool(perfect), "rhs": closed and fibers, "closed": closed,
                        "fibers_compact": fibers, "witness": perfect.witness})
    return out


register(Theorem(
    "THM6-PERFECT",
    "from an approach space: D-perfect ⇔ closed with every fiber D-compact",
    _gen_maps("THM6-PERFECT"), _check_thm6, sizes=(3, 2),
    classes=LARGE_CLASSES, estimate=lambda s: 4 * _est_maps(s)))


def _onto_maps_only(src, spec):
    # the statement does not involve a structure on the codomain
    for X in _spaces(src, spec, 0):
        for n in src.sizes(spec.size(1)):
            Yc = role_carrier(n, 1)
            for f in src.maps(X.carrier, Yc, onto=True):
                yield {"X": X, "f": f}


def _check_adh_final(inst, ops):
    X, f = inst["X"], inst["f"]
    Yc = f.codomain
    final = final_structure(f, X)
    fibers = [f.fiber_mask(y) for y in range(Yc.n)]
    out = []
    for Dm in proper(Yc):
        pre = 0
        for y in bits(Dm):
            pre |= fibers[y]
        adhX = X.adh(pre)
        left = final.adh(Dm)
        for y in range(Yc.n):
            rhs = ops.meet(adhX[x] for x in bits(fibers[y]))
            if left[y] != rhs:
                out.append({"D": Filter(Yc, Dm), "y": Yc.elements[y], "lhs": left[y], "rhs": rhs})
    return out


register(Theorem(
    "LEM-ADH-FINAL",
    "for onto f: adherence in the final structure at y equals the meet over the fiber of the adherence of the preimage",
    _onto_maps_only, _check_adh_final, sizes=(3, 2),
    estimate=lambda s: _count(s, 0) * s.size(1) ** s.size(0)))


def _quotient_with(ops, f, X, Y, D, final) -> Optional[dict]:
    refl = adh_reflect(final, D)
    return _le_all(ops, refl, Y, Y.carrier)


def _check_thm8(inst, ops):
    X, Y, f = inst["X"], inst["Y"], inst["f"]
    final = final_structure(f, X)
    init = _initial(f, Y)
    out = []
    for D in inst["classes"]:
        if ops.exact:
            v = is_quotient(f, X, Y, D)
            quotient, w = bool(v), v.witness
        else:
            w = _quotient_with(ops, f, X, Y, D, final)
            quotient = w is None
        rel = relation_compact(D, f, init, final)
        if quotient != bool(rel):
            out.append({"class": D, "lhs": quotient, "rhs": bool(rel), "quotient_witness": w,
                        "relation_witness": rel.witness})
    return out


register(Theorem(
    "THM8-QUOTIENT",
    "for onto f: λ_Y ≥ Adh_D λ_fX iff f is a D-compact relation from the initial to the final structure",
    _gen_maps("THM8-QUOTIENT", onto=True), _check_thm8, sizes=(3, 2),
    classes=LARGE_CLASSES, estimate=lambda s: 4 * _est_maps(s)))


def _check_perfect_quotient(inst, ops):
    X, Y, f = inst["X"], inst["Y"], inst["f"]
    out = []
    for D in inst["classes"]:
        if is_perfect(f, X, Y, D):
            q = is_quotient(f, X, Y, D)
            if not q:
                out.append({"class": D, "lhs": True, "rhs": False, "witness": q.witness})
    return out


register(Theorem(
    "PROP-PERFECT-QUOTIENT",
    "a D-perfect onto map is D-quotient",
    _gen_maps("PROP-PERFECT-QUOTIENT", onto=True), _check_perfect_quotient, sizes=(3, 2),
    classes=LARGE_CLASSES, estimate=lambda s: 4 * _est_maps(s)))


# products ------------------------------------------------------------------

def _gen_pairs(theorem_id):
    def gen(src, spec):
        classes = CATALOG[theorem_id].resolve_classes(spec)
        for X in _spaces(src, spec, 0):
            for Y in _spaces(src, spec, 1):
                yield {"X": X, "Y": Y, "classes": list(classes)}
    return gen


def _check_main_12(inst, ops):
    X, Y = inst["X"], inst["Y"]
    P = _product(X, Y)
    Xc, Yc, Pc = X.carrier, Y.carrier, P.carrier
    out = []
    for D in inst["classes"]:
        Gs = [G for G in D.masks(Yc) if G]
        for A in proper(Xc):
            for F in proper(Xc):
                alpha = _c(X, D, A, F)
                for B in proper(Yc):
                    for G in Gs:
                        lhs = _c(P, D, Pc.box(A, B), Pc.box(F, G))
                        rhs = ops.join((alpha, _c(Y, ALL, B, G)))
                        if not ops.le(lhs, rhs):
                            out.append({"class": D, "A": Xc.labels(A), "F": Filter(Xc, F), "B": Yc.labels(B),
                                        "G": Filter(Yc, G), "lhs": lhs, "rhs": rhs})
    return out


register(Theorem(
    "MAIN-PRODUCT-12",
    "c_D^{A×B}(F×G) ≤ c_D^A(F) ∨ c^B(G) for every space Y, B ⊆ Y and G in D",
    _gen_pairs("MAIN-PRODUCT-12"), _check_main_12, sizes=(2, 2),
    classes=LARGE_CLASSES, estimate=lambda s: 4 * _est_pairs(s)))


def _gen_atomic(theorem_id):
    def gen(src, spec):
        classes = CATALOG[theorem_id].resolve_classes(spec)
        for X in _spaces(src, spec, 0):
            for Y in _atomic_spaces(src, spec, 1):
                yield {"X": X, "Y": Y, "classes": list(classes)}
    return gen


def _check_main_23(inst, ops):
    X, Y = inst["X"], inst["Y"]
    P = _product(X, Y)
    Xc, Yc, Pc = X.carrier, Y.carrier, P.carrier
    N = neighbourhood_filter(Y).mask
    top = 1 << (Yc.n - 1)
    beta = _c(Y, ALL, top, N)
    out = []
    if beta != ZERO:
        out.append({"lhs": beta, "rhs": ZERO, "what": "c^{∞}(N(∞)) should vanish"})
    for D in inst["classes"]:
        for A in proper(Xc):
            for F in proper(Xc):
                low = _c(P, PRINCIPAL, Pc.box(A, top), Pc.box(F, N))
                mid = _c(P, D, Pc.box(A, top), Pc.box(F, N))
                rhs = ops.join((_c(X, D, A, F), beta))
                if not (ops.le(low, mid) and ops.le(mid, rhs)):
                    out.append({"class": D, "A": Xc.labels(A), "F": Filter(Xc, F), "lhs": low, "mid": mid, "rhs": rhs})
    return out


register(Theorem(
    "MAIN-PRODUCT-23",
    "against an atomic space: c_F0^{A×{∞}}(F×N(∞)) ≤ c_D^{A×{∞}}(F×N(∞)) ≤ c_D^A(F)",
    _gen_atomic("MAIN-PRODUCT-23"), _check_main_23, sizes=(2, 2),
    classes=LARGE_CLASSES, estimate=lambda s: 4 * _count(s, 0) * (1 << s.size(1))))


def _gen_single_classes(theorem_id):
    def gen(src, spec):
        classes = CATALOG[theorem_id].resolve_classes(spec)
        for X in _spaces(src, spec, 0):
            yield {"X": X, "classes": list(classes)}
    return gen


def _check_main_31(inst, ops):
    X = inst["X"]
    Xc = X.carrier
    out = []
    for D in inst["classes"]:
        for A in proper(Xc):
            for F in proper(Xc):
                value, w = set_measure(X, D, A, F)
                if value == ZERO or w is None:
                    continue
                Y = atomic_space(Xc, Filter(Xc, w))
                P = _product(X, Y)
                Pc = P.carrier
                top = 1 << Xc.n
                N = neighbourhood_filter(Y).mask
                got = _c(P, PRINCIPAL, Pc.box(A, top), Pc.box(F, N))
                if not ops.le(value, got):
                    out.append({"class": D, "A": Xc.labels(A), "F": Filter(Xc, F), "witness": Filter(Xc, w),
                                "lhs": value, "rhs": got})
    return out


register(Theorem(
    "MAIN-PRODUCT-31",
    "the atomic space built on the attaining filter of c_D^A(F) certifies it: c_F0^{A×{∞}}(F×N(∞)) ≥ c_D^A(F)",
    _gen_single_classes("MAIN-PRODUCT-31"), _check_main_31, sizes=(2,),
    classes=LARGE_CLASSES, estimate=lambda s: 4 * _est_single(s)))


def _maps_product_instances(src, spec):
    classes = CATALOG["MAPS-PRODUCT"].resolve_classes(spec)
    Zs = list(_spaces(src, spec, 2))
    for X in _spaces(src, spec, 0):
        for Y in _spaces(src, spec, 1):
            for R in src.relations(X.carrier, Y.carrier):
                yield {"X": X, "Y": Y, "R": R, "Z": Zs, "classes": list(classes)}


def _identity_product(R, Z):
    return product_relation(R, Map.identity(Z.carrier))


def _check_maps_product(inst, ops):
    X, Y, R = inst["X"], inst["Y"], inst["R"]
    out = []
    for D in inst["classes"]:
        compact = relation_compact(D, R, X, Y)
        if compact:
            for Z in inst["Z"]:
                if ops.hypotheses and not (is_approach(Z) and is_based(Z, D)):
                    continue
                v = relation_compact(D, _identity_product(R, Z), _product(X, Z), _product(Y, Z))
                if not v:
                    out.append({"class": D, "direction": "1=>2", "Z": Z, "lhs": True, "rhs": False,
                                "witness": v.witness})
            continue
        w = _pointwise(EXACT, D, R, X, Y, lambda F, x: X.lam(F)[x])
        if w is None:
            out.append({"class": D, "direction": "pointwise", "lhs": False, "rhs": True})
            continue
        Fm, x = w["F"].mask, X.carrier.index(w["x"])
        _, d = set_measure(Y, D, R.images[x], R.image_mask(Fm))
        Z = atomic_space(Y.carrier, Filter(Y.carrier, d))
        v = relation_compact(PRINCIPAL, _identity_product(R, Z), _product(X, Z), _product(Y, Z))
        if v:
            out.append({"class": D, "direction": "3=>1", "Z": Z, "F": w["F"], "x": w["x"],
                        "lhs": False, "rhs": True})
    return out


register(Theorem(
    "MAPS-PRODUCT",
    "R is D-compact ⇔ R × Id_Z is D-compact for D-based approach spaces Z ⇔ R × Id_Z is F0-compact for atomic Z",
    _maps_product_instances, _check_maps_product, sizes=(2, 2, 2),
    classes=(ALL, PRINCIPAL), estimate=lambda s: 2 * _est_relations(s) * _count(s, 2)))


def _tychonoff_instances(src, spec):
    for X1 in _spaces(src, spec, 0):
        for X2 in _spaces(src, spec, 1):
            yield {"factors": [X1, X2]}
    if spec.mode == "exhaustive" and len(spec.sizes) > 2:
        # seeded spot sweep over three factors of the largest size
        rng = random.Random(spec.seed)
        pools = [src.spaces(spec.size(r), r) for r in range(3)]
        for _ in range(TYCHONOFF_SPOTS):
            yield {"factors": [rng.choice(pools[r]) for r in range(3)]}


TYCHONOFF_SPOTS = 2


def _check_tychonoff(inst, ops):
    factors = inst["factors"]
    P = _product(*factors)
    Pc = P.carrier
    k = len(factors)
    cs = [S.carrier for S in factors]
    choices = [list(proper(c)) for c in cs]
    out = []
    for F in proper(Pc):
        projs = [Pc.project(F, i) for i in range(k)]
        for As in itertools.product(*choices):
            lhs = _c(P, ALL, Pc.box(*As), F)
            rhs = ops.join(_c(S, ALL, A, p) for S, A, p in zip(factors, As, projs))
            if lhs != rhs:
                out.append({"F": Filter(Pc, F), "A": [c.labels(A) for c, A in zip(cs, As)], "lhs": lhs, "rhs": rhs})
    return out


register(Theorem(
    "TYCHONOFF-FINITE",
    "c^{A_1×...×A_k}(F) = ⋁_i c^{A_i}(p_i[F]) for every filter F on a finite product",
    _tychonoff_instances, _check_tychonoff, sizes=(2, 2, 2),
    estimate=lambda s: _est_pairs(s) + TYCHONOFF_SPOTS))


def _check_product_measure(inst, ops):
    X, Y = inst["X"], inst["Y"]
    P = _product(X, Y)
    out = []
    for D in inst["classes"]:
        lhs = _c(P, D, P.carrier.full, P.carrier.full, ops.guard)
        rhs = ops.join((_c(X, D, X.carrier.full, X.carrier.full), _c(Y, ALL, Y.carrier.full, Y.carrier.full)))
        if not ops.le(lhs, rhs):
            out.append({"class": D, "lhs": lhs, "rhs": rhs})
    return out


register(Theorem(
    "COR-PRODUCT-MEASURE",
    "c_D(X×Y) ≤ c_D(X) ∨ c(Y)",
    _gen_pairs("COR-PRODUCT-MEASURE"), _check_product_measure, sizes=(2, 2),
    classes=LARGE_CLASSES, estimate=lambda s: _est_pairs(s)))


def _km_instances(src, spec):
    classes = CATALOG["COR-KM"].resolve_classes(spec)
    Ys = list(_spaces(src, spec, 1))
    atoms = list(_atomic_spaces(src, spec, 1))
    for X in _spaces(src, spec, 0):
        yield {"X": X, "Y": Ys, "atomic": atoms, "classes": list(classes)}


def _projection_to(X, Y) -> Map:
    return projection(product_carrier(X.carrier, Y.carrier), 1)


def _check_km(inst, ops):
    X = inst["X"]
    out = []
    for D in inst["classes"]:
        compact = _c(X, D, X.carrier.full, X.carrier.full) == ZERO
        bad2 = None
        for Y in inst["Y"]:
            if ops.hypotheses and not is_based(Y, D):
                continue
            if not is_perfect(_projection_to(X, Y), _product(X, Y), Y, D):
                bad2 = Y
                break
        bad3 = None
        for Y in inst["atomic"]:
            if not is_closed(_projection_to(X, Y), _product(X, Y), Y):
                bad3 = Y
                break
        flags = (compact, bad2 is None, bad3 is None)
        if len(set(flags)) != 1:
            out.append({"class": D, "compact": compact, "projections_perfect": bad2 is None,
                        "atomic_projections_closed": bad3 is None, "lhs": compact,
                        "rhs": bad2 is None and bad3 is None, "Y": bad2 or bad3})
    return out


register(Theorem(
    "COR-KM",
    "X is D-compact ⇔ every projection X×Y → Y onto a D-based space is D-perfect ⇔ every projection onto an atomic space is closed",
    _km_instances, _check_km, sizes=(2, 2),
    classes=LARGE_CLASSES, estimate=lambda s: 4 * _est_single(s) * _count(s, 1)))


def _reflector_instances(src, spec):
    classes = CATALOG["COR-REFLECTOR"].resolve_classes(spec)
    Ys = list(_spaces(src, spec, 1))
    atoms = list(_atomic_spaces(src, spec, 1))
    for X in _spaces(src, spec, 0):
        for L2 in src.spaces(X.carrier.n, 0):
            yield {"X": X, "lambda2": L2, "Y": Ys, "atomic": atoms, "classes": list(classes)}


def _check_reflector(inst, ops):
    X, L2 = inst["X"], inst["lambda2"]
    out = []
    for D in inst["classes"]:
        one = _le_all(ops, _reflect(X, D), L2, X.carrier) is None
        bad2 = None
        for Y in inst["Y"]:
            if ops.hypotheses and not is_based(Y, D):
                continue
            P = _product(X, Y)
            if _le_all(ops, _reflect(P, D), _ptable(L2, Y, True), P.carrier) is not None:
                bad2 = Y
                break
        bad3 = None
        for Y in inst["atomic"]:
            P = _product(X, Y)
            if _le_all(ops, _reflect(P, PRINCIPAL), _ptable(L2, Y, False), P.carrier) is not None:
                bad3 = Y
                break
        flags = (one, bad2 is None, bad3 is None)
        if len(set(flags)) != 1:
            out.append({"class": D, "lambda2_above_reflection": one, "products_ok": bad2 is None,
                        "atomic_products_ok": bad3 is None, "lhs": one, "rhs": bad2 is None and bad3 is None,
                        "Y": bad2 or bad3})
    return out


register(Theorem(
    "COR-REFLECTOR",
    "λ2 ≥ Adh_D λ_X ⇔ Adh_D(λ_X×λ_Y) ≤ λ2×Adh λ_Y for D-based Y ⇔ Adh_F0(λ_X×λ_Y) ≤ λ2×λ_Y for atomic Y",
    _reflector_instances, _check_reflector, sizes=(2, 2),
    classes=LARGE_CLASSES, estimate=lambda s: 4 * _est_single(s) ** 2 * _count(s, 1)))


# finite-carrier collapse -------------------------------------------------

FAMILY_SWEEP_MAX = 3


def _meta_instances(src, spec):
    for S in _spaces(src, spec, 0):
        yield {"kind": "space", "S": S}
    for n in src.sizes(spec.size(1)):
        yield {"kind": "classes", "carrier": role_carrier(n, 0)}
    for X in _spaces(src, spec, 2):
        for Y in _spaces(src, spec, 2):
            Y2 = CapStructure(role_carrier(Y.carrier.n, 1), Y.matrix)
            for f in src.maps(X.carrier, Y2.carrier):
                yield {"kind": "map", "X": X, "Y": Y2, "f": f}


def _check_meta(inst, ops):
    kind = inst["kind"]
    out = []
    if kind == "space":
        S = inst["S"]
        c = S.carrier
        rep = validate_axioms(S)
        for name in ("cal1", "cal2", "cal3"):
            v = getattr(rep, name)
            if not v:
                out.append({"property": name, "lhs": False, "rhs": True, "witness": v.witness})
        for name, fn in (("psap", check_psap), ("prap", check_prap)):
            v = fn(S)
            if not v:
                out.append({"property": name, "lhs": False, "rhs": True, "witness": v.witness})
        for D in LARGE_CLASSES:
            m = _c(S, D, c.full, c.full)
            if m != ZERO:
                out.append({"property": "compact", "class": D, "lhs": m, "rhs": ZERO})
            if not is_adh_fixed(S, D):
                out.append({"property": "adh-fixed", "class": D, "lhs": False, "rhs": True})
    elif kind == "classes":
        c = inst["carrier"]
        ref = ALL.masks(c)
        for D in LARGE_CLASSES[1:]:
            if D.masks(c) != ref:
                out.append({"property": "class-members", "class": D, "lhs": len(D.masks(c)), "rhs": len(ref)})
        if c.n <= FAMILY_SWEEP_MAX:
            for fam in enumerate_families(c):
                verdicts = [D.family_test(fam) for D in LARGE_CLASSES]
                if len(set(verdicts)) != 1:
                    out.append({"property": "family-tests", "family": [list(s) for s in fam.as_sets()],
                                "lhs": verdicts[0], "rhs": verdicts[1:]})
    else:
        X, Y, f = inst["X"], inst["Y"], inst["f"]
        closed = bool(is_closed(f, X, Y))
        perfect = bool(is_perfect(f, X, Y, ALL))
        if closed != perfect:
            out.append({"property": "closed-perfect", "lhs": closed, "rhs": perfect})
    return out


register(Theorem(
    "META-COLLAPSE",
    "on finite carriers: every structure satisfies CAL1-3, PSAP, PRAP, is compact and adherence-fixed; "
    "the large filter classes coincide; closed ⇔ perfect",
    _meta_instances, _check_meta, sizes=(3, 4, 2),
    estimate=lambda s: _est_single(s) + _count(s, 2) ** 2 * s.size(2) ** s.size(2)))
