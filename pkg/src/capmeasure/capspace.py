"""Convergence-approach structures on finite carriers.

A structure is encoded by its point-filter matrix ``M[x][y] = λ({x}↑)(y)``
(row = generating point, column = evaluation point).  Because every filter on
a finite carrier is principal and λ turns finite meets into joins, the value
on ``A↑`` is the columnwise join of the rows in ``A``; the degenerate filter
gets the empty join, 0.

:class:`RawLambdaTable` holds an arbitrary assignment of vectors to proper
filters.  It is what user-supplied tables, reflector outputs and final
structures produce, and what the axiom validator consumes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .errors import AxiomViolation, BudgetExceeded, CarrierMismatch, CoverageError
from .extlat import INF, ZERO, ExtReal, ex, ex_join, ex_meet
from .filtercalc import (
    Carrier,
    Filter,
    FilterClass,
    Map,
    Verdict,
    bits,
    popcount,
    product_carrier,
)

Vector = tuple  # tuple of ExtReal indexed by carrier position


def _join_vec(a: Vector, b: Vector) -> Vector:
    return tuple(x if x >= y else y for x, y in zip(a, b))


def _meet_vec(a: Vector, b: Vector) -> Vector:
    return tuple(x if x <= y else y for x, y in zip(a, b))


class LambdaSpace:
    """Common read interface of canonical structures and raw tables."""

    carrier: Carrier

    def lam(self, mask: int) -> Vector:
        raise NotImplementedError

    def row(self, z: int) -> Vector:
        return self.lam(1 << z)

    def value(self, F: Filter, x: str) -> ExtReal:
        self._check(F)
        return self.lam(F.mask)[self.carrier.index(x)]

    def vector(self, F: Filter) -> Vector:
        self._check(F)
        return self.lam(F.mask)

    def _check(self, F: Filter) -> None:
        if F.carrier is not self.carrier and F.carrier != self.carrier:
            raise CarrierMismatch("filter lives on a different carrier than the space")

    # per-instance cache of derived tables (lam, adh, measures, flags);
    # subclasses create it in __init__
    memo: dict

    def adh(self, mask: int) -> Vector:
        """Adherence of ``mask↑`` via its ultrafilters (point filters of the core)."""
        table = self.memo.get("adh")
        if table is None:
            n, full = self.carrier.n, self.carrier.full
            table = [None] * (full + 1)
            table[0] = (INF,) * n
            for m in range(1, full + 1):
                low = m & -m
                table[m] = _meet_vec(table[m ^ low], self.row(low.bit_length() - 1))
            self.memo["adh"] = table
        return table[mask]

    def table(self) -> "RawLambdaTable":
        return RawLambdaTable(self.carrier, {m: self.lam(m) for m in self.carrier.nonempty_subsets()})


class CapStructure(LambdaSpace):
    def __init__(self, carrier: Carrier, matrix: Sequence[Sequence]):
        rows = tuple(tuple(ex(v) for v in row) for row in matrix)
        n = carrier.n
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"matrix must be {n}x{n} for carrier {list(carrier.elements)}")
        bad = [carrier.elements[i] for i in range(n) if rows[i][i] != ZERO]
        if bad:
            raise AxiomViolation(
                f"CAL1 violated: nonzero diagonal at {bad}",
                {"cal1": [(x, str(rows[carrier.index(x)][carrier.index(x)])) for x in bad]},
            )
        self.carrier = carrier
        self.matrix = rows
        self.memo = {}

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence], carrier: Optional[Carrier] = None) -> "CapStructure":
        if carrier is None:
            carrier = Carrier.letters(len(matrix))
        return cls(carrier, matrix)

    def lam(self, mask: int) -> Vector:
        table = self.memo.get("lam")
        if table is None:
            n, full = self.carrier.n, self.carrier.full
            table = [None] * (full + 1)
            table[0] = (ZERO,) * n
            for m in range(1, full + 1):
                low = m & -m
                table[m] = _join_vec(table[m ^ low], self.matrix[low.bit_length() - 1])
            self.memo["lam"] = table
        return table[mask]

    def row(self, z: int) -> Vector:
        return self.matrix[z]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CapStructure):
            return NotImplemented
        return self.carrier == other.carrier and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash((self.carrier, self.matrix))

    def __repr__(self) -> str:
        rows = "; ".join(" ".join(str(v) for v in r) for r in self.matrix)
        return f"CapStructure({list(self.carrier.elements)}, [{rows}])"

    def tokens(self) -> list:
        return [[str(v) for v in r] for r in self.matrix]


class RawLambdaTable(LambdaSpace):
    def __init__(self, carrier: Carrier, values: Mapping):
        self.carrier = carrier
        self.memo = {}
        vals = {}
        for key, vec in values.items():
            m = key.mask if isinstance(key, Filter) else int(key)
            if m <= 0 or m > carrier.full:
                raise ValueError(f"table keys must be proper filters, got mask {m}")
            vec = tuple(ex(v) for v in vec)
            if len(vec) != carrier.n:
                raise ValueError("table vectors must have one entry per carrier element")
            vals[m] = vec
        self.values = vals

    def lam(self, mask: int) -> Vector:
        if mask == 0:
            return (ZERO,) * self.carrier.n
        try:
            return self.values[mask]
        except KeyError:
            raise CoverageError(f"table has no entry for {self.carrier.render(mask)}↑") from None

    def missing(self) -> list:
        return [m for m in self.carrier.nonempty_subsets() if m not in self.values]

    def is_canonical(self) -> bool:
        try:
            canon = self.to_structure()
        except (AxiomViolation, CoverageError):
            return False
        return all(canon.lam(m) == v for m, v in self.values.items())

    def to_structure(self) -> CapStructure:
        return CapStructure(self.carrier, [self.lam(1 << i) for i in range(self.carrier.n)])

    def __eq__(self, other) -> bool:
        if isinstance(other, CapStructure):
            other = other.table()
        if not isinstance(other, RawLambdaTable):
            return NotImplemented
        return self.carrier == other.carrier and self.values == other.values

    def __repr__(self) -> str:
        return f"RawLambdaTable({list(self.carrier.elements)}, {len(self.values)} entries)"

    def with_entry(self, F: Filter, x: str, value) -> "RawLambdaTable":
        vals = dict(self.values)
        vec = list(vals[F.mask])
        vec[self.carrier.index(x)] = ex(value)
        vals[F.mask] = tuple(vec)
        return RawLambdaTable(self.carrier, vals)


def from_matrix(matrix, carrier: Optional[Carrier] = None) -> CapStructure:
    return CapStructure.from_matrix(matrix, carrier)


def indiscrete(carrier: Carrier) -> CapStructure:
    return CapStructure(carrier, [[ZERO] * carrier.n for _ in range(carrier.n)])


def discrete(carrier: Carrier) -> CapStructure:
    """Every point isolated: λ(F)(x) = 0 only for F = {x}↑."""
    n = carrier.n
    return CapStructure(carrier, [[ZERO if i == j else INF for j in range(n)] for i in range(n)])


def one_point(label: str = "p") -> CapStructure:
    return CapStructure(Carrier((label,)), [[ZERO]])


def lambda_eval(S: LambdaSpace, F: Filter, x: str) -> ExtReal:
    return S.value(F, x)


# axioms ----------------------------------------------------------------

@dataclass(frozen=True)
class AxiomReport:
    cal1: Verdict
    cal2: Verdict
    cal3: Verdict

    @property
    def ok(self) -> bool:
        return bool(self.cal1 and self.cal2 and self.cal3)


def _as_space(T) -> LambdaSpace:
    if isinstance(T, LambdaSpace):
        return T
    raise TypeError(f"expected a CapStructure or RawLambdaTable, got {type(T).__name__}")


def validate_axioms(T: LambdaSpace) -> AxiomReport:
    """Check CAL1-CAL3 on every proper filter; reports the first witness of each failure."""
    T = _as_space(T)
    c = T.carrier
    if isinstance(T, RawLambdaTable):
        missing = T.missing()
        if missing:
            raise CoverageError(f"table misses {len(missing)} proper filters, e.g. {c.render(missing[0])}↑")
    n, proper = c.n, c.nonempty_subsets()

    cal1 = Verdict(True)
    for i in range(n):
        v = T.lam(1 << i)[i]
        if v != ZERO:
            cal1 = Verdict(False, {"point": c.elements[i], "value": v})
            break

    cal2 = Verdict(True)
    for F in proper:
        lf = T.lam(F)
        # every finer filter G (core G inside core F) must have smaller values
        sub = F
        while sub and cal2:
            lg = T.lam(sub)
            for x in range(n):
                if not lf[x] >= lg[x]:
                    cal2 = Verdict(False, {"F": Filter(c, F), "G": Filter(c, sub), "x": c.elements[x],
                                           "lambda_F": lf[x], "lambda_G": lg[x]})
                    break
            sub = (sub - 1) & F
        if not cal2:
            break

    cal3 = Verdict(True)
    for F in proper:
        for G in proper:
            lfg, lf, lg = T.lam(F | G), T.lam(F), T.lam(G)
            for x in range(n):
                j = lf[x] if lf[x] >= lg[x] else lg[x]
                if lfg[x] != j:
                    cal3 = Verdict(False, {"F": Filter(c, F), "G": Filter(c, G), "x": c.elements[x],
                                           "lambda_meet": lfg[x], "join": j})
                    break
            if not cal3:
                break
        if not cal3:
            break
    return AxiomReport(cal1, cal2, cal3)


# subcategories ---------------------------------------------------------

@dataclass(frozen=True)
class SubcategoryReport:
    psap: Verdict
    prap: Verdict
    ap: Verdict


def check_psap(T: LambdaSpace) -> Verdict:
    c = T.carrier
    for F in c.nonempty_subsets():
        expect = (ZERO,) * c.n
        for z in bits(F):
            expect = _join_vec(expect, T.row(z))
        got = T.lam(F)
        if got != expect:
            x = next(i for i in range(c.n) if got[i] != expect[i])
            return Verdict(False, {"F": Filter(c, F), "x": c.elements[x], "lambda": got[x], "ultra_join": expect[x]})
    return Verdict(True)


PRAP_FAMILY_LIMIT = 1 << 16


def check_prap(T: LambdaSpace, limit: int = PRAP_FAMILY_LIMIT) -> Verdict:
    """λ(⋀ F_j) = ⋁ λ(F_j) for every nonempty family of proper filters."""
    c = T.carrier
    proper = list(c.nonempty_subsets())
    k = len(proper)
    if (1 << k) > limit:
        raise BudgetExceeded(f"PRAP scan needs 2^{k} families", estimate=1 << k, budget=limit)
    # dynamic programme over families encoded as bitsets of filter positions
    cores = [0] * (1 << k)
    joins = [None] * (1 << k)
    joins[0] = (ZERO,) * c.n
    for code in range(1, 1 << k):
        low = code & -code
        pos = low.bit_length() - 1
        cores[code] = cores[code ^ low] | proper[pos]
        joins[code] = _join_vec(joins[code ^ low], T.lam(proper[pos]))
        got = T.lam(cores[code])
        if got != joins[code]:
            fam = [Filter(c, proper[i]) for i in bits(code)]
            x = next(i for i in range(c.n) if got[i] != joins[code][i])
            return Verdict(False, {"family": fam, "x": c.elements[x], "lambda_meet": got[x], "join": joins[code][x]})
    return Verdict(True)


AP_SELECTION_LIMIT = 200_000


def check_ap(T: LambdaSpace, limit: int = AP_SELECTION_LIMIT) -> Verdict:
    """Exhaustive scan of the approach axiom over all selections X -> proper filters."""
    c = T.carrier
    n, full = c.n, c.full
    proper = range(1, full + 1)
    count = full ** n
    if count > limit:
        raise BudgetExceeded(f"AP scan needs {count} selections", estimate=count, budget=limit)
    lam = T.lam
    cont = [0] * (full + 1)
    for sel in itertools.product(proper, repeat=n):
        s = ex_join(lam(sel[x])[x] for x in range(n))
        if s.is_inf:
            continue
        for F in proper:
            low = F & -F
            cont[F] = cont[F ^ low] | sel[low.bit_length() - 1]
            lhs, rhs = lam(cont[F]), lam(F)
            for y in range(n):
                if lhs[y] > rhs[y] + s:
                    return Verdict(False, {
                        "F": Filter(c, F),
                        "selection": {c.elements[x]: Filter(c, sel[x]) for x in range(n)},
                        "y": c.elements[y],
                        "lhs": lhs[y],
                        "rhs": rhs[y] + s,
                    })
    return Verdict(True)


def check_subcategory(T: LambdaSpace) -> SubcategoryReport:
    T = _as_space(T)
    key = "subcategory"
    if key not in T.memo:
        T.memo[key] = SubcategoryReport(check_psap(T), check_prap(T), check_ap(T))
    return T.memo[key]


def is_approach(T: LambdaSpace) -> bool:
    memo = T.memo
    if "ap" not in memo:
        memo["ap"] = bool(check_ap(T))
    return memo["ap"]


def triangle_inequality(S: CapStructure) -> Verdict:
    """M[z][y] <= M[x][y] + M[z][x] for all x, y, z."""
    M, c = S.matrix, S.carrier
    for z in range(c.n):
        for x in range(c.n):
            for y in range(c.n):
                if M[z][y] > M[x][y] + M[z][x]:
                    return Verdict(False, {"x": c.elements[x], "y": c.elements[y], "z": c.elements[z]})
    return Verdict(True)


def contour(F: Filter, G: Union[Mapping[str, Filter], Callable[[str], Filter]]) -> Filter:
    """``⋃_{A∈F} ⋂_{x∈A} G(x)``; on a finite carrier its core is the union of the cores of G over core F."""
    c = F.carrier
    pick = G if callable(G) else G.__getitem__
    out = 0
    for i in bits(F.mask):
        g = pick(c.elements[i])
        if g.carrier != c:
            raise CarrierMismatch("selection values must live on the filter's carrier")
        out |= g.mask
    return Filter(c, out)


# adherence, reflectors, coreflectors -----------------------------------

def adherence(S: LambdaSpace, H: Filter) -> Vector:
    """Pointwise meet of λ over the ultrafilters finer than H."""
    S._check(H)
    return S.adh(H.mask)


def adherence_mesh_oracle(S: LambdaSpace, H: Filter) -> Vector:
    """Pointwise meet of λ(G) over every proper G meshing H."""
    S._check(H)
    c = S.carrier
    return tuple(
        ex_meet(S.lam(G)[x] for G in c.nonempty_subsets() if G & H.mask)
        for x in range(c.n)
    )


def adh_reflect(S: LambdaSpace, J: FilterClass) -> RawLambdaTable:
    """``(Adh_J λ)(F)(x)``: join of adh H(x) over class filters H meshing F."""
    c = S.carrier
    Jm = [m for m in J.masks(c) if m]
    out = {}
    for F in c.nonempty_subsets():
        vec = (ZERO,) * c.n
        for H in Jm:
            if H & F:
                vec = _join_vec(vec, S.adh(H))
        out[F] = vec
    return RawLambdaTable(c, out)


def base_coreflect(S: LambdaSpace, J: FilterClass) -> RawLambdaTable:
    """``(Base_J λ)(F)``: meet of λ(G) over class filters G coarser than F."""
    c = S.carrier
    Jm = [m for m in J.masks(c) if m]
    out = {}
    for F in c.nonempty_subsets():
        vec = (INF,) * c.n
        for G in Jm:
            if G & F == F:
                vec = _meet_vec(vec, S.lam(G))
        out[F] = vec
    return RawLambdaTable(c, out)


def is_adh_fixed(S: LambdaSpace, J: FilterClass) -> bool:
    key = ("adh_fixed", J.name)
    if key not in S.memo:
        S.memo[key] = adh_reflect(S, J) == S.table()
    return S.memo[key]


def is_based(S: LambdaSpace, J: FilterClass) -> bool:
    key = ("based", J.name)
    if key not in S.memo:
        S.memo[key] = base_coreflect(S, J) == S.table()
    return S.memo[key]


@dataclass(frozen=True)
class ConvergenceRelation:
    carrier: Carrier
    limits: Mapping  # proper filter mask -> frozenset of limit labels

    def lim(self, F: Filter) -> frozenset:
        return self.limits[F.mask]


def conv_parts(S: LambdaSpace) -> tuple:
    """Conv-coreflection (λ = 0) and Conv-reflection (λ < inf) of a structure."""
    c = S.carrier
    core, refl = {}, {}
    for F in c.nonempty_subsets():
        v = S.lam(F)
        core[F] = frozenset(c.elements[i] for i in range(c.n) if v[i] == ZERO)
        refl[F] = frozenset(c.elements[i] for i in range(c.n) if not v[i].is_inf)
    return ConvergenceRelation(c, core), ConvergenceRelation(c, refl)


def from_convergence(carrier: Carrier, limits: Mapping) -> RawLambdaTable:
    """Embed a convergence (filter -> limit set) as a 0/inf-valued table."""
    out = {}
    for key, lim in limits.items():
        m = key.mask if isinstance(key, Filter) else int(key)
        out[m] = tuple(ZERO if x in lim else INF for x in carrier.elements)
    return RawLambdaTable(carrier, out)


# initial, final and product structures ---------------------------------

def product_space(*spaces: CapStructure) -> CapStructure:
    """Initial structure for the projections, in matrix form (componentwise join)."""
    if len(spaces) < 2:
        raise ValueError("product_space needs at least two factors")
    carrier = product_carrier(*(s.carrier for s in spaces))
    coords = carrier.coords
    matrix = []
    for u in coords:
        row = []
        for x in coords:
            v = ZERO
            for s, ui, xi in zip(spaces, u, x):
                w = s.matrix[ui][xi]
                if w > v:
                    v = w
            row.append(v)
        matrix.append(row)
    return CapStructure(carrier, matrix)


def product_table(*spaces: LambdaSpace) -> RawLambdaTable:
    """``λ(H)(x_1..x_k) = ⋁_i λ_i(p_i[H])(x_i)`` evaluated filter by filter."""
    carrier = product_carrier(*(s.carrier for s in spaces))
    coords = carrier.coords
    out = {}
    for H in carrier.nonempty_subsets():
        projs = [s.lam(carrier.project(H, i)) for i, s in enumerate(spaces)]
        out[H] = tuple(ex_join(p[xi] for p, xi in zip(projs, x)) for x in coords)
    return RawLambdaTable(carrier, out)


def initial_structure(f: Map, Y: LambdaSpace) -> LambdaSpace:
    """Coarsest structure on the domain making ``f`` a contraction into ``Y``."""
    if f.codomain != Y.carrier:
        raise CarrierMismatch("map codomain differs from the space carrier")
    t = f.targets
    if isinstance(Y, CapStructure):
        return CapStructure(f.domain, [[Y.matrix[t[z]][t[x]] for x in range(f.domain.n)]
                                       for z in range(f.domain.n)])
    out = {}
    for F in f.domain.nonempty_subsets():
        v = Y.lam(f.image_mask(F))
        out[F] = tuple(v[t[x]] for x in range(f.domain.n))
    return RawLambdaTable(f.domain, out)


def final_structure(f: Map, X: LambdaSpace) -> RawLambdaTable:
    """Finest structure on the codomain making ``f`` a contraction, taken literally:
    0 on ``{y}↑`` at y, otherwise the meet over the fiber of y and over filters F
    with ``f[F] <= G`` of ``λ_X(F)(x)``; an empty fiber gives inf."""
    if f.domain != X.carrier:
        raise CarrierMismatch("map domain differs from the space carrier")
    Yc, Xc = f.codomain, f.domain
    fibers = [f.fiber_mask(y) for y in range(Yc.n)]
    images = [f.image_mask(F) for F in range(Xc.full + 1)]
    out = {}
    for G in Yc.nonempty_subsets():
        # f[F] <= G  <=>  image of core F contains core G
        sources = [F for F in Xc.nonempty_subsets() if images[F] & G == G]
        vec = []
        for y in range(Yc.n):
            if G == 1 << y:
                vec.append(ZERO)
                continue
            vec.append(ex_meet(X.lam(F)[x] for x in bits(fibers[y]) for F in sources))
        out[G] = tuple(vec)
    return RawLambdaTable(Yc, out)


ATOM = "∞"


def atomic_space(X: Carrier, D: Filter, point: str = ATOM) -> CapStructure:
    """Topological approach space on ``X ∪ {point}``: points of X isolated and the
    neighbourhood filter of the extra point equal to ``D ∧ {point}↑``."""
    if D.carrier != X:
        raise CarrierMismatch("D must be a filter on X")
    if D.is_degenerate:
        raise ValueError("the atomic construction needs a proper filter")
    if point in X:
        raise ValueError(f"label {point!r} already used in the carrier")
    Y = Carrier(X.elements + (point,))
    n = X.n
    M = []
    for z in range(n + 1):
        row = []
        for y in range(n + 1):
            if y == z:
                row.append(ZERO)
            elif y == n:
                row.append(ZERO if (D.mask >> z) & 1 else INF)
            else:
                row.append(INF)
        M.append(row)
    return CapStructure(Y, M)


def neighbourhood_filter(Y: CapStructure, point: str = ATOM) -> Filter:
    """Coarsest filter converging to ``point`` with value 0."""
    x = Y.carrier.index(point)
    m = 0
    for z in range(Y.carrier.n):
        if Y.matrix[z][x] == ZERO:
            m |= 1 << z
    return Filter(Y.carrier, m)
