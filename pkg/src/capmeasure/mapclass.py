"""Contractions, closed, D-perfect and D-quotient maps between finite spaces."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .capspace import LambdaSpace, adh_reflect, final_structure
from .compactness import relation_compact, set_measure
from .errors import CarrierMismatch, NotSurjective
from .extlat import ExtReal, ex_meet
from .filtercalc import (
    ALL,
    COUNTABLY_BASED,
    COUNTABLY_DEEP,
    PRINCIPAL,
    Filter,
    FilterClass,
    Map,
    Verdict,
    bits,
)


def _carriers(f: Map, X: LambdaSpace, Y: LambdaSpace) -> None:
    if f.domain != X.carrier or f.codomain != Y.carrier:
        raise CarrierMismatch("map carriers do not match the spaces")


def is_contraction(f: Map, X: LambdaSpace, Y: LambdaSpace) -> Verdict:
    """``λ_Y(f[F])(f(x)) <= λ_X(F)(x)`` for every proper F and every x."""
    _carriers(f, X, Y)
    Xc, t = X.carrier, f.targets
    for x in range(Xc.n):
        for F in Xc.nonempty_subsets():
            lhs = Y.lam(f.image_mask(F))[t[x]]
            rhs = X.lam(F)[x]
            if lhs > rhs:
                return Verdict(False, {"F": Filter(Xc, F), "x": Xc.elements[x], "lhs": lhs, "rhs": rhs})
    return Verdict(True)


def is_closed(f: Map, X: LambdaSpace, Y: LambdaSpace) -> Verdict:
    """``⋀_{x∈f⁻y} adh_X A(x) <= adh_Y f(A)(y)`` for every y and nonempty A.

    An empty fiber makes the left side inf, so the inequality then requires
    ``adh_Y f(A)(y) = inf``; such failures are tagged ``empty_fiber``.
    """
    _carriers(f, X, Y)
    Xc, Yc = X.carrier, Y.carrier
    for y in range(Yc.n):
        fiber = f.fiber_mask(y)
        for A in Xc.nonempty_subsets():
            adh = X.adh(A)
            lhs = ex_meet(adh[x] for x in bits(fiber))
            rhs = Y.adh(f.image_mask(A))[y]
            if lhs > rhs:
                w = {"y": Yc.elements[y], "A": Xc.labels(A), "lhs": lhs, "rhs": rhs}
                if not fiber:
                    w["empty_fiber"] = True
                return Verdict(False, w)
    return Verdict(True)


def is_perfect(f: Map, X: LambdaSpace, Y: LambdaSpace, D: FilterClass = ALL) -> Verdict:
    """D-perfect: the inverse relation ``Y ⇉ X`` is D-compact."""
    _carriers(f, X, Y)
    return relation_compact(D, f.inverse(), Y, X)


def _require_onto(f: Map) -> None:
    if not f.is_surjective():
        missing = [y for y in f.codomain if not f.fiber_mask(f.codomain.index(y))]
        raise NotSurjective(f"map is not onto; nothing maps to {missing}")


def is_quotient(f: Map, X: LambdaSpace, Y: LambdaSpace, D: FilterClass = ALL) -> Verdict:
    """D-quotient: ``λ_Y >= Adh_D λ_{fX}`` on every proper filter and point."""
    _carriers(f, X, Y)
    _require_onto(f)
    reflected = adh_reflect(final_structure(f, X), D)
    Yc = Y.carrier
    for G in Yc.nonempty_subsets():
        got, bound = Y.lam(G), reflected.lam(G)
        for y in range(Yc.n):
            if got[y] < bound[y]:
                return Verdict(False, {"G": Filter(Yc, G), "y": Yc.elements[y], "lambda_Y": got[y],
                                       "reflected_final": bound[y]})
    return Verdict(True)


def adh_final_check(f: Map, X: LambdaSpace, D: Filter, y: str) -> tuple:
    """Both sides of ``adh_{fX} D(y) = ⋀_{x∈f⁻y} adh_X f⁻[D](x)``, computed separately."""
    _require_onto(f)
    if f.domain != X.carrier or D.carrier != f.codomain:
        raise CarrierMismatch("carriers do not match")
    yi = f.codomain.index(y)
    final = final_structure(f, X)
    lhs = final.adh(D.mask)[yi]
    pre = f.inverse().image_mask(D.mask)
    adh = X.adh(pre)
    rhs = ex_meet(adh[x] for x in bits(f.fiber_mask(yi)))
    return lhs, rhs


PERFECT_ROWS = (
    ("perfect", ALL),
    ("inversely Lindelöf", COUNTABLY_DEEP),
    ("countably perfect", COUNTABLY_BASED),
    ("closed (F0-perfect)", PRINCIPAL),
)

QUOTIENT_ROWS = (
    ("biquotient", ALL),
    ("weakly biquotient", COUNTABLY_DEEP),
    ("countably biquotient", COUNTABLY_BASED),
    ("hereditarily quotient", PRINCIPAL),
)


@dataclass
class MapClassification:
    rows: dict = field(default_factory=dict)  # name -> Verdict, or None when not applicable
    coincidence: dict = field(default_factory=dict)

    def flag(self, name: str) -> Optional[bool]:
        v = self.rows[name]
        return None if v is None else bool(v)

    def lines(self) -> list:
        out = []
        for name, v in self.rows.items():
            if v is None:
                out.append(f"{name:24s} n/a (map not onto)")
                continue
            line = f"{name:24s} {'yes' if v else 'no'}"
            if not v and v.witness:
                line += "  witness: " + ", ".join(f"{k}={_show(val)}" for k, val in v.witness.items())
            out.append(line)
        for name, same in self.coincidence.items():
            out.append(f"{name:24s} {'classes agree' if same else 'CLASSES DISAGREE'}")
        return out


def _show(v) -> str:
    if isinstance(v, tuple):
        return "{" + ",".join(str(x) for x in v) + "}"
    return str(v)


def classify(f: Map, X: LambdaSpace, Y: LambdaSpace) -> MapClassification:
    _carriers(f, X, Y)
    out = MapClassification()
    out.rows["contraction"] = is_contraction(f, X, Y)
    out.rows["closed"] = is_closed(f, X, Y)
    for name, D in PERFECT_ROWS:
        out.rows[name] = is_perfect(f, X, Y, D)
    onto = f.is_surjective()
    for name, D in QUOTIENT_ROWS:
        out.rows[name] = is_quotient(f, X, Y, D) if onto else None
    out.coincidence["perfect rows"] = len({bool(out.rows[n]) for n, _ in PERFECT_ROWS}) == 1
    if onto:
        out.coincidence["quotient rows"] = len({bool(out.rows[n]) for n, _ in QUOTIENT_ROWS}) == 1
    return out
