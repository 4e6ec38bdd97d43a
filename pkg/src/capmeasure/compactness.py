"""Measures of D-compactness of filters, compact sets and compact relations."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .capspace import LambdaSpace
from .errors import CarrierMismatch
from .extlat import INF, ZERO, ExtReal, ex, ex_join, ex_meet
from .filtercalc import (
    PRINCIPAL,
    Carrier,
    Filter,
    FilterClass,
    Relation,
    Verdict,
    bits,
    check_composable,
)


@dataclass(frozen=True)
class FnFamily:
    carrier: Carrier
    members: tuple  # tuple of vectors, one ExtReal per carrier element

    def __post_init__(self):
        members = tuple(tuple(ex(v) for v in phi) for phi in self.members)
        for phi in members:
            if len(phi) != self.carrier.n:
                raise ValueError("every function needs one value per carrier element")
        object.__setattr__(self, "members", members)

    @classmethod
    def indicator(cls, carrier: Carrier, A: Iterable[str]) -> "FnFamily":
        return cls(carrier, (indicator(carrier, A),))


def indicator(carrier: Carrier, A: Iterable[str]) -> tuple:
    """0 on A and inf elsewhere."""
    m = carrier.mask(A)
    return tuple(ZERO if (m >> i) & 1 else INF for i in range(carrier.n))


@dataclass(frozen=True)
class MeasureReport:
    value: ExtReal
    witness: Optional[Filter] = None
    phi: Optional[tuple] = None
    flags: tuple = ()


def _min_adh(space: LambdaSpace, d: int, A: int) -> ExtReal:
    adh = space.adh(d)
    return ex_meet(adh[a] for a in bits(A))


def _class_profile(space: LambdaSpace, D: FilterClass, A: int, guard: bool) -> tuple:
    """Per carrier point z: the best ``⋀_{a∈A} adh 𝒟(a)`` over class filters containing z.

    A class filter meshes ``F↑`` iff its core hits ``F``, so the join over
    meshing filters is the join of these per-point maxima over ``F``.  Each
    entry keeps the first filter (in mask order) attaining it.  With
    ``guard=False`` a single global entry is returned instead.
    """
    memo = space.memo
    key = ("profile", D, A, guard)
    hit = memo.get(key)
    if hit is not None:
        return hit
    n = space.carrier.n
    best = [None] * (n if guard else 1)
    for d in D.masks(space.carrier):
        v = _min_adh(space, d, A)
        slots = bits(d) if guard else (0,)
        for z in slots:
            cur = best[z]
            if cur is None or v > cur[0]:
                best[z] = (v, d)
    out = tuple(best)
    memo[key] = out
    return out


def set_measure(space: LambdaSpace, D: FilterClass, A: int, F: int, guard: bool = True) -> tuple:
    """``c_D^A(F)`` on masks, with the first attaining class filter.

    Returns ``(value, witness_mask)``; the witness is None for an empty join.
    ``guard=False`` drops the mesh condition (only used to mutate the verifier).
    """
    memo = space.memo
    key = (D, A, F, guard)
    hit = memo.get(key)
    if hit is not None:
        return hit
    profile = _class_profile(space, D, A, guard)
    best, arg = ZERO, None
    for entry in (profile[z] for z in bits(F)) if guard else profile:
        if entry is None:
            continue
        v, d = entry
        if arg is None or v > best or (v == best and d < arg):
            best, arg = v, d
    memo[key] = (best, arg)
    return best, arg


def _check_carrier(S: LambdaSpace, F: Filter) -> None:
    if F.carrier != S.carrier:
        raise CarrierMismatch("filter and space carriers differ")


def measure_at_set(S: LambdaSpace, D: FilterClass, A: Iterable[str], F: Filter) -> MeasureReport:
    """``c_D^A(F)``: join over class filters meshing F of the meet of their adherence over A."""
    _check_carrier(S, F)
    A = S.carrier.mask(A)
    value, arg = set_measure(S, D, A, F.mask)
    flags = ("empty-set",) if A == 0 else ()
    return MeasureReport(value, None if arg is None else Filter(S.carrier, arg), None, flags)


def measure_at_family(S: LambdaSpace, D: FilterClass, A: FnFamily, F: Filter) -> MeasureReport:
    """``c_D^𝒜(F)`` for a finite family of functions on the carrier."""
    _check_carrier(S, F)
    if A.carrier != S.carrier:
        raise CarrierMismatch("function family and space carriers differ")
    c = S.carrier
    best, arg = ZERO, None
    for d in D.masks(c):
        if not d & F.mask:
            continue
        adh = S.adh(d)
        for phi in A.members:
            v = ex_meet(adh[x] + phi[x] for x in range(c.n))
            if arg is None or v > best:
                best, arg = v, (d, phi)
    if arg is None:
        return MeasureReport(ZERO)
    return MeasureReport(best, Filter(c, arg[0]), arg[1])


def point_measure(S: LambdaSpace, D: FilterClass, x: str, F: Filter) -> ExtReal:
    return measure_at_set(S, D, (x,), F).value


def set_compactness(S: LambdaSpace, D: FilterClass, A: Iterable[str], within: str = "self") -> bool:
    """``A`` is D-compact (``within='self'``) or relatively D-compact (``'whole'``)."""
    A = S.carrier.mask(A)
    if within == "self":
        at = A
    elif within in ("whole", "whole-space"):
        at = S.carrier.full
    else:
        raise ValueError(f"within must be 'self' or 'whole', got {within!r}")
    return set_measure(S, D, at, A)[0] == ZERO


def _carriers(R: Relation, X: LambdaSpace, Y: LambdaSpace) -> None:
    if R.domain != X.carrier or R.codomain != Y.carrier:
        raise CarrierMismatch("relation carriers do not match the spaces")


def relation_compact(D: FilterClass, R: Relation, X: LambdaSpace, Y: LambdaSpace) -> Verdict:
    """``c_D^{R[A]}(R[F]) <= c_D^A(F)`` for every proper F and nonempty A on X."""
    _carriers(R, X, Y)
    Xc = X.carrier
    subsets = Xc.nonempty_subsets()
    images = [R.image_mask(A) for A in subsets]
    for F in subsets:
        RF = R.image_mask(F)
        for A, RA in zip(subsets, images):
            lhs = set_measure(Y, D, RA, RF)[0]
            rhs = set_measure(X, D, A, F)[0]
            if lhs > rhs:
                return Verdict(False, {"F": Filter(Xc, F), "A": Xc.labels(A), "lhs": lhs, "rhs": rhs})
    return Verdict(True)


_composable_cache: dict = {}


def f0_composable(D: FilterClass, X: Carrier, Y: Carrier) -> bool:
    key = (D, X, Y)
    if key not in _composable_cache:
        _composable_cache[key] = bool(check_composable(D, PRINCIPAL, X, Y))
    return _composable_cache[key]


def relation_compact_pointwise(D: FilterClass, R: Relation, X: LambdaSpace, Y: LambdaSpace,
                               warn: bool = True) -> Verdict:
    """``λ_X(F)(x) >= c_D^{R(x)}(R[F])`` for every proper F and point x."""
    _carriers(R, X, Y)
    notes = ()
    if not f0_composable(D, Y.carrier, X.carrier):
        notes = ("class is not F0-composable on these carriers; equivalence with the definition is not guaranteed",)
        if warn:
            warnings.warn(f"{D.name}: {notes[0]}", stacklevel=2)
    Xc = X.carrier
    for F in Xc.nonempty_subsets():
        RF = R.image_mask(F)
        lam = X.lam(F)
        for x in range(Xc.n):
            rhs = set_measure(Y, D, R.images[x], RF)[0]
            if lam[x] < rhs:
                return Verdict(False, {"F": Filter(Xc, F), "x": Xc.elements[x], "lambda": lam[x], "measure": rhs},
                               notes)
    return Verdict(True, None, notes)
