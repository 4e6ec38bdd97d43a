"""Finite carriers, filters, relations, filter classes and the relational calculus.

On a finite carrier every filter is the principal filter ``core↑`` of the
intersection of its members, so a :class:`Filter` is stored by its core as a
bitmask over the carrier.  The empty core is the degenerate filter (the whole
powerset), which contains the empty set and therefore meshes nothing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence, Union

from .errors import CarrierMismatch, InvalidElement


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@lru_cache(maxsize=1 << 16)
def bits(mask: int) -> tuple:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class Verdict:
    """A boolean outcome carrying the first counterexample found, if any."""

    holds: bool
    witness: Optional[dict] = None
    notes: tuple = ()

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class Carrier:
    elements: tuple
    factors: tuple = ()

    def __post_init__(self):
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        if not elements:
            raise ValueError("a carrier needs at least one element")
        if len(set(elements)) != len(elements):
            raise ValueError(f"duplicate labels in carrier {elements}")
        for e in elements:
            if not isinstance(e, str):
                raise TypeError(f"carrier labels must be strings, got {e!r}")

    @classmethod
    def of(cls, *labels) -> "Carrier":
        if len(labels) == 1 and not isinstance(labels[0], str):
            labels = tuple(labels[0])
        return cls(tuple(labels))

    @classmethod
    def letters(cls, n: int, offset: int = 0) -> "Carrier":
        return cls(tuple("abcdefghijklmnopqrstuvwxyz"[offset:offset + n]))

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.elements, self.factors))

    @cached_property
    def n(self) -> int:
        return len(self.elements)

    @cached_property
    def full(self) -> int:
        return (1 << len(self.elements)) - 1

    @cached_property
    def _index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, label) -> bool:
        return label in self._index

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InvalidElement(f"{label!r} is not an element of {list(self.elements)}") from None

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for label in labels:
            m |= 1 << self.index(label)
        return m

    def labels(self, mask: int) -> tuple:
        return tuple(self.elements[i] for i in bits(mask))

    def render(self, mask: int) -> str:
        return "{" + ",".join(self.labels(mask)) + "}"

    def nonempty_subsets(self) -> range:
        return range(1, self.full + 1)

    # product structure -------------------------------------------------
    @cached_property
    def coords(self) -> tuple:
        """Factor indices of each element of a product carrier."""
        if not self.factors:
            return tuple((i,) for i in range(self.n))
        sizes = [f.n for f in self.factors]
        return tuple(itertools.product(*(range(s) for s in sizes)))

    def project(self, mask: int, i: int) -> int:
        out = 0
        for k in bits(mask):
            out |= 1 << self.coords[k][i]
        return out

    def box(self, *masks: int) -> int:
        """Mask of the product set ``A_1 x ... x A_k`` inside a product carrier."""
        out = 0
        for k, c in enumerate(self.coords):
            if all((m >> ci) & 1 for m, ci in zip(masks, c)):
                out |= 1 << k
        return out


@lru_cache(maxsize=None)
def product_carrier(*carriers: Carrier) -> Carrier:
    labels = tuple(
        "(" + ",".join(parts) + ")"
        for parts in itertools.product(*(c.elements for c in carriers))
    )
    return Carrier(labels, tuple(carriers))


def _same_carrier(a: Carrier, b: Carrier, what: str = "carrier") -> None:
    if a is not b and a != b:
        raise CarrierMismatch(f"{what} mismatch: {list(a.elements)} vs {list(b.elements)}")


@dataclass(frozen=True, repr=False)
class Filter:
    carrier: Carrier
    mask: int

    @property
    def core(self) -> frozenset:
        return frozenset(self.carrier.labels(self.mask))

    @property
    def is_degenerate(self) -> bool:
        return self.mask == 0

    @property
    def is_point(self) -> bool:
        return popcount(self.mask) == 1

    def finer_than(self, other: "Filter") -> bool:
        """``self >= other`` in the filter order (core of self inside core of other)."""
        return self.mask & ~other.mask == 0

    def as_family(self) -> "SetFamily":
        full = self.carrier.full
        rest = full & ~self.mask
        members = frozenset(self.mask | sub for sub in _submasks(rest))
        return SetFamily(self.carrier, members)

    def __str__(self) -> str:
        return self.carrier.render(self.mask) + "↑"

    def __repr__(self) -> str:
        return f"Filter({self})"


def _submasks(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True)
class SetFamily:
    carrier: Carrier
    members: frozenset

    @classmethod
    def of(cls, carrier: Carrier, sets: Iterable[Iterable[str]]) -> "SetFamily":
        return cls(carrier, frozenset(carrier.mask(s) for s in sets))

    def as_sets(self) -> list:
        return sorted((self.carrier.labels(m) for m in self.members), key=lambda t: (len(t), t))


def principal(carrier: Carrier, core: Iterable[str]) -> Filter:
    return Filter(carrier, carrier.mask(core))


def filter_from_base(carrier: Carrier, base: Sequence[Iterable[str]]) -> Filter:
    """The filter generated by a base, i.e. the principal filter of its intersection."""
    if not base:
        raise ValueError("a filter base must be nonempty")
    m = carrier.full
    for b in base:
        m &= carrier.mask(b)
    return Filter(carrier, m)


def degenerate(carrier: Carrier) -> Filter:
    return Filter(carrier, 0)


def filter_meet(F: Filter, G: Filter) -> Filter:
    _same_carrier(F.carrier, G.carrier)
    return Filter(F.carrier, F.mask | G.mask)


def _members(x) -> tuple:
    if isinstance(x, Filter):
        return x.carrier, tuple(x.as_family().members)
    return x.carrier, tuple(x.members)


def mesh(A: Union[Filter, SetFamily], B: Union[Filter, SetFamily]) -> bool:
    """True iff every member of ``A`` meets every member of ``B``."""
    if isinstance(A, Filter) and isinstance(B, Filter):
        _same_carrier(A.carrier, B.carrier)
        return (A.mask & B.mask) != 0
    ca, ma = _members(A)
    cb, mb = _members(B)
    _same_carrier(ca, cb)
    return all(a & b for a in ma for b in mb)


def grill(A: SetFamily) -> SetFamily:
    c = A.carrier
    members = frozenset(h for h in range(c.full + 1) if all(h & a for a in A.members))
    return SetFamily(c, members)


def ultra(F: Filter) -> list:
    return [Filter(F.carrier, 1 << i) for i in bits(F.mask)]


# relations -------------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    domain: Carrier
    codomain: Carrier
    graph: frozenset

    def __post_init__(self):
        pairs = frozenset(tuple(p) for p in self.graph)
        for x, y in pairs:
            if x not in self.domain:
                raise InvalidElement(f"{x!r} not in relation domain")
            if y not in self.codomain:
                raise InvalidElement(f"{y!r} not in relation codomain")
        object.__setattr__(self, "graph", pairs)

    @cached_property
    def images(self) -> tuple:
        """Codomain mask ``R(x)`` for each domain index."""
        img = [0] * self.domain.n
        for x, y in self.graph:
            img[self.domain.index(x)] |= 1 << self.codomain.index(y)
        return tuple(img)

    @cached_property
    def _image_table(self) -> tuple:
        table = [0] * (self.domain.full + 1)
        for m in range(1, self.domain.full + 1):
            low = m & -m
            table[m] = table[m ^ low] | self.images[low.bit_length() - 1]
        return tuple(table)

    def image_mask(self, mask: int) -> int:
        return self._image_table[mask]

    def __call__(self, x: str) -> frozenset:
        return frozenset(self.codomain.labels(self.images[self.domain.index(x)]))

    def inverse(self) -> "Relation":
        return Relation(self.codomain, self.domain, frozenset((y, x) for x, y in self.graph))

    @property
    def is_map(self) -> bool:
        return all(popcount(m) == 1 for m in self.images)

    def is_surjective(self) -> bool:
        return self.image_mask(self.domain.full) == self.codomain.full


class Map(Relation):
    """A relation whose graph is total and single valued."""

    def __post_init__(self):
        super().__post_init__()
        bad = [x for x, m in zip(self.domain.elements, self.images) if popcount(m) != 1]
        if bad:
            raise InvalidElement(f"not a total function at {bad}")

    @classmethod
    def from_dict(cls, domain: Carrier, codomain: Carrier, mapping: Mapping[str, str]) -> "Map":
        missing = [x for x in domain if x not in mapping]
        if missing:
            raise InvalidElement(f"map undefined at {missing}")
        extra = [x for x in mapping if x not in domain]
        if extra:
            raise InvalidElement(f"map defined outside its domain at {extra}")
        return cls(domain, codomain, frozenset(mapping.items()))

    @classmethod
    def identity(cls, carrier: Carrier) -> "Map":
        return cls(carrier, carrier, frozenset((x, x) for x in carrier))

    @classmethod
    def constant(cls, domain: Carrier, codomain: Carrier, y: str) -> "Map":
        return cls(domain, codomain, frozenset((x, y) for x in domain))

    @cached_property
    def targets(self) -> tuple:
        """Codomain index of ``f(x)`` for each domain index."""
        return tuple(m.bit_length() - 1 for m in self.images)

    def __call__(self, x: str) -> str:
        return self.codomain.elements[self.targets[self.domain.index(x)]]

    def fiber_mask(self, y_index: int) -> int:
        m = 0
        for i, t in enumerate(self.targets):
            if t == y_index:
                m |= 1 << i
        return m

    def as_dict(self) -> dict:
        return {x: self(x) for x in self.domain}


def projection(carrier: Carrier, i: int) -> Map:
    """The ``i``-th projection out of a product carrier."""
    if not carrier.factors:
        raise ValueError("not a product carrier")
    target = carrier.factors[i]
    pairs = frozenset(
        (label, target.elements[c[i]]) for label, c in zip(carrier.elements, carrier.coords)
    )
    return Map(carrier, target, pairs)


def product_relation(R: Relation, S: Relation) -> Relation:
    """``R x S : X x Z ⇉ Y x W`` relating (x, z) to (y, w) iff x R y and z S w."""
    dom = product_carrier(R.domain, S.domain)
    cod = product_carrier(R.codomain, S.codomain)
    pairs = set()
    for (x, y) in R.graph:
        for (z, w) in S.graph:
            pairs.add((dom.elements[R.domain.index(x) * S.domain.n + S.domain.index(z)],
                       cod.elements[R.codomain.index(y) * S.codomain.n + S.codomain.index(w)]))
    cls = Map if isinstance(R, Map) and isinstance(S, Map) else Relation
    return cls(dom, cod, frozenset(pairs))


def rel_image(R: Relation, F: Filter) -> Filter:
    _same_carrier(R.domain, F.carrier, "relation domain")
    return Filter(R.codomain, R.image_mask(F.mask))


def rel_preimage(R: Relation, G: Filter) -> Filter:
    return rel_image(R.inverse(), G)


def prod_filter(*filters: Filter) -> Filter:
    carrier = product_carrier(*(F.carrier for F in filters))
    return Filter(carrier, carrier.box(*(F.mask for F in filters)))


def _relation_of_mask(J: Filter, X: Carrier) -> tuple:
    c = J.carrier
    if len(c.factors) != 2:
        raise CarrierMismatch("expected a filter on a binary product carrier")
    _same_carrier(c.factors[0], X, "product first factor")
    img = [0] * X.n
    for k in bits(J.mask):
        i, j = c.coords[k]
        img[i] |= 1 << j
    return tuple(img)


def jrel_image(J: Filter, F: Filter) -> Filter:
    """``J[F]`` for a filter ``J`` on ``X x Y`` read as a relation."""
    img = _relation_of_mask(J, F.carrier)
    out = 0
    for i in bits(F.mask):
        out |= img[i]
    return Filter(J.carrier.factors[1], out)


def jrel_preimage(J: Filter, G: Filter) -> Filter:
    c = J.carrier
    _same_carrier(c.factors[1], G.carrier, "product second factor")
    out = 0
    for k in bits(J.mask):
        i, j = c.coords[k]
        if (G.mask >> j) & 1:
            out |= 1 << i
    return Filter(c.factors[0], out)


def enumerate_filters(carrier: Carrier, include_degenerate: bool = False) -> list:
    start = 0 if include_degenerate else 1
    return [Filter(carrier, m) for m in range(start, carrier.full + 1)]


# filter classes --------------------------------------------------------

def is_filter_family(fam: SetFamily) -> bool:
    """Nonempty, upward closed and closed under binary intersection."""
    ms = fam.members
    if not ms:
        return False
    full = fam.carrier.full
    for a in ms:
        rest = full & ~a
        for sub in _submasks(rest):
            if a | sub not in ms:
                return False
        for b in ms:
            if a & b not in ms:
                return False
    return True


def _intersection(fam: SetFamily) -> int:
    m = fam.carrier.full
    for a in fam.members:
        m &= a
    return m


def _family_principal(fam: SetFamily) -> bool:
    return is_filter_family(fam) and _intersection(fam) in fam.members


def _family_countably_based(fam: SetFamily) -> bool:
    # the family itself is a base; it is finite because the carrier is
    return is_filter_family(fam) and len(fam.members) < float("inf")


def _family_countably_deep(fam: SetFamily) -> bool:
    # a finite family is closed under countable intersections iff it contains
    # the intersection of every nonempty subfamily; binary closure plus the
    # total intersection is enough
    return is_filter_family(fam) and _intersection(fam) in fam.members


class FilterClass:
    """A carrier-uniform class of filters with a membership test and an enumerator.

    Every class contains the degenerate filter of each carrier.  ``family_test``
    optionally states the defining property on the set-family form of a filter;
    the built-in large classes are defined that way so that their coincidence
    on finite carriers is something checked rather than assumed.
    """

    def __init__(self, name: str, predicate: Callable[[Filter], bool],
                 family_test: Optional[Callable[[SetFamily], bool]] = None):
        self.name = name
        self._predicate = predicate
        self.family_test = family_test
        self._masks: dict = {}

    def __repr__(self) -> str:
        return f"FilterClass({self.name!r})"

    def contains(self, F: Filter) -> bool:
        return F.mask == 0 or bool(self._predicate(F))

    def masks(self, carrier: Carrier) -> tuple:
        try:
            return self._masks[carrier]
        except KeyError:
            ms = tuple(m for m in range(carrier.full + 1) if self.contains(Filter(carrier, m)))
            self._masks[carrier] = ms
            return ms

    def enumerate(self, carrier: Carrier) -> list:
        return [Filter(carrier, m) for m in self.masks(carrier)]

    @classmethod
    def from_family_test(cls, name: str, test: Callable[[SetFamily], bool]) -> "FilterClass":
        return cls(name, lambda F: test(F.as_family()), test)


ALL = FilterClass.from_family_test("All", is_filter_family)
PRINCIPAL = FilterClass.from_family_test("Principal", _family_principal)
COUNTABLY_BASED = FilterClass.from_family_test("CountablyBased", _family_countably_based)
COUNTABLY_DEEP = FilterClass.from_family_test("CountablyDeep", _family_countably_deep)
POINT_FILTERS = FilterClass("PointFilters", lambda F: popcount(F.mask) == 1)

BUILTIN_CLASSES = {c.name: c for c in (ALL, PRINCIPAL, COUNTABLY_BASED, COUNTABLY_DEEP, POINT_FILTERS)}
LARGE_CLASSES = (ALL, PRINCIPAL, COUNTABLY_BASED, COUNTABLY_DEEP)

CLASS_ALIASES = {
    "all": ALL, "f": ALL,
    "principal": PRINCIPAL, "f0": PRINCIPAL,
    "countably-based": COUNTABLY_BASED, "f1": COUNTABLY_BASED,
    "countably-deep": COUNTABLY_DEEP, "fdeep": COUNTABLY_DEEP,
    "points": POINT_FILTERS, "point-filters": POINT_FILTERS,
}


def filter_class(name: str) -> FilterClass:
    key = name.strip()
    if key in BUILTIN_CLASSES:
        return BUILTIN_CLASSES[key]
    try:
        return CLASS_ALIASES[key.lower()]
    except KeyError:
        raise KeyError(f"unknown filter class {name!r}; known: {sorted(CLASS_ALIASES)}") from None


def class_membership(C: FilterClass, F: Filter) -> bool:
    return C.contains(F)


def check_composable(D: FilterClass, J: FilterClass, X: Carrier, Y: Carrier) -> Verdict:
    """Is ``J[D] ∈ D(Y)`` for every ``D ∈ D(X)`` and ``J ∈ J(X x Y)``?"""
    XY = product_carrier(X, Y)
    for Df in D.enumerate(X):
        for Jf in J.enumerate(XY):
            img = jrel_image(Jf, Df)
            if not D.contains(img):
                return Verdict(False, {"D": Df, "J": Jf, "image": img})
    return Verdict(True)


def enumerate_families(carrier: Carrier) -> Iterator[SetFamily]:
    """Every family of subsets of ``carrier`` (2^(2^n) of them)."""
    size = carrier.full + 1
    for code in range(1 << size):
        yield SetFamily(carrier, frozenset(m for m in range(size) if (code >> m) & 1))
