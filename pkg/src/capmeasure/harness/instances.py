"""Instance specifications and the two instance sources (exhaustive, random).

Catalog generators are written once against a :class:`Source`.  The
exhaustive source yields every object in a fixed lexicographic order; the
random source yields one seeded draw per call, and the runner repeats the
generator ``count`` times.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field, replace
from typing import Iterator, Optional, Sequence

from ..capspace import CapStructure
from ..errors import BudgetExceeded
from ..extlat import INF, ZERO, ExtReal, ex
from ..filtercalc import Carrier, Map, Relation

BUDGET_ENV = "CAPMEASURE_BUDGET"
DEFAULT_BUDGET = 20_000_000
DEFAULT_GRID = (ZERO, ex(1), INF)

# carrier labels per role, so product labels such as "(a,1)" stay readable
ROLE_LABELS = ("abcdefgh", "12345678", "uvwxyz")


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None


def parse_grid(text: str) -> tuple:
    return tuple(ex(tok.strip()) for tok in text.split(",") if tok.strip())


@dataclass(frozen=True)
class InstanceSpec:
    """Bounds for one verification run.

    ``sizes`` holds the maximal carrier size of each space role the theorem
    quantifies over (domain first).  Exhaustive runs sweep sizes 1..max.
    """

    sizes: tuple = (2, 2)
    grid: tuple = DEFAULT_GRID
    mode: str = "exhaustive"
    seed: int = 0
    count: int = 50
    budget: int = field(default_factory=default_budget)
    classes: tuple = ()  # filter class names; empty means the theorem's own list

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        grid = tuple(sorted(set(ex(g) for g in self.grid)))
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError(f"carrier sizes must be >= 1, got {sizes}")
        if ZERO not in grid:
            raise ValueError("the value grid must contain 0 (diagonal entries are 0)")
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"mode must be 'exhaustive' or 'random', got {self.mode!r}")
        if self.count < 1:
            raise ValueError("count must be positive")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "classes", tuple(self.classes))

    def size(self, role: int) -> int:
        return self.sizes[min(role, len(self.sizes) - 1)]

    def with_max_size(self, n: int) -> "InstanceSpec":
        return replace(self, sizes=tuple(n for _ in self.sizes))

    def describe(self) -> dict:
        out = {
            "sizes": list(self.sizes),
            "grid": [str(g) for g in self.grid],
            "mode": self.mode,
        }
        if self.mode == "random":
            out["seed"] = self.seed
            out["count"] = self.count
        if self.classes:
            out["classes"] = list(self.classes)
        return out


def role_carrier(n: int, role: int = 0) -> Carrier:
    return Carrier(tuple(ROLE_LABELS[role][:n]))


def space_count(n: int, grid: Sequence) -> int:
    return len(grid) ** (n * n - n)


def enum_spaces(spec: InstanceSpec, n: Optional[int] = None, role: int = 0,
                budget: Optional[int] = None) -> Iterator[CapStructure]:
    """Every zero-diagonal matrix over the grid on an n-point carrier, lexicographically.

    ``n`` defaults to the first entry of ``spec.sizes``.  Refuses with an estimate
    when the count exceeds the budget.
    """
    n = spec.sizes[0] if n is None else n
    budget = spec.budget if budget is None else budget
    count = space_count(n, spec.grid)
    if count > budget:
        raise BudgetExceeded(
            f"{count} spaces on {n} points over a {len(spec.grid)}-value grid exceed the budget {budget}",
            estimate=count, budget=budget)
    carrier = role_carrier(n, role)
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    for values in itertools.product(spec.grid, repeat=len(off)):
        M = [[ZERO] * n for _ in range(n)]
        for (i, j), v in zip(off, values):
            M[i][j] = v
        yield CapStructure(carrier, M)


class Source:
    def sizes(self, hi: int, lo: int = 1) -> Sequence[int]:
        raise NotImplementedError

    def spaces(self, n: int, role: int = 0) -> Sequence[CapStructure]:
        raise NotImplementedError

    def maps(self, X: Carrier, Y: Carrier, onto: bool = False) -> Sequence[Map]:
        raise NotImplementedError

    def relations(self, X: Carrier, Y: Carrier) -> Sequence[Relation]:
        raise NotImplementedError

    def pick(self, items: Sequence) -> Sequence:
        """All items (exhaustive) or one of them (random)."""
        raise NotImplementedError


def _all_maps(X: Carrier, Y: Carrier, onto: bool) -> list:
    out = []
    for targets in itertools.product(range(Y.n), repeat=X.n):
        if onto and len(set(targets)) != Y.n:
            continue
        out.append(Map(X, Y, frozenset((X.elements[i], Y.elements[t]) for i, t in enumerate(targets))))
    return out


def _all_relations(X: Carrier, Y: Carrier) -> list:
    pairs = [(x, y) for x in X.elements for y in Y.elements]
    out = []
    for code in range(1 << len(pairs)):
        out.append(Relation(X, Y, frozenset(p for k, p in enumerate(pairs) if (code >> k) & 1)))
    return out


class ExhaustiveSource(Source):
    """Every object, in a fixed order; generated lists are cached and shared."""

    def __init__(self, spec: InstanceSpec):
        self.spec = spec
        self._spaces: dict = {}
        self._maps: dict = {}
        self._relations: dict = {}

    def sizes(self, hi: int, lo: int = 1) -> Sequence[int]:
        return range(lo, hi + 1)

    def spaces(self, n: int, role: int = 0) -> Sequence[CapStructure]:
        key = (n, role)
        if key not in self._spaces:
            self._spaces[key] = list(enum_spaces(self.spec, n, role))
        return self._spaces[key]

    def maps(self, X: Carrier, Y: Carrier, onto: bool = False) -> Sequence[Map]:
        key = (X, Y, onto)
        if key not in self._maps:
            self._maps[key] = _all_maps(X, Y, onto)
        return self._maps[key]

    def relations(self, X: Carrier, Y: Carrier) -> Sequence[Relation]:
        key = (X, Y)
        if key not in self._relations:
            self._relations[key] = _all_relations(X, Y)
        return self._relations[key]

    def pick(self, items: Sequence) -> Sequence:
        return items


class RandomSource(Source):
    """One seeded draw per request."""

    def __init__(self, spec: InstanceSpec, rng: random.Random):
        self.spec = spec
        self.rng = rng

    def sizes(self, hi: int, lo: int = 1) -> Sequence[int]:
        return (self.rng.randint(lo, hi),)

    def spaces(self, n: int, role: int = 0) -> Sequence[CapStructure]:
        grid = self.spec.grid
        M = [[ZERO if i == j else self.rng.choice(grid) for j in range(n)] for i in range(n)]
        return (CapStructure(role_carrier(n, role), M),)

    def maps(self, X: Carrier, Y: Carrier, onto: bool = False) -> Sequence[Map]:
        if onto and X.n < Y.n:
            return ()
        while True:
            targets = [self.rng.randrange(Y.n) for _ in range(X.n)]
            if not onto or len(set(targets)) == Y.n:
                break
        return (Map(X, Y, frozenset((X.elements[i], Y.elements[t]) for i, t in enumerate(targets))),)

    def relations(self, X: Carrier, Y: Carrier) -> Sequence[Relation]:
        graph = frozenset((x, y) for x in X.elements for y in Y.elements if self.rng.random() < 0.5)
        return (Relation(X, Y, graph),)

    def pick(self, items: Sequence) -> Sequence:
        items = list(items)
        return (self.rng.choice(items),) if items else ()
