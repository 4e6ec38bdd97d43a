"""Exhaustive and randomized verification of the statements in the catalog."""

from .catalog import CATALOG, EXACT, Ops, Theorem, get_theorem
from .instances import (
    BUDGET_ENV,
    DEFAULT_GRID,
    ExhaustiveSource,
    InstanceSpec,
    RandomSource,
    enum_spaces,
    parse_grid,
    role_carrier,
)
from .runner import (
    MUTATIONS,
    WEAKENINGS,
    TheoremReport,
    Violation,
    check_budget,
    mutate_and_expect_failure,
    mutation_report,
    replay,
    replay_report,
    search_counterexample,
    theorem_ids,
    verify,
)
from .serial import dumps, from_jsonable, to_jsonable
