"""Exact measures of compactness for finite convergence-approach spaces."""

from .extlat import INF, ONE, ZERO, ExtReal, ex, ex_add, ex_join, ex_meet
from .filtercalc import (
    ALL,
    COUNTABLY_BASED,
    COUNTABLY_DEEP,
    POINT_FILTERS,
    PRINCIPAL,
    Carrier,
    Filter,
    FilterClass,
    Map,
    Relation,
    SetFamily,
    Verdict,
    principal,
)
from .capspace import CapStructure, RawLambdaTable, from_matrix
from .compactness import FnFamily, measure_at_family, measure_at_set, relation_compact
from .mapclass import classify, is_closed, is_contraction, is_perfect, is_quotient

__version__ = "0.1.0"
