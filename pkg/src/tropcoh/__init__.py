"""Exact tropical Dolbeault cohomology of curves over non-archimedean fields."""

from .cohomology import AbstractGraph, CohomologyTable, Region, cohomology_table, pd_check
from .curve import Edge, TropicalCurve, canonicalize, check_balancing, check_smooth
from .errors import InputError, InvariantViolation
from .logvalue import NEG_INF
from .mumford import SkeletonGraph, theorem_table_global, theorem_table_simple
from .tropicalize import modify, tropicalize, tropicalize_direct, tropicalize_incremental
from .valuation import LogDistanceMatrix, from_padic_points, validate_ultrametric

__version__ = "0.1.0"

__all__ = [
    "AbstractGraph", "CohomologyTable", "Edge", "InputError", "InvariantViolation",
    "LogDistanceMatrix", "NEG_INF", "Region", "SkeletonGraph", "TropicalCurve",
    "canonicalize", "check_balancing", "check_smooth", "cohomology_table",
    "from_padic_points", "modify", "pd_check", "theorem_table_global", "theorem_table_simple",
    "tropicalize", "tropicalize_direct", "tropicalize_incremental", "validate_ultrametric",
]
