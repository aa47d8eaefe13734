"""Exact solver for huge n-fold integer programs over totally unimodular matrices."""

from .errors import HugeFoldError
from .huge import (
    HugeSolution,
    build_aggregate_tfold,
    expand_compact,
    huge_feasible,
    huge_optimize,
    verify_compact,
)
from .ilp import ILPResult, ilp_solve
from .model import (
    INF,
    NEG_INF,
    BrickType,
    CompactPresentation,
    HugeInstance,
    IntMatrix,
    SymmetricAggregate,
    Violation,
    build_bipartite_incidence,
    build_nfold_matrix,
    check_total_unimodularity,
    validate_huge_instance,
)
from .simplex import ExactLP, LPResult, Status, caratheodory_decompose, find_vertex, lp_solve
from .symmetric import decompose_symmetric, peel_one_brick, symmetric_feasible
from .tables import LayerType, TableSolution, TableSpec, build_table_instance, solve_huge_table, verify_table

__version__ = "0.1.0"

__all__ = [
    "HugeFoldError",
    "HugeSolution",
    "build_aggregate_tfold",
    "expand_compact",
    "huge_feasible",
    "huge_optimize",
    "verify_compact",
    "ILPResult",
    "ilp_solve",
    "INF",
    "NEG_INF",
    "BrickType",
    "CompactPresentation",
    "HugeInstance",
    "IntMatrix",
    "SymmetricAggregate",
    "Violation",
    "build_bipartite_incidence",
    "build_nfold_matrix",
    "check_total_unimodularity",
    "validate_huge_instance",
    "ExactLP",
    "LPResult",
    "Status",
    "caratheodory_decompose",
    "find_vertex",
    "lp_solve",
    "decompose_symmetric",
    "peel_one_brick",
    "symmetric_feasible",
    "LayerType",
    "TableSolution",
    "TableSpec",
    "build_table_instance",
    "solve_huge_table",
    "verify_table",
]
