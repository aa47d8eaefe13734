"""Huge l x m x n tables with line sums, reduced to a huge n-fold program.

Each layer is an l x m matrix flattened row-major (cell ``(i, j)`` at
``i*m + j``). Layer column sums ``e``, row sums ``f`` and the vertical sums
``g`` are the three families of line sums.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ExpansionTooLarge, InconsistentMargins, ValidationError
from .huge import HugeSolution, huge_feasible, huge_optimize, verify_compact
from .model import BrickType, CompactPresentation, HugeInstance, Violation, build_bipartite_incidence
from .simplex import Status

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class LayerType:
    w: Matrix
    e: tuple[int, ...]
    f: tuple[int, ...]
    count: int

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(tuple(r) for r in self.w))
        object.__setattr__(self, "e", tuple(self.e))
        object.__setattr__(self, "f", tuple(self.f))


@dataclass(frozen=True)
class TableSpec:
    l: int
    m: int
    g: Matrix
    types: tuple[LayerType, ...]

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(tuple(r) for r in self.g))
        object.__setattr__(self, "types", tuple(self.types))

    @property
    def n(self) -> int:
        return sum(tp.count for tp in self.types)


@dataclass(frozen=True)
class TableSolution:
    status: Status
    # per type: ((layer, multiplicity), ...) sorted by the flattened layer
    layers: tuple[tuple[tuple[Matrix, int], ...], ...] | None = None
    objective: int | None = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def flatten(mat) -> tuple[int, ...]:
    return tuple(v for row in mat for v in row)


def reshape(vec, l: int, m: int) -> Matrix:
    return tuple(tuple(vec[i * m:(i + 1) * m]) for i in range(l))


def validate_table_spec(spec: TableSpec) -> list[Violation]:
    out = []
    l, m = spec.l, spec.m
    if l < 1 or m < 1:
        return [Violation("DimensionMismatch", detail="table dimensions must be positive")]
    if len(spec.g) != l or any(len(r) != m for r in spec.g):
        out.append(Violation("DimensionMismatch", detail=f"g must be {l}x{m}"))
    elif any(v < 0 for r in spec.g for v in r):
        out.append(Violation("NegativeLineSum", detail="g has a negative entry"))
    if not spec.types:
        out.append(Violation("DimensionMismatch", detail="at least one layer type is required"))
    for k, tp in enumerate(spec.types, start=1):
        if len(tp.w) != l or any(len(r) != m for r in tp.w):
            out.append(Violation("DimensionMismatch", type=k, detail=f"w must be {l}x{m}"))
        if len(tp.e) != m or len(tp.f) != l:
            out.append(Violation("DimensionMismatch", type=k, detail="e needs m entries, f needs l"))
        if any(v < 0 for v in tp.e + tp.f):
            out.append(Violation("NegativeLineSum", type=k))
        if tp.count < 1:
            out.append(Violation("NonPositiveCount", type=k, detail=f"count {tp.count}"))
    return out


def build_table_instance(spec: TableSpec) -> HugeInstance:
    problems = validate_table_spec(spec)
    if problems:
        raise ValidationError(problems)
    l, m = spec.l, spec.m
    types = []
    for k, tp in enumerate(spec.types, start=1):
        if sum(tp.e) != sum(tp.f):
            raise InconsistentMargins(f"type {k}: column sums total {sum(tp.e)}, row sums total {sum(tp.f)}")
        # every nonnegative layer with these margins fits in this box
        u = tuple(min(tp.f[i], tp.e[j]) for i in range(l) for j in range(m))
        types.append(BrickType(flatten(tp.w), (0,) * (l * m), u, tp.e + tp.f, tp.count))
    return HugeInstance(build_bipartite_incidence(l, m), flatten(spec.g), tuple(types))


def margins_consistent(spec: TableSpec) -> bool:
    """Necessary conditions: g's row and column sums match the layer margins."""
    for i in range(spec.l):
        if sum(spec.g[i]) != sum(tp.count * tp.f[i] for tp in spec.types):
            return False
    for j in range(spec.m):
        if sum(row[j] for row in spec.g) != sum(tp.count * tp.e[j] for tp in spec.types):
            return False
    return True


def table_feasible(spec: TableSpec) -> bool:
    inst = build_table_instance(spec)
    return margins_consistent(spec) and huge_feasible(inst)


def to_table_solution(spec: TableSpec, sol: HugeSolution) -> TableSolution:
    if not sol.optimal:
        return TableSolution(Status.INFEASIBLE)
    layers = tuple(
        tuple((reshape(z, spec.l, spec.m), c) for z, c in bricks) for bricks in sol.presentation.types
    )
    return TableSolution(Status.OPTIMAL, layers, sol.objective)


def presentation_of(solution: TableSolution) -> CompactPresentation:
    return CompactPresentation(tuple(
        tuple((flatten(layer), c) for layer, c in per_type) for per_type in solution.layers
    ))


def solve_huge_table(spec: TableSpec) -> TableSolution:
    inst = build_table_instance(spec)
    if not margins_consistent(spec):
        return TableSolution(Status.INFEASIBLE)
    return to_table_solution(spec, huge_optimize(inst))


def verify_table(spec: TableSpec, solution: TableSolution, limit: int = 0) -> list[Violation]:
    """Compact line-sum checks; explicit 3-way checks too when ``n <= limit``."""
    out = validate_table_spec(spec)
    if out:
        return out
    l, m = spec.l, spec.m
    if not solution.optimal:
        if table_feasible(spec):
            return [Violation("InfeasibilityClaimRefuted", detail="a feasible table exists")]
        return []
    if len(solution.layers) != len(spec.types):
        return [Violation("TypeCountMismatch")]
    vertical = [[0] * m for _ in range(l)]
    for k, (tp, per_type) in enumerate(zip(spec.types, solution.layers), start=1):
        count = 0
        for layer, c in per_type:
            if len(layer) != l or any(len(r) != m for r in layer):
                out.append(Violation("DimensionMismatch", type=k))
                continue
            if c < 1:
                out.append(Violation("NonPositiveMultiplicity", type=k))
            if any(v < 0 for r in layer for v in r):
                out.append(Violation("NegativeEntry", type=k, detail=f"layer {layer}"))
            cols = tuple(sum(layer[i][j] for i in range(l)) for j in range(m))
            rows = tuple(sum(r) for r in layer)
            if cols != tp.e or rows != tp.f:
                out.append(Violation("LayerMarginViolation", type=k, detail=f"layer {layer}"))
            count += c
            for i in range(l):
                for j in range(m):
                    vertical[i][j] += c * layer[i][j]
        if count != tp.count:
            out.append(Violation("CountMismatch", type=k, detail=f"{count} layers, expected {tp.count}"))
        if len({flatten(layer) for layer, _ in per_type}) != len(per_type):
            out.append(Violation("DuplicateBrick", type=k))
    if tuple(map(tuple, vertical)) != spec.g:
        out.append(Violation("VerticalSumViolation", detail="layers do not sum to g"))
    if not out:
        out += verify_compact(build_table_instance(spec), presentation_of(solution))
    if not out and spec.n <= limit:
        out += _verify_expanded(spec, solution)
    return out


def expand_table(solution: TableSolution, limit: int) -> list[Matrix]:
    n = sum(c for per_type in solution.layers for _, c in per_type)
    if n > limit:
        raise ExpansionTooLarge(f"{n} layers exceeds the expansion limit {limit}")
    out = []
    for per_type in solution.layers:
        for layer, c in sorted(per_type, key=lambda lc: flatten(lc[0])):
            out.extend([layer] * c)
    return out


def _verify_expanded(spec: TableSpec, solution: TableSolution) -> list[Violation]:
    layers = expand_table(solution, spec.n)
    l, m, n = spec.l, spec.m, len(layers)
    # x[i][j][k] is cell (i, j) of layer k
    x = [[[layers[k][i][j] for k in range(n)] for j in range(m)] for i in range(l)]
    kinds = [tp_index for tp_index, tp in enumerate(spec.types) for _ in range(tp.count)]
    out = []
    for k in range(n):
        tp = spec.types[kinds[k]]
        for j in range(m):
            if sum(x[i][j][k] for i in range(l)) != tp.e[j]:
                out.append(Violation("ExpandedColumnSumViolation", type=kinds[k] + 1, coord=j + 1))
        for i in range(l):
            if sum(x[i][j][k] for j in range(m)) != tp.f[i]:
                out.append(Violation("ExpandedRowSumViolation", type=kinds[k] + 1, coord=i + 1))
    for i in range(l):
        for j in range(m):
            if sum(x[i][j]) != spec.g[i][j]:
                out.append(Violation("ExpandedVerticalSumViolation", detail=f"cell ({i + 1}, {j + 1})"))
    return out
