"""Huge n-fold programs with ``t`` brick types whose counts are given in binary.

Both feasibility and optimization go through the aggregated t-fold program
whose variables are the per-type brick sums ``y^k``::

    sum_k y^k = b0,   A y^k = n_k b^k,   n_k l^k <= y^k <= n_k u^k.

An integer ``y`` exists exactly when an explicit solution exists, and each
``y^k`` is then split into ``n_k`` bricks by ``decompose_symmetric``. Every
split of ``y^k`` costs ``w^k . y^k``, so an optimal ``y`` yields an optimal
presentation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ExpansionTooLarge, ValidationError
from .ilp import DEFAULT_NODE_LIMIT, ilp_solve
from .model import (
    CompactPresentation,
    HugeInstance,
    IntMatrix,
    SymmetricAggregate,
    Violation,
    dot,
    scale_ext,
    validate_huge_instance,
)
from .simplex import ExactLP, Status
from .symmetric import decompose_symmetric, symmetric_feasible


@dataclass(frozen=True)
class HugeSolution:
    status: Status
    presentation: CompactPresentation | None = None
    objective: int | None = None
    aggregate: tuple[tuple[int, ...], ...] | None = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def _require_valid(inst: HugeInstance) -> None:
    problems = validate_huge_instance(inst)
    if problems:
        raise ValidationError(problems)


def build_aggregate_tfold(inst: HugeInstance, with_objective: bool = True) -> ExactLP:
    """The t-fold system over ``y = (y^1, ..., y^t)``, each block of length d."""
    _require_valid(inst)
    A, s, d, t = inst.A, inst.s, inst.d, inst.t
    cols = d * t
    rows: list[list[int]] = []
    rhs: list[int] = []
    for j in range(d):
        row = [0] * cols
        for k in range(t):
            row[k * d + j] = 1
        rows.append(row)
        rhs.append(inst.b0[j])
    lower, upper, cost = [], [], []
    for k, tp in enumerate(inst.types):
        for r in range(s):
            row = [0] * cols
            row[k * d:(k + 1) * d] = A.row(r)
            rows.append(row)
            rhs.append(tp.count * tp.b[r])
        lower += [scale_ext(tp.count, v) for v in tp.l]
        upper += [scale_ext(tp.count, v) for v in tp.u]
        cost += tp.w if with_objective else [0] * d
    return ExactLP(IntMatrix.from_rows(rows, cols), tuple(rhs), tuple(lower), tuple(upper),
                   tuple(Fraction(c) for c in cost))


def _split(inst: HugeInstance, point) -> tuple[tuple[int, ...], ...]:
    d = inst.d
    return tuple(tuple(point[k * d:(k + 1) * d]) for k in range(inst.t))


def huge_feasible(inst: HugeInstance, node_limit: int = DEFAULT_NODE_LIMIT) -> bool:
    res = ilp_solve(build_aggregate_tfold(inst, with_objective=False), node_limit)
    return res.optimal


def type_aggregate(inst: HugeInstance, k: int, y: tuple[int, ...]) -> SymmetricAggregate:
    tp = inst.types[k]
    return SymmetricAggregate(inst.A, y, tp.count, tp.b, tp.l, tp.u)


def huge_optimize(inst: HugeInstance, node_limit: int = DEFAULT_NODE_LIMIT) -> HugeSolution:
    res = ilp_solve(build_aggregate_tfold(inst, with_objective=True), node_limit)
    if not res.optimal:
        return HugeSolution(Status.INFEASIBLE)
    ys = _split(inst, res.point)
    per_type = []
    for k, y in enumerate(ys):
        agg = type_aggregate(inst, k, y)
        assert symmetric_feasible(agg), "an aggregated solution always splits into bricks"
        per_type.append(decompose_symmetric(agg).types[0])
    presentation = CompactPresentation(tuple(per_type))
    objective = sum(dot(tp.w, y) for tp, y in zip(inst.types, ys))
    return HugeSolution(Status.OPTIMAL, presentation, objective, ys)


def verify_compact(inst: HugeInstance, sol: CompactPresentation) -> list[Violation]:
    """Check membership of the presented point without expanding it."""
    out = validate_huge_instance(inst)
    if out:
        return out
    A, d = inst.A, inst.d
    if len(sol.types) != inst.t:
        return [Violation("TypeCountMismatch", detail=f"{len(sol.types)} types presented, {inst.t} expected")]
    total = [0] * d
    for k, (tp, bricks) in enumerate(zip(inst.types, sol.types), start=1):
        seen = set()
        count = 0
        for z, mult in bricks:
            z = tuple(z)
            if len(z) != d:
                out.append(Violation("DimensionMismatch", type=k, detail=f"brick {list(z)}"))
                continue
            if z in seen:
                out.append(Violation("DuplicateBrick", type=k, detail=f"brick {list(z)}"))
            seen.add(z)
            if mult < 1:
                out.append(Violation("NonPositiveMultiplicity", type=k, detail=f"brick {list(z)}: {mult}"))
            if A.matvec(z) != tp.b:
                out.append(Violation("EquationViolation", type=k, detail=f"brick {list(z)}"))
            for j, (v, lo, hi) in enumerate(zip(z, tp.l, tp.u), start=1):
                if not lo <= v <= hi:
                    out.append(Violation("BoundViolation", type=k, coord=j, detail=f"brick {list(z)}"))
            count += mult
            for j in range(d):
                total[j] += mult * z[j]
        if count != tp.count:
            out.append(Violation("CountMismatch", type=k, detail=f"{count} bricks, expected {tp.count}"))
    if tuple(total) != inst.b0:
        out.append(Violation("TopSumMismatch", detail="bricks do not sum to b0"))
    return out


def expand_compact(sol: CompactPresentation, limit: int) -> list[tuple[int, ...]]:
    """All bricks explicitly: type by type, each type in lexicographic order."""
    n = sum(sol.counts())
    if n > limit:
        raise ExpansionTooLarge(f"{n} bricks exceeds the expansion limit {limit}")
    out = []
    for bricks in sol.types:
        for z, mult in sorted(bricks):
            out.extend([tuple(z)] * mult)
    return out


def verify_explicit(inst: HugeInstance, bricks: list[tuple[int, ...]]) -> list[Violation]:
    """Check an explicit brick list against the n-fold constraints, brick by brick."""
    if len(bricks) != inst.n:
        return [Violation("CountMismatch", detail=f"{len(bricks)} bricks, expected {inst.n}")]
    out = []
    total = [0] * inst.d
    i = 0
    for k, tp in enumerate(inst.types, start=1):
        for _ in range(tp.count):
            z = bricks[i]
            i += 1
            if inst.A.matvec(z) != tp.b:
                out.append(Violation("EquationViolation", type=k, detail=f"brick {i}"))
            for j, (v, lo, hi) in enumerate(zip(z, tp.l, tp.u), start=1):
                if not lo <= v <= hi:
                    out.append(Violation("BoundViolation", type=k, coord=j, detail=f"brick {i}"))
            for j, v in enumerate(z):
                total[j] += v
    if tuple(total) != inst.b0:
        out.append(Violation("TopSumMismatch", detail="explicit bricks do not sum to b0"))
    return out
