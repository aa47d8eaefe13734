from __future__ import annotations

import random
from itertools import product

import pytest

from _catalog import TINY_MATRICES, random_tiny_instance
from hugefold.errors import ExpansionTooLarge
from hugefold.huge import (
    build_aggregate_tfold,
    expand_compact,
    huge_feasible,
    huge_optimize,
    type_aggregate,
    verify_compact,
    verify_explicit,
)
from hugefold.ilp import ilp_solve
from hugefold.model import INF, BrickType, CompactPresentation, HugeInstance, IntMatrix
from hugefold.oracle import brute_force_optimize, enumerate_bricks
from hugefold.simplex import Status
from hugefold.symmetric import decompose_symmetric, symmetric_feasible

PAIR = IntMatrix.from_rows([[1, 1]])
M = 10**6


def f2(b0=(2 * M, M), n1=M, n2=M):
    return HugeInstance(PAIR, b0, (
        BrickType((1, 0), (0, 0), (2, 2), (2,), n1),
        BrickType((0, 1), (0, 0), (1, 1), (1,), n2),
    ))


def test_aggregate_single_type():
    inst = HugeInstance(PAIR, (5, 1), (BrickType((0, 0), (0, 0), (2, 2), (2,), 3),))
    lp = build_aggregate_tfold(inst, with_objective=False)
    assert lp.Aeq.to_rows() == [[1, 0], [0, 1], [1, 1]]
    assert lp.beq == (5, 1, 6)
    assert lp.lower == (0, 0) and lp.upper == (6, 6)
    assert lp.objective == (0, 0)


def test_aggregate_two_types():
    lp = build_aggregate_tfold(f2())
    assert lp.Aeq.to_rows() == [[1, 0, 1, 0], [0, 1, 0, 1], [1, 1, 0, 0], [0, 0, 1, 1]]
    assert lp.beq == (2 * M, M, 2 * M, M)
    assert lp.upper == (2 * M, 2 * M, M, M)
    assert lp.objective == (1, 0, 0, 1)


def test_aggregate_keeps_infinite_bounds_symbolic():
    inst = HugeInstance(PAIR, (5, 1), (BrickType((0, 0), (0, 0), (INF, 2), (2,), 10**30),))
    lp = build_aggregate_tfold(inst)
    assert lp.upper == (INF, 2 * 10**30)


def test_f2_feasibility():
    assert huge_feasible(f2())
    assert not huge_feasible(f2(b0=(3 * M, M)))


def test_f2_optimum():
    sol = huge_optimize(f2())
    assert sol.status is Status.OPTIMAL
    assert sol.objective == M
    assert sol.presentation.types == ((((1, 1), M),), (((1, 0), M),))
    assert verify_compact(f2(), sol.presentation) == []
    assert huge_optimize(f2(b0=(3 * M, M))).status is Status.INFEASIBLE


def test_single_brick_forced():
    inst = HugeInstance(PAIR, (0, 2), (BrickType((5, -7), (0, 0), (2, 2), (2,), 1),))
    sol = huge_optimize(inst)
    assert sol.objective == -14
    assert sol.presentation.types == ((((0, 2), 1),),)


def test_single_type_agrees_with_aggregate_check():
    rng = random.Random(41)
    for _ in range(200):
        inst = random_tiny_instance(rng, max_types=1, max_count=5)
        assert huge_feasible(inst) == symmetric_feasible(type_aggregate(inst, 0, inst.b0))


def test_verify_flags_tampering():
    inst = f2()
    sol = huge_optimize(inst).presentation
    short = CompactPresentation((((((1, 1), M - 1),)), sol.types[1]))
    kinds = {(v.kind, v.type) for v in verify_compact(inst, short)}
    assert kinds == {("CountMismatch", 1), ("TopSumMismatch", None)}
    swapped = CompactPresentation(((((3, -1), M),), sol.types[1]))
    bad = verify_compact(inst, swapped)
    assert any(v.kind == "BoundViolation" and v.type == 1 and v.coord == 2 for v in bad)


def test_expand_examples():
    p = CompactPresentation.from_maps([{(2, 0): 2, (1, 1): 1}])
    assert expand_compact(p, 10) == [(1, 1), (2, 0), (2, 0)]
    assert expand_compact(CompactPresentation.from_maps([{}]), 0) == []
    with pytest.raises(ExpansionTooLarge):
        expand_compact(huge_optimize(f2()).presentation, 1000)


def _explicit_solutions(inst):
    """Every explicit x of a tiny instance, as per-type brick tuples."""
    per_type = [list(product(enumerate_bricks(inst.A, tp.b, tp.l, tp.u), repeat=tp.count)) for tp in inst.types]
    for combo in product(*per_type):
        total = tuple(sum(z[j] for bricks in combo for z in bricks) for j in range(inst.d))
        if total == inst.b0:
            yield combo


def test_aggregation_soundness():
    rng = random.Random(42)
    seen = 0
    while seen < 60:
        inst = random_tiny_instance(rng, feasible_bias=1.0)
        lp = build_aggregate_tfold(inst, with_objective=False)
        for combo in _explicit_solutions(inst):
            y = tuple(sum(z[j] for z in bricks) for bricks in combo for j in range(inst.d))
            assert lp.contains(y)
            seen += 1


def test_aggregation_completeness():
    rng = random.Random(43)
    for _ in range(150):
        inst = random_tiny_instance(rng)
        res = ilp_solve(build_aggregate_tfold(inst))
        if not res.optimal:
            continue
        for k in range(inst.t):
            y = res.point[k * inst.d:(k + 1) * inst.d]
            pres = decompose_symmetric(type_aggregate(inst, k, y))
            assert pres.counts() == (inst.types[k].count,)


def test_oracle_equivalence():
    rng = random.Random(44)
    for A in TINY_MATRICES:
        for _ in range(25):
            inst = random_tiny_instance(rng, A=A, allow_inf=True)
            truth = brute_force_optimize(inst)
            assert huge_feasible(inst) == truth.feasible
            sol = huge_optimize(inst)
            assert sol.optimal == truth.feasible
            if truth.feasible:
                assert sol.objective == truth.objective
                assert verify_compact(inst, sol.presentation) == []
                assert verify_explicit(inst, expand_compact(sol.presentation, 100)) == []


@pytest.mark.parametrize("scale", [1, 2, 4, 1024, 2**40])
def test_doubling_scales_objective(scale):
    n = M * scale
    sol = huge_optimize(f2(b0=(2 * n, n), n1=n, n2=n))
    assert sol.objective == n
    assert verify_compact(f2(b0=(2 * n, n), n1=n, n2=n), sol.presentation) == []
