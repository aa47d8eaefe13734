from __future__ import annotations

import random
from itertools import product

import pytest

from _catalog import random_tu_matrix
from hugefold.errors import NodeLimitExceeded, UnboundedInteger
from hugefold.ilp import ilp_solve
from hugefold.model import INF, IntMatrix
from hugefold.simplex import ExactLP, Status


def test_branching_example():
    lp = ExactLP(IntMatrix.from_rows([[2, 3]]), (7,), (0, 0), (INF, INF), (1, 0))
    res = ilp_solve(lp)
    assert res.status is Status.OPTIMAL
    assert res.point == (2, 1) and res.value == 2


def test_parity_infeasible():
    lp = ExactLP(IntMatrix.from_rows([[2, 2]]), (3,), (0, 0), (INF, INF))
    assert ilp_solve(lp).status is Status.INFEASIBLE


def test_tu_root_is_integral():
    lp = ExactLP(IntMatrix.from_rows([[1, 1]]), (2,), (0, 0), (2, 2), (1, 0))
    res = ilp_solve(lp)
    assert res.point == (0, 2) and res.value == 0 and res.nodes == 0


def test_unbounded_relaxation():
    lp = ExactLP(IntMatrix.from_rows([[1, -1]]), (0,), (0, 0), (INF, INF), (-1, 0))
    with pytest.raises(UnboundedInteger):
        ilp_solve(lp)


def test_node_limit():
    # even coefficients, odd right-hand side: infeasible, but only after many branches
    lp = ExactLP(IntMatrix.from_rows([[2, 2, 2]]), (101,), (0, 0, 0), (100, 100, 100))
    with pytest.raises(NodeLimitExceeded):
        ilp_solve(lp, node_limit=10)


def test_matches_enumeration_on_small_systems():
    rng = random.Random(21)
    for _ in range(300):
        nvars = rng.randint(1, 3)
        rows = [[rng.randint(-3, 3) for _ in range(nvars)] for _ in range(rng.randint(1, 2))]
        A = IntMatrix.from_rows(rows)
        lower = tuple(rng.randint(0, 2) for _ in range(nvars))
        upper = tuple(rng.randint(lo, 5) for lo in lower)
        x = [rng.randint(lo, hi) for lo, hi in zip(lower, upper)]
        b = tuple(v + rng.choice([0, 0, 1]) for v in A.matvec(x))
        c = [rng.randint(-4, 4) for _ in range(nvars)]
        lp = ExactLP(A, b, lower, upper, c)
        values = [sum(ci * xi for ci, xi in zip(c, p))
                  for p in product(*(range(lo, hi + 1) for lo, hi in zip(lower, upper)))
                  if A.matvec(p) == b]
        res = ilp_solve(lp)
        if values:
            assert res.status is Status.OPTIMAL
            assert res.value == min(values)
            assert lp.contains(res.point)
            assert all(isinstance(v, int) for v in res.point)
        else:
            assert res.status is Status.INFEASIBLE


def test_zero_branch_on_tu_catalog():
    rng = random.Random(22)
    for _ in range(100):
        A = random_tu_matrix(rng)
        x = [rng.randint(0, 3) for _ in range(A.cols)]
        lp = ExactLP(A, A.matvec(x), (0,) * A.cols, (4,) * A.cols, [rng.randint(-3, 3) for _ in range(A.cols)])
        res = ilp_solve(lp)
        assert res.status is Status.OPTIMAL and res.nodes == 0


def test_deterministic_point():
    lp = ExactLP(IntMatrix.from_rows([[2, 3, 5]]), (30,), (0, 0, 0), (10, 10, 10), (1, 1, 1))
    first = ilp_solve(lp)
    assert all(ilp_solve(lp) == first for _ in range(3))
