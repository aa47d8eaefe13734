"""Exact integer programming by depth-first branch and bound.

Every node is an exact rational LP. Branching picks the lowest-index
fractional coordinate and explores the floor side first, so the search order,
the returned point and the node count are reproducible. On totally
unimodular systems with integer data the root vertex is already integral and
no branch node is ever created.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NodeLimitExceeded, UnboundedInteger
from .simplex import ExactLP, Status, lp_solve

DEFAULT_NODE_LIMIT = 10**6


@dataclass(frozen=True)
class ILPResult:
    status: Status
    point: tuple[int, ...] | None = None
    value: Fraction | None = None
    # branch nodes created below the root; 0 means the root LP was integral
    nodes: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def _first_fractional(point) -> int | None:
    for j, v in enumerate(point):
        if v.denominator != 1:
            return j
    return None


def ilp_solve(lp: ExactLP, node_limit: int = DEFAULT_NODE_LIMIT) -> ILPResult:
    root = lp_solve(lp)
    if root.status is Status.UNBOUNDED:
        raise UnboundedInteger("LP relaxation is unbounded below")
    if root.status is Status.INFEASIBLE:
        return ILPResult(Status.INFEASIBLE)

    best_point = None
    best_value = None
    nodes = 0
    # stack of (lower, upper, solved relaxation)
    stack = [(lp.lower, lp.upper, root)]
    while stack:
        lower, upper, res = stack.pop()
        if res is None:
            res = lp_solve(lp.with_bounds(lower, upper))
            if res.status is Status.INFEASIBLE:
                continue
            if res.status is Status.UNBOUNDED:
                raise UnboundedInteger("LP relaxation is unbounded below")
        if best_value is not None and res.value >= best_value:
            continue
        j = _first_fractional(res.point)
        if j is None:
            best_point = tuple(int(v) for v in res.point)
            best_value = res.value
            continue
        if nodes + 2 > node_limit:
            raise NodeLimitExceeded(f"branch and bound exceeded {node_limit} nodes")
        nodes += 2
        v = res.point[j]
        down_hi = list(upper)
        down_hi[j] = math.floor(v)
        up_lo = list(lower)
        up_lo[j] = math.ceil(v)
        # pushed last, popped first: the floor branch
        stack.append((tuple(up_lo), upper, None))
        stack.append((lower, tuple(down_hi), None))

    if best_point is None:
        return ILPResult(Status.INFEASIBLE, nodes=nodes)
    return ILPResult(Status.OPTIMAL, best_point, best_value, nodes)
