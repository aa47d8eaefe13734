"""Brute-force ground truth for desk-scale instances.

Nothing here imports the LP, ILP or huge solvers: coordinate ranges come from
interval propagation over the equations, and optimization enumerates
multisets of bricks type by type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement, product

from .errors import ScaleTooLarge, TooManyBricks, UnboundedBrickSpace
from .model import HugeInstance, IntMatrix, is_finite

BRICK_CAP = 10_000
MULTISET_CAP = 200_000


def propagate_ranges(A: IntMatrix, b, l, u, rounds: int = 50) -> list[tuple[int, int]] | None:
    """Finite integer ranges for every coordinate of ``{Az = b, l <= z <= u}``.

    Returns None when the propagation proves the set empty. Raises
    UnboundedBrickSpace if some coordinate keeps an infinite range.
    """
    lo, hi = list(l), list(u)
    for _ in range(rounds):
        changed = False
        for r in range(A.rows):
            row = A.row(r)
            for j, a in enumerate(row):
                if not a:
                    continue
                # a*z_j = b_r - sum_{k != j} row[k] z_k
                rest_min, rest_max = 0, 0
                for k, c in enumerate(row):
                    if k == j or not c:
                        continue
                    if c > 0:
                        rest_min += c * lo[k]
                        rest_max += c * hi[k]
                    else:
                        rest_min += c * hi[k]
                        rest_max += c * lo[k]
                vmin, vmax = b[r] - rest_max, b[r] - rest_min
                if a < 0:
                    vmin, vmax = -vmax, -vmin
                    a = -a
                # infinite partial sums only ever carry the sign that keeps the bound loose
                new_lo = -((-vmin) // a) if is_finite(vmin) else vmin
                new_hi = vmax // a if is_finite(vmax) else vmax
                if new_lo > lo[j]:
                    lo[j], changed = new_lo, True
                if new_hi < hi[j]:
                    hi[j], changed = new_hi, True
                if lo[j] > hi[j]:
                    return None
        if not changed:
            break
    for j in range(A.cols):
        if not (is_finite(lo[j]) and is_finite(hi[j])):
            raise UnboundedBrickSpace(f"coordinate {j + 1} has no finite range")
    return [(int(a), int(c)) for a, c in zip(lo, hi)]


def enumerate_bricks(A: IntMatrix, b, l, u, cap: int = BRICK_CAP) -> list[tuple[int, ...]]:
    """Every integer ``z`` with ``Az = b`` and ``l <= z <= u``, sorted."""
    ranges = propagate_ranges(A, tuple(b), l, u)
    if ranges is None:
        return []
    d = A.cols
    rows = [A.row(r) for r in range(A.rows)]
    # remaining[k][r]: (min, max) of sum_{j >= k} row[j] z_j over the ranges
    remaining = [[(0, 0)] * A.rows for _ in range(d + 1)]
    for k in range(d - 1, -1, -1):
        lo_k, hi_k = ranges[k]
        remaining[k] = [
            (mn + min(row[k] * lo_k, row[k] * hi_k), mx + max(row[k] * lo_k, row[k] * hi_k))
            for row, (mn, mx) in zip(rows, remaining[k + 1])
        ]
    out: list[tuple[int, ...]] = []
    z = [0] * d

    def rec(k: int, partial: list[int]) -> None:
        if k == d:
            if all(p == br for p, br in zip(partial, b)):
                out.append(tuple(z))
                if len(out) > cap:
                    raise TooManyBricks(f"more than {cap} bricks")
            return
        lo_k, hi_k = ranges[k]
        for v in range(lo_k, hi_k + 1):
            nxt = [p + row[k] * v for p, row in zip(partial, rows)]
            if all(mn <= br - p <= mx for p, br, (mn, mx) in zip(nxt, b, remaining[k + 1])):
                z[k] = v
                rec(k + 1, nxt)

    rec(0, [0] * A.rows)
    return out


def count_bricks_by_product(A: IntMatrix, b, l, u) -> int:
    """Second, independent count: filter the whole box by the equations."""
    ranges = propagate_ranges(A, tuple(b), l, u)
    if ranges is None:
        return 0
    b = tuple(b)
    return sum(1 for z in product(*(range(a, c + 1) for a, c in ranges)) if A.matvec(z) == b)


def achievable_sums(bricks: list[tuple[int, ...]], n: int, costs=None) -> dict:
    """Map every sum of an n-multiset of ``bricks`` to (min cost, one multiset)."""
    total = math.comb(len(bricks) + n - 1, n) if bricks else 0
    if total > MULTISET_CAP:
        raise ScaleTooLarge(f"{total} multisets exceeds the cap {MULTISET_CAP}")
    d = len(bricks[0]) if bricks else 0
    best: dict = {}
    for combo in combinations_with_replacement(range(len(bricks)), n):
        key = tuple(sum(bricks[i][j] for i in combo) for j in range(d))
        cost = sum(costs[i] for i in combo) if costs is not None else 0
        if key not in best or cost < best[key][0]:
            best[key] = (cost, tuple(bricks[i] for i in combo))
    return best


@dataclass(frozen=True)
class OracleResult:
    feasible: bool
    objective: int | None = None
    # per type, the chosen multiset of bricks
    witness: tuple[tuple[tuple[int, ...], ...], ...] | None = None


def brute_force_optimize(inst: HugeInstance, max_count: int = 8) -> OracleResult:
    """Exact optimum of a tiny huge instance by exhaustive multiset search."""
    d = inst.A.cols
    # partial sums over the types processed so far -> (cost, witness)
    frontier: dict = {(0,) * d: (0, ())}
    for tp in inst.types:
        if tp.count > max_count:
            raise ScaleTooLarge(f"count {tp.count} exceeds the oracle limit {max_count}")
        bricks = enumerate_bricks(inst.A, tp.b, tp.l, tp.u)
        costs = [sum(w * v for w, v in zip(tp.w, z)) for z in bricks]
        sums = achievable_sums(bricks, tp.count, costs)
        nxt: dict = {}
        for base, (c0, wit0) in frontier.items():
            for add, (c1, wit1) in sums.items():
                key = tuple(x + y for x, y in zip(base, add))
                cost = c0 + c1
                if key not in nxt or cost < nxt[key][0]:
                    nxt[key] = (cost, wit0 + (wit1,))
        frontier = nxt
        if not frontier:
            break
    hit = frontier.get(tuple(inst.b0))
    if hit is None:
        return OracleResult(False)
    return OracleResult(True, hit[0], hit[1])


def symmetric_exists(A: IntMatrix, a, n: int, b, l, u) -> bool:
    """Whether some n bricks of ``{Az = b, l <= z <= u}`` sum to ``a``."""
    bricks = enumerate_bricks(A, b, l, u)
    if not bricks:
        return False
    return tuple(a) in achievable_sums(bricks, n)
