"""Exact rational linear programming over ``{Aeq x = beq, lower <= x <= upper}``.

The solver is a bounded-variable primal simplex on a dense tableau of
``Fraction`` entries. Phase one starts from one artificial column per row;
dependent equality rows are detected when an artificial cannot be pivoted out
and are dropped. Entering and leaving choices follow Bland's rule, which
guarantees termination. Variables free in both directions are split into a
difference of two nonnegative columns so every nonbasic variable rests on a
finite bound and every optimum returned is a basic feasible solution.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PointNotInPolytope, UnboundedRegion
from .model import INF, NEG_INF, ExtInt, IntMatrix, check_ext, is_finite, rank


class Status(str, enum.Enum):
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    OPTIMAL = "optimal"


@dataclass(frozen=True)
class ExactLP:
    """Minimize ``objective . x`` subject to ``Aeq x = beq`` and box bounds."""

    Aeq: IntMatrix
    beq: tuple[int, ...]
    lower: tuple[ExtInt, ...]
    upper: tuple[ExtInt, ...]
    objective: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        n = self.Aeq.cols
        object.__setattr__(self, "beq", tuple(self.beq))
        object.__setattr__(self, "lower", tuple(_bound(v) for v in self.lower))
        object.__setattr__(self, "upper", tuple(_bound(v) for v in self.upper))
        obj = self.objective
        obj = (Fraction(0),) * n if obj is None else tuple(Fraction(c) for c in obj)
        object.__setattr__(self, "objective", obj)
        if len(self.beq) != self.Aeq.rows:
            raise ValueError("beq length does not match Aeq rows")
        if len(self.lower) != n or len(self.upper) != n or len(obj) != n:
            raise ValueError("bounds and objective must have one entry per column")
        for j, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if lo > hi or lo == INF or hi == NEG_INF:
                raise ValueError(f"empty bound interval on column {j}")

    @property
    def cols(self) -> int:
        return self.Aeq.cols

    def with_bounds(self, lower, upper) -> ExactLP:
        return ExactLP(self.Aeq, self.beq, tuple(lower), tuple(upper), self.objective)

    def with_objective(self, objective) -> ExactLP:
        return ExactLP(self.Aeq, self.beq, self.lower, self.upper, tuple(objective))

    def contains(self, x: Sequence) -> bool:
        """Exact membership test, no tolerance."""
        if len(x) != self.cols:
            return False
        if any(not (lo <= v <= hi) for v, lo, hi in zip(x, self.lower, self.upper)):
            return False
        return self.Aeq.matvec(x) == self.beq


def _bound(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else v
    return check_ext(v)


@dataclass(frozen=True)
class LPResult:
    status: Status
    point: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    # Basic columns of the final tableau. Columns created by splitting a
    # free variable are numbered after the original columns.
    basis: tuple[int, ...] = ()

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _Tableau:
    def __init__(self, rows, b, lower, upper):
        self.m = len(rows)
        self.n = len(lower)
        self.lower = list(lower)
        self.upper = list(upper)
        # nonbasic variables start on a finite bound (free columns were split)
        self.x = [lo if is_finite(lo) else hi for lo, hi in zip(lower, upper)]
        self.T: list[list[Fraction]] = []
        self.basis: list[int] = []
        for i, r in enumerate(rows):
            resid = b[i] - sum(a * v for a, v in zip(r, self.x) if a)
            sgn = 1 if resid >= 0 else -1
            row = [Fraction(sgn * a) for a in r] + [Fraction(0)] * self.m
            row[self.n + i] = Fraction(1)
            self.T.append(row)
            self.basis.append(self.n + i)
            self.x.append(Fraction(abs(resid)))
        self.lower += [0] * self.m
        self.upper += [INF] * self.m
        self.x = [Fraction(v) for v in self.x]

    @property
    def width(self) -> int:
        return len(self.x)

    def pivot(self, r: int, j: int) -> None:
        T = self.T
        prow = T[r]
        piv = prow[j]
        if piv != 1:
            prow[:] = [v / piv for v in prow]
        for i, row in enumerate(T):
            if i != r:
                f = row[j]
                if f:
                    row[:] = [a - f * p if p else a for a, p in zip(row, prow)]
        self.basis[r] = j

    def run(self, cost: Sequence[Fraction]) -> bool:
        """Minimize ``cost . x`` from the current basis. False means unbounded."""
        width = self.width
        while True:
            in_basis = set(self.basis)
            cb = [cost[k] for k in self.basis]
            enter = None
            for j in range(width):
                if j in in_basis:
                    continue
                dj = cost[j] - sum(c * row[j] for c, row in zip(cb, self.T) if c and row[j])
                if dj < 0 and self.x[j] < self.upper[j]:
                    enter, delta = j, 1
                    break
                if dj > 0 and self.x[j] > self.lower[j]:
                    enter, delta = j, -1
                    break
            if enter is None:
                return True
            theta, leave = self.ratio(enter, delta)
            if leave is None:
                return False
            self.step(enter, delta, theta, leave)

    def ratio(self, j: int, delta: int):
        """Longest step for ``x_j`` moving in direction ``delta``, Bland tie-break."""
        theta = INF
        leave = None  # (variable index, row or None for a bound flip)
        if is_finite(self.upper[j]) and is_finite(self.lower[j]):
            theta = self.upper[j] - self.lower[j]
            leave = (j, None)
        for i, row in enumerate(self.T):
            alpha = row[j] * delta
            if not alpha:
                continue
            k = self.basis[i]
            if alpha > 0:
                if not is_finite(self.lower[k]):
                    continue
                lim = (self.x[k] - self.lower[k]) / alpha
            else:
                if not is_finite(self.upper[k]):
                    continue
                lim = (self.upper[k] - self.x[k]) / (-alpha)
            if lim < theta or (lim == theta and leave is not None and k < leave[0]):
                theta, leave = lim, (k, i)
        return theta, leave

    def step(self, j: int, delta: int, theta, leave) -> None:
        if theta:
            self.x[j] += delta * theta
            for i, row in enumerate(self.T):
                if row[j]:
                    self.x[self.basis[i]] -= theta * delta * row[j]
        k, r = leave
        if r is not None:
            # snap the leaving variable onto the bound it reached
            alpha = self.T[r][j] * delta
            self.x[k] = Fraction(self.lower[k] if alpha > 0 else self.upper[k])
            self.pivot(r, j)

    def drop_artificials(self) -> None:
        n = self.n
        r = 0
        while r < len(self.T):
            if self.basis[r] >= n:
                in_basis = set(self.basis)
                j = next((c for c in range(n) if c not in in_basis and self.T[r][c]), None)
                if j is None:
                    # dependent equality row
                    del self.T[r]
                    del self.basis[r]
                    continue
                self.pivot(r, j)
            r += 1
        self.T = [row[:n] for row in self.T]
        self.x = self.x[:n]
        self.lower = self.lower[:n]
        self.upper = self.upper[:n]
        self.m = len(self.T)


def _solve(lp: ExactLP) -> LPResult:
    A = lp.Aeq
    n = A.cols
    rows = [list(A.row(i)) for i in range(A.rows)]
    lower, upper = list(lp.lower), list(lp.upper)
    cost = list(lp.objective)
    split = []  # (original column, negative-part column)
    for j in range(n):
        if lower[j] == NEG_INF and upper[j] == INF:
            split.append((j, len(lower)))
            for r in rows:
                r.append(-r[j])
            lower[j] = 0
            lower.append(0)
            upper.append(INF)
            cost.append(-cost[j])
    tab = _Tableau(rows, lp.beq, lower, upper)
    width = tab.width
    phase1 = [Fraction(0)] * tab.n + [Fraction(1)] * tab.m
    tab.run(phase1)
    if any(tab.x[tab.n:]):
        return LPResult(Status.INFEASIBLE)
    tab.drop_artificials()
    assert tab.width == width - A.rows
    if not tab.run(cost):
        return LPResult(Status.UNBOUNDED)
    # A split column with both halves nonbasic sits at 0, which is not a bound
    # of the original variable. Its reduced cost is 0 at an optimum, so slide it
    # until a basic variable hits a bound; if it can slide forever either way
    # the region contains a line and has no vertex at all.
    for pos, neg in split:
        if pos in tab.basis or neg in tab.basis:
            continue
        for col in (pos, neg):
            theta, leave = tab.ratio(col, 1)
            if leave is not None:
                tab.step(col, 1, theta, leave)
                break
    x = list(tab.x)
    for j, neg in split:
        x[j] -= x[neg]
    point = tuple(x[:n])
    value = sum((c * v for c, v in zip(lp.objective, point)), Fraction(0))
    return LPResult(Status.OPTIMAL, point, value, tuple(sorted(tab.basis)))


def lp_solve(lp: ExactLP) -> LPResult:
    """Exact optimum over the rationals; an optimal point is always a basic solution."""
    return _solve(lp)


def find_vertex(lp: ExactLP) -> LPResult:
    """Any vertex of the feasible region (the objective is ignored)."""
    return _solve(lp.with_objective([0] * lp.cols))


def is_vertex(lp: ExactLP, x: Sequence) -> bool:
    """True iff ``x`` is feasible and the columns of its free coordinates are independent."""
    if not lp.contains(x):
        return False
    free = [j for j, (v, lo, hi) in enumerate(zip(x, lp.lower, lp.upper)) if lo < v < hi]
    if not free:
        return True
    cols = [lp.Aeq.column(j) for j in free]
    return rank(cols) == len(free)


def bounding_box(lp: ExactLP) -> tuple[list, list]:
    """Replace infinite bounds by the exact extent of the region along each axis.

    Raises UnboundedRegion when some coordinate is unbounded over the region.
    """
    lower, upper = list(lp.lower), list(lp.upper)
    for j in range(lp.cols):
        if is_finite(lower[j]) and is_finite(upper[j]):
            continue
        unit = [0] * lp.cols
        for sign, store in ((1, lower), (-1, upper)):
            if is_finite(store[j]):
                continue
            unit[j] = sign
            res = lp_solve(lp.with_objective(unit))
            if res.status is Status.UNBOUNDED:
                raise UnboundedRegion(f"coordinate {j} is unbounded over the region")
            if res.status is Status.INFEASIBLE:
                raise PointNotInPolytope("region is empty")
            store[j] = res.point[j]
    return lower, upper


def caratheodory_decompose(lp: ExactLP, x: Sequence) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """Write ``x`` as a convex combination of at most ``cols + 1`` vertices.

    Repeatedly take a vertex ``v`` of the smallest face containing the current
    point, push the point away from ``v`` until another coordinate hits a
    bound, and continue on that smaller face.
    """
    x = tuple(Fraction(v) for v in x)
    if not lp.contains(x):
        raise PointNotInPolytope("point violates the constraints")
    lower, upper = bounding_box(lp)
    region = lp.with_bounds(lower, upper).with_objective([0] * lp.cols)
    terms: list[tuple[tuple[Fraction, ...], Fraction]] = []
    remaining = Fraction(1)
    cur = x
    while True:
        face_lo = [cur[j] if cur[j] in (lower[j], upper[j]) else lower[j] for j in range(lp.cols)]
        face_hi = [cur[j] if cur[j] in (lower[j], upper[j]) else upper[j] for j in range(lp.cols)]
        res = find_vertex(region.with_bounds(face_lo, face_hi))
        assert res.optimal, "current point lies on the face, so the face is nonempty"
        v = res.point
        if v == cur:
            terms.append((v, remaining))
            break
        theta = None
        for j in range(lp.cols):
            step = cur[j] - v[j]
            if step > 0:
                lim = (upper[j] - cur[j]) / step
            elif step < 0:
                lim = (lower[j] - cur[j]) / step
            else:
                continue
            if theta is None or lim < theta:
                theta = lim
        assert theta is not None and theta > 0
        # cur = theta/(1+theta) * v + 1/(1+theta) * nxt
        terms.append((v, remaining * theta / (1 + theta)))
        remaining = remaining / (1 + theta)
        cur = tuple(c + theta * (c - vv) for c, vv in zip(cur, v))
    return terms
