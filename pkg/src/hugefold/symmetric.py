"""Single brick type: feasibility and compact decomposition of an aggregate.

With ``A`` totally unimodular, ``n`` bricks ``z`` with ``Az = b`` and
``l <= z <= u`` summing to ``a`` exist exactly when ``Aa = nb`` and
``nl <= a <= nu``. ``decompose_symmetric`` turns that certificate into an
explicit multiset of bricks whose size is polynomial in ``d`` and
``log n``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NonIntegralVertex, NotFeasible, PointNotInPolytope, UnboundedBrickSpace, UnboundedRegion
from .model import CompactPresentation, SymmetricAggregate, is_finite, scale_ext
from .simplex import ExactLP, bounding_box, caratheodory_decompose, find_vertex


def symmetric_feasible(agg: SymmetricAggregate) -> bool:
    n = agg.n
    if n < 1:
        return False
    if agg.A.matvec(agg.a) != tuple(n * v for v in agg.b):
        return False
    return all(
        scale_ext(n, lo) <= v <= scale_ext(n, hi) for v, lo, hi in zip(agg.a, agg.l, agg.u)
    )


def tightened_bounds(agg: SymmetricAggregate) -> tuple[list, list]:
    """Bounds every brick of every valid decomposition of ``agg`` must obey.

    A brick ``z`` leaves ``a - z`` for the other ``n - 1`` bricks, so
    ``a - (n-1)u <= z <= a - (n-1)l`` on top of ``l <= z <= u``.
    """
    if agg.n == 1:
        return list(agg.l), list(agg.u)
    k = agg.n - 1
    lower = [max(lo, a - scale_ext(k, hi)) for a, lo, hi in zip(agg.a, agg.l, agg.u)]
    upper = [min(hi, a - scale_ext(k, lo)) for a, lo, hi in zip(agg.a, agg.l, agg.u)]
    return lower, upper


def _integral(point) -> tuple[int, ...]:
    if any(v.denominator != 1 for v in point):
        raise NonIntegralVertex(f"fractional vertex {point}; A is not totally unimodular")
    return tuple(int(v) for v in point)


def peel_one_brick(agg: SymmetricAggregate) -> tuple[tuple[int, ...], SymmetricAggregate]:
    """Split off one brick so the remaining ``n - 1`` bricks stay feasible."""
    if agg.n < 2:
        raise NotFeasible("peeling needs at least two bricks")
    if not symmetric_feasible(agg):
        raise NotFeasible("aggregate is infeasible")
    lower, upper = tightened_bounds(agg)
    res = find_vertex(ExactLP(agg.A, agg.b, lower, upper))
    if not res.optimal:
        # a/n is a rational solution, so this only happens without TU
        raise NonIntegralVertex("peeling system has no solution; A is not totally unimodular")
    z = _integral(res.point)
    rest = SymmetricAggregate(agg.A, tuple(x - y for x, y in zip(agg.a, z)), agg.n - 1, agg.b, agg.l, agg.u)
    assert symmetric_feasible(rest)
    return z, rest


def brick_polytope(agg: SymmetricAggregate) -> ExactLP:
    """The tightened brick polytope, with infinite bounds resolved by LP."""
    lower, upper = tightened_bounds(agg)
    lp = ExactLP(agg.A, agg.b, lower, upper)
    if all(is_finite(v) for v in lower + upper):
        return lp
    try:
        lower, upper = bounding_box(lp)
    except UnboundedRegion as exc:
        raise UnboundedBrickSpace(str(exc)) from None
    except PointNotInPolytope:
        raise NotFeasible("brick polytope is empty") from None
    return lp.with_bounds(lower, upper)


def decompose_symmetric(agg: SymmetricAggregate) -> CompactPresentation:
    """Compact multiset of ``n`` bricks summing to ``a``; support at most ``2d + 2``.

    Steps: write ``a/n`` as a convex combination of at most ``d + 1`` vertices
    of the brick polytope (integral by total unimodularity), take
    ``floor(n * weight)`` copies of each, and peel the at most ``d`` leftover
    bricks one by one.
    """
    if not symmetric_feasible(agg):
        raise NotFeasible("aggregate is infeasible")
    n, d = agg.n, agg.A.cols
    if all(v % n == 0 for v in agg.a):
        # a/n is itself a brick
        return CompactPresentation.from_maps([{tuple(v // n for v in agg.a): n}])

    mult: dict[tuple[int, ...], int] = {}
    poly = brick_polytope(agg)
    center = tuple(Fraction(v, n) for v in agg.a)
    terms = caratheodory_decompose(poly, center)
    used = 0
    remainder = list(agg.a)
    for vertex, weight in terms:
        z = _integral(vertex)
        c = (n * weight.numerator) // weight.denominator
        if c:
            mult[z] = mult.get(z, 0) + c
            used += c
            for j in range(d):
                remainder[j] -= c * z[j]
    left = n - used
    assert 0 <= left <= d, "floors lose less than one brick per term"
    if left:
        rest = SymmetricAggregate(agg.A, tuple(remainder), left, agg.b, agg.l, agg.u)
        assert symmetric_feasible(rest)
        while rest.n > 1:
            z, rest = peel_one_brick(rest)
            mult[z] = mult.get(z, 0) + 1
        mult[rest.a] = mult.get(rest.a, 0) + 1

    out = CompactPresentation.from_maps([mult])
    assert len(out.types[0]) <= 2 * d + 2
    return out
