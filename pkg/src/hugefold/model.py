"""Core data types and structural matrix builders.

Integers are plain Python ints (arbitrary precision). Bounds that may be
infinite use ``ExtInt``: an int, or one of the float sentinels ``INF`` /
``NEG_INF``. Python compares ints, Fractions and float infinities exactly,
and ``n * INF == INF`` for positive ``n``, which is all the arithmetic the
solver needs on bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence, Union

from .errors import ExpansionTooLarge, MatrixTooLargeForTUCheck

INF = math.inf
NEG_INF = -math.inf

ExtInt = Union[int, float]
Vector = tuple  # tuple[int, ...]

# Hard limits for the exhaustive TU check.
TU_MAX_COLS = 16
TU_MAX_MINORS = 2_000_000


def is_finite(v: ExtInt) -> bool:
    return not (isinstance(v, float) and math.isinf(v))


def scale_ext(n: int, v: ExtInt) -> ExtInt:
    """``n * v`` for a positive integer ``n``; infinities stay symbolic."""
    if n <= 0:
        raise ValueError("scale factor must be positive")
    if not is_finite(v):
        return v
    return n * v


def check_ext(v) -> ExtInt:
    if isinstance(v, bool):
        raise TypeError("booleans are not integers")
    if isinstance(v, int):
        return v
    if isinstance(v, float) and math.isinf(v):
        return v
    raise TypeError(f"expected an integer or +/-inf, got {v!r}")


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"entries has length {len(self.entries)}, expected {self.rows}*{self.cols}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def matvec(self, x: Sequence) -> tuple:
        if len(x) != self.cols:
            raise ValueError(f"vector of length {len(x)} for a matrix with {self.cols} columns")
        return tuple(dot(self.row(i), x) for i in range(self.rows))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> list[list[int]]:
        return [[self[i, j] for j in cols] for i in rows]


@dataclass(frozen=True)
class BrickType:
    w: tuple[int, ...]
    l: tuple[ExtInt, ...]
    u: tuple[ExtInt, ...]
    b: tuple[int, ...]
    count: int

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(self.w))
        object.__setattr__(self, "l", tuple(check_ext(v) for v in self.l))
        object.__setattr__(self, "u", tuple(check_ext(v) for v in self.u))
        object.__setattr__(self, "b", tuple(self.b))


@dataclass(frozen=True)
class HugeInstance:
    A: IntMatrix
    b0: tuple[int, ...]
    types: tuple[BrickType, ...]

    def __post_init__(self):
        object.__setattr__(self, "b0", tuple(self.b0))
        object.__setattr__(self, "types", tuple(self.types))

    @property
    def s(self) -> int:
        return self.A.rows

    @property
    def d(self) -> int:
        return self.A.cols

    @property
    def t(self) -> int:
        return len(self.types)

    @property
    def n(self) -> int:
        return sum(tp.count for tp in self.types)


@dataclass(frozen=True)
class SymmetricAggregate:
    """One brick type repeated ``n`` times whose bricks must sum to ``a``."""

    A: IntMatrix
    a: tuple[int, ...]
    n: int
    b: tuple[int, ...]
    l: tuple[ExtInt, ...]
    u: tuple[ExtInt, ...]

    def __post_init__(self):
        for name in ("a", "b"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "l", tuple(check_ext(v) for v in self.l))
        object.__setattr__(self, "u", tuple(check_ext(v) for v in self.u))
        d = self.A.cols
        if len(self.a) != d or len(self.l) != d or len(self.u) != d:
            raise ValueError("aggregate vectors must have length d = A.cols")
        if len(self.b) != self.A.rows:
            raise ValueError("b must have length s = A.rows")


@dataclass(frozen=True)
class CompactPresentation:
    """Per type, the brick multiplicities restricted to their support.

    ``types[k]`` is a tuple of ``(z, multiplicity)`` pairs sorted by ``z``.
    """

    types: tuple[tuple[tuple[tuple[int, ...], int], ...], ...]

    @classmethod
    def from_maps(cls, maps: Iterable[dict]) -> CompactPresentation:
        out = []
        for m in maps:
            out.append(tuple(sorted((tuple(z), int(c)) for z, c in m.items() if c)))
        return cls(tuple(out))

    def counts(self) -> tuple[int, ...]:
        return tuple(sum(c for _, c in tp) for tp in self.types)

    def aggregates(self, d: int) -> tuple[tuple[int, ...], ...]:
        sums = []
        for tp in self.types:
            acc = [0] * d
            for z, c in tp:
                for j, v in enumerate(z):
                    acc[j] += c * v
            sums.append(tuple(acc))
        return tuple(sums)

    def support_sizes(self) -> tuple[int, ...]:
        return tuple(len(tp) for tp in self.types)


@dataclass(frozen=True)
class Violation:
    """One failed check. ``type`` and ``coord`` are 1-based when present."""

    kind: str
    type: int | None = None
    coord: int | None = None
    detail: str = field(default="", compare=False)

    def __str__(self) -> str:
        where = []
        if self.type is not None:
            where.append(f"type {self.type}")
        if self.coord is not None:
            where.append(f"coord {self.coord}")
        s = self.kind
        if where:
            s += "(" + ", ".join(where) + ")"
        if self.detail:
            s += f": {self.detail}"
        return s

    def to_json(self) -> dict:
        doc = {"kind": self.kind}
        if self.type is not None:
            doc["type"] = self.type
        if self.coord is not None:
            doc["coord"] = self.coord
        if self.detail:
            doc["detail"] = self.detail
        return doc


def build_nfold_matrix(A: IntMatrix, n: int, max_entries: int = 10**7) -> IntMatrix:
    """Explicit (d+sn) x (dn) n-fold product: identities on top, A on the diagonal."""
    if n < 1:
        raise ExpansionTooLarge("n-fold product needs n >= 1")
    s, d = A.rows, A.cols
    rows, cols = d + s * n, d * n
    if rows * cols > max_entries:
        raise ExpansionTooLarge(f"n-fold product would have {rows}x{cols} entries")
    out = [[0] * cols for _ in range(rows)]
    for i in range(n):
        for j in range(d):
            out[j][i * d + j] = 1
        for r in range(s):
            for j in range(d):
                out[d + i * s + r][i * d + j] = A[r, j]
    return IntMatrix.from_rows(out, cols)


def build_bipartite_incidence(l: int, m: int) -> IntMatrix:
    """Vertex-edge incidence of K_{l,m}; column (i, j) sits at index i*m + j.

    Rows 0..m-1 are column-sum equations, rows m..m+l-1 row-sum equations.
    """
    if l < 1 or m < 1:
        raise ValueError("table dimensions must be positive")
    out = [[0] * (l * m) for _ in range(m + l)]
    for i in range(l):
        for j in range(m):
            c = i * m + j
            out[j][c] = 1
            out[m + i][c] = 1
    return IntMatrix.from_rows(out, l * m)


def bareiss_det(M: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    a = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(rows: Sequence[Sequence]) -> int:
    """Exact rank over the rationals."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, len(a)):
            if a[i][c] != 0:
                f = a[i][c] / a[r][c]
                for j in range(c, ncols):
                    a[i][j] -= f * a[r][j]
        r += 1
        if r == len(a):
            break
    return r


def check_total_unimodularity(A: IntMatrix) -> bool:
    """Exhaustively test every square minor for a determinant in {-1, 0, 1}."""
    if A.cols > TU_MAX_COLS:
        raise MatrixTooLargeForTUCheck(f"{A.cols} columns exceeds the limit of {TU_MAX_COLS}")
    kmax = min(A.rows, A.cols)
    total = sum(math.comb(A.rows, k) * math.comb(A.cols, k) for k in range(1, kmax + 1))
    if total > TU_MAX_MINORS:
        raise MatrixTooLargeForTUCheck(f"{total} square submatrices exceeds {TU_MAX_MINORS}")
    if any(v not in (-1, 0, 1) for v in A.entries):
        return False
    for k in range(2, kmax + 1):
        for rs in combinations(range(A.rows), k):
            for cs in combinations(range(A.cols), k):
                if bareiss_det(A.submatrix(rs, cs)) not in (-1, 0, 1):
                    return False
    return True


def validate_huge_instance(inst: HugeInstance) -> list[Violation]:
    """Structural checks only; feasibility is not decided here."""
    out: list[Violation] = []
    s, d = inst.A.rows, inst.A.cols
    if d < 1:
        out.append(Violation("DimensionMismatch", detail="A must have at least one column"))
    if len(inst.b0) != d:
        out.append(Violation("DimensionMismatch", detail=f"b0 has length {len(inst.b0)}, expected {d}"))
    if not inst.types:
        out.append(Violation("DimensionMismatch", detail="at least one brick type is required"))
    for k, tp in enumerate(inst.types, start=1):
        for name, vec, want in (("w", tp.w, d), ("l", tp.l, d), ("u", tp.u, d), ("b", tp.b, s)):
            if len(vec) != want:
                out.append(Violation(
                    "DimensionMismatch", type=k, detail=f"{name} has length {len(vec)}, expected {want}"))
        if tp.count < 1:
            out.append(Violation("NonPositiveCount", type=k, detail=f"count {tp.count}"))
        for j, (lo, hi) in enumerate(zip(tp.l, tp.u), start=1):
            if lo > hi:
                out.append(Violation("BoundOrderViolation", type=k, coord=j, detail=f"{lo} > {hi}"))
            if lo == INF or hi == NEG_INF:
                out.append(Violation("BoundOrderViolation", type=k, coord=j, detail="empty infinite bound"))
    return out
