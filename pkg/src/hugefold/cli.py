"""Command-line interface and JSON document formats.

Exit codes: 0 feasible / ok, 1 infeasible / verification failed,
2 input error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from pathlib import Path
from typing import Sequence

from .errors import HugeFoldError, InputError, ParseError, ResourceLimitError, ValidationError
from .huge import expand_compact, huge_feasible, huge_optimize, verify_compact, verify_explicit
from .model import (
    INF,
    NEG_INF,
    BrickType,
    CompactPresentation,
    HugeInstance,
    IntMatrix,
    Violation,
    build_bipartite_incidence,
    check_total_unimodularity,
    dot,
    validate_huge_instance,
)
from .simplex import ExactLP, Status, lp_solve
from .tables import (
    LayerType,
    TableSolution,
    TableSpec,
    build_table_instance,
    flatten,
    reshape,
    solve_huge_table,
    table_feasible,
    validate_table_spec,
    verify_table,
)

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3

_INT_RE = re.compile(r"[+-]?\d+")
# largest magnitude written as a bare JSON number; anything bigger is a string
_SAFE_INT = 2**53


# -- parsing ---------------------------------------------------------------

def _int(v, field: str) -> int:
    if isinstance(v, bool):
        raise ParseError("expected an integer, got a boolean", field)
    if isinstance(v, int):
        return v
    if isinstance(v, str) and _INT_RE.fullmatch(v.strip()):
        return int(v.strip())
    raise ParseError(f"expected an integer or decimal string, got {v!r}", field)


def _ext(v, field: str):
    if isinstance(v, str):
        key = v.strip().lower()
        if key in ("+inf", "inf", "infinity", "+infinity"):
            return INF
        if key in ("-inf", "-infinity"):
            return NEG_INF
    return _int(v, field)


def _vec(v, field: str, conv=_int) -> tuple:
    if not isinstance(v, list):
        raise ParseError("expected a list", field)
    return tuple(conv(x, f"{field}[{i}]") for i, x in enumerate(v))


def _mat(v, field: str) -> tuple[tuple[int, ...], ...]:
    if not isinstance(v, list):
        raise ParseError("expected a list of rows", field)
    return tuple(_vec(r, f"{field}[{i}]") for i, r in enumerate(v))


def _get(doc: dict, key: str, where: str = ""):
    field = f"{where}.{key}" if where else key
    if not isinstance(doc, dict):
        raise ParseError("expected an object", where or "document")
    if key not in doc:
        raise ParseError("missing field", field)
    return doc[key], field


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def parse_huge(doc: dict) -> HugeInstance:
    rows, f = _get(doc, "A")
    A = _mat(rows, f)
    if not A:
        raise ParseError("A needs at least one row", "A")
    if len({len(r) for r in A}) != 1:
        raise ParseError("rows have different lengths", "A")
    b0 = _vec(*_get(doc, "b0"))
    types_doc, f = _get(doc, "types")
    if not isinstance(types_doc, list) or not types_doc:
        raise ParseError("expected a nonempty list", f)
    types = []
    for k, tp in enumerate(types_doc):
        where = f"types[{k}]"
        types.append(BrickType(
            w=_vec(*_get(tp, "w", where)),
            l=_vec(*_get(tp, "l", where), conv=_ext),
            u=_vec(*_get(tp, "u", where), conv=_ext),
            b=_vec(*_get(tp, "b", where)),
            count=_int(*_get(tp, "count", where)),
        ))
    inst = HugeInstance(IntMatrix.from_rows(A), b0, tuple(types))
    problems = validate_huge_instance(inst)
    if problems:
        raise ValidationError(problems)
    return inst


def parse_table(doc: dict) -> TableSpec:
    l = _int(*_get(doc, "rows"))
    m = _int(*_get(doc, "cols"))
    g = _mat(*_get(doc, "g"))
    types_doc, f = _get(doc, "types")
    if not isinstance(types_doc, list) or not types_doc:
        raise ParseError("expected a nonempty list", f)
    types = []
    for k, tp in enumerate(types_doc):
        where = f"types[{k}]"
        types.append(LayerType(
            w=_mat(*_get(tp, "w", where)),
            e=_vec(*_get(tp, "e", where)),
            f=_vec(*_get(tp, "f", where)),
            count=_int(*_get(tp, "count", where)),
        ))
    spec = TableSpec(l, m, g, tuple(types))
    problems = validate_table_spec(spec)
    if problems:
        raise ValidationError(problems)
    return spec


def parse_instance(text: str) -> HugeInstance | TableSpec:
    doc = _load_json(text)
    kind, f = _get(doc, "kind")
    if kind == "huge_nfold":
        return parse_huge(doc)
    if kind == "table3":
        return parse_table(doc)
    if kind in ("table4", "table_4way"):
        raise ParseError(
            "4-way tables are not supported: their layer matrix is not totally unimodular "
            "and the complexity with a variable number of types is an open problem", f)
    raise ParseError(f"unknown kind {kind!r}", f)


# -- serialization ---------------------------------------------------------

def _num(v):
    if v == INF:
        return "+inf"
    if v == NEG_INF:
        return "-inf"
    return v if abs(v) < _SAFE_INT else str(v)


def dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def serialize_instance(obj: HugeInstance | TableSpec) -> dict:
    if isinstance(obj, HugeInstance):
        return {
            "kind": "huge_nfold",
            "A": [[_num(v) for v in r] for r in obj.A.to_rows()],
            "b0": [str(v) for v in obj.b0],
            "types": [
                {
                    "w": [_num(v) for v in tp.w],
                    "l": [_num(v) for v in tp.l],
                    "u": [_num(v) for v in tp.u],
                    "b": [_num(v) for v in tp.b],
                    "count": str(tp.count),
                }
                for tp in obj.types
            ],
        }
    return {
        "kind": "table3",
        "rows": obj.l,
        "cols": obj.m,
        "g": [[str(v) for v in r] for r in obj.g],
        "types": [
            {
                "w": [[_num(v) for v in r] for r in tp.w],
                "e": [_num(v) for v in tp.e],
                "f": [_num(v) for v in tp.f],
                "count": str(tp.count),
            }
            for tp in obj.types
        ],
    }


def solution_doc(status: Status, objective: int | None = None, per_type=None) -> dict:
    """``per_type[k]`` is a sequence of ``(z, multiplicity)``; z may be a matrix."""
    if status is not Status.OPTIMAL:
        return {"status": "infeasible"}
    presentation = []
    for k, bricks in enumerate(per_type, start=1):
        items = sorted(bricks, key=lambda zc: flatten(zc[0]) if _nested(zc[0]) else tuple(zc[0]))
        presentation.append({
            "type": k,
            "bricks": [
                {
                    "z": [[_num(v) for v in r] for r in z] if _nested(z) else [_num(v) for v in z],
                    "multiplicity": str(c),
                }
                for z, c in items
            ],
        })
    return {"status": "optimal", "objective": str(objective), "presentation": presentation}


def _nested(z) -> bool:
    return bool(z) and isinstance(z[0], (list, tuple))


def parse_solution(text: str) -> tuple[Status, int | None, list]:
    """Returns ``(status, objective, per_type)`` with bricks as given (flat or nested)."""
    doc = _load_json(text)
    status, f = _get(doc, "status")
    if status == "infeasible":
        return Status.INFEASIBLE, None, []
    if status != "optimal":
        raise ParseError(f"unknown status {status!r}", f)
    objective = _int(*_get(doc, "objective"))
    pres, f = _get(doc, "presentation")
    if not isinstance(pres, list):
        raise ParseError("expected a list", f)
    per_type = []
    for k, entry in enumerate(pres):
        where = f"presentation[{k}]"
        tnum = _int(*_get(entry, "type", where))
        if tnum != k + 1:
            raise ParseError(f"expected type {k + 1}, got {tnum}", f"{where}.type")
        bricks_doc, bf = _get(entry, "bricks", where)
        if not isinstance(bricks_doc, list):
            raise ParseError("expected a list", bf)
        bricks = []
        for i, br in enumerate(bricks_doc):
            bw = f"{bf}[{i}]"
            zdoc, zf = _get(br, "z", bw)
            z = _mat(zdoc, zf) if isinstance(zdoc, list) and zdoc and isinstance(zdoc[0], list) else _vec(zdoc, zf)
            bricks.append((z, _int(*_get(br, "multiplicity", bw))))
        per_type.append(tuple(bricks))
    return Status.OPTIMAL, objective, per_type


# -- commands --------------------------------------------------------------

def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def cmd_feasible(args) -> tuple[int, dict]:
    obj = parse_instance(_read(args.file))
    ok = table_feasible(obj) if isinstance(obj, TableSpec) else huge_feasible(obj)
    return (EXIT_OK if ok else EXIT_NO), {"feasible": ok}


def solve_document(obj: HugeInstance | TableSpec) -> dict:
    if isinstance(obj, TableSpec):
        sol = solve_huge_table(obj)
        return solution_doc(sol.status, sol.objective, sol.layers)
    sol = huge_optimize(obj)
    return solution_doc(sol.status, sol.objective, sol.presentation.types if sol.optimal else None)


def cmd_solve(args) -> tuple[int, dict | None]:
    doc = solve_document(parse_instance(_read(args.file)))
    code = EXIT_OK if doc["status"] == "optimal" else EXIT_NO
    if args.output:
        Path(args.output).write_text(dumps(doc), encoding="utf-8")
        return code, None
    return code, doc


def verify_document(obj: HugeInstance | TableSpec, status: Status, objective, per_type,
                    expand_limit: int = 0) -> list[Violation]:
    if isinstance(obj, TableSpec):
        inst = build_table_instance(obj)
        flat = [tuple((flatten(z) if _nested(z) else tuple(z), c) for z, c in bricks) for bricks in per_type]
    else:
        inst = obj
        flat = [tuple((tuple(z), c) for z, c in bricks) for bricks in per_type]
    if status is not Status.OPTIMAL:
        feasible = table_feasible(obj) if isinstance(obj, TableSpec) else huge_feasible(obj)
        return [Violation("InfeasibilityClaimRefuted", detail="a feasible point exists")] if feasible else []
    if isinstance(obj, TableSpec):
        for k, bricks in enumerate(per_type, start=1):
            for z, _ in bricks:
                if not _nested(z) or len(z) != obj.l or any(len(r) != obj.m for r in z):
                    return [Violation("DimensionMismatch", type=k, detail="layers must be rows x cols")]
    pres = CompactPresentation(tuple(flat))
    out = verify_compact(inst, pres)
    if len(flat) == inst.t:
        claimed = sum(mult * dot(tp.w, z) for tp, bricks in zip(inst.types, flat) for z, mult in bricks
                      if len(z) == inst.d)
        if claimed != objective:
            out.append(Violation("ObjectiveMismatch", detail=f"bricks cost {claimed}, document says {objective}"))
        for k, bricks in enumerate(flat, start=1):
            if [z for z, _ in bricks] != sorted(z for z, _ in bricks):
                out.append(Violation("UnsortedBricks", type=k))
    if not out and inst.n <= expand_limit:
        if isinstance(obj, TableSpec):
            layers = tuple(tuple((reshape(z, obj.l, obj.m), c) for z, c in bricks) for bricks in flat)
            out += verify_table(obj, TableSolution(Status.OPTIMAL, layers, objective), expand_limit)
        else:
            out += verify_explicit(inst, expand_compact(pres, expand_limit))
    return out


def cmd_verify(args) -> tuple[int, dict]:
    obj = parse_instance(_read(args.file))
    status, objective, per_type = parse_solution(_read(args.solution))
    violations = verify_document(obj, status, objective, per_type, args.expand_limit)
    doc = {"valid": not violations, "violations": [v.to_json() for v in violations]}
    return (EXIT_NO if violations else EXIT_OK), doc


def cmd_expand(args) -> tuple[int, dict]:
    status, _, per_type = parse_solution(_read(args.solution))
    if status is not Status.OPTIMAL:
        return EXIT_NO, {"status": "infeasible"}
    flat = CompactPresentation(tuple(
        tuple((flatten(z) if _nested(z) else tuple(z), c) for z, c in bricks) for bricks in per_type))
    expand_compact(flat, args.limit)  # raises before anything is materialized
    types = []
    for k, bricks in enumerate(per_type):
        explicit = expand_compact(CompactPresentation((flat.types[k],)), args.limit)
        shape = next((z for z, _ in bricks if _nested(z)), None)
        if shape is not None:
            l, m = len(shape), len(shape[0])
            rows = [[[_num(v) for v in r] for r in reshape(z, l, m)] for z in explicit]
        else:
            rows = [[_num(v) for v in z] for z in explicit]
        types.append({"type": k + 1, "bricks": rows})
    return EXIT_OK, {"status": "optimal", "types": types}


def _random_count(rng: random.Random, digits: int) -> int:
    if digits <= 1:
        return rng.randint(1, 9)
    return rng.randint(10 ** (digits - 1), 10**digits - 1)


_CATALOG = {
    "pair": [[1, 1]],
    "triple": [[1, 1, 1]],
    "interval": [[1, 1, 0], [0, 1, 1]],
    "network": [[1, -1, 0], [0, 1, -1]],
    "k22": build_bipartite_incidence(2, 2).to_rows(),
}


def generate_huge(seed: int, types: int = 2, digits: int = 12, matrix: str | None = None) -> HugeInstance:
    rng = random.Random(seed)
    name = matrix or rng.choice(sorted(_CATALOG))
    A = IntMatrix.from_rows(_CATALOG[name])
    d = A.cols
    b0 = [0] * d
    out = []
    for _ in range(types):
        lo = [rng.randint(-1, 1) for _ in range(d)]
        hi = [v + rng.randint(1, 3) for v in lo]
        z0 = [rng.randint(a, c) for a, c in zip(lo, hi)]
        b = A.matvec(z0)
        lp = ExactLP(A, b, lo, hi, [rng.randint(-3, 3) for _ in range(d)])
        z1 = [int(v) for v in lp_solve(lp).point]
        n = _random_count(rng, digits)
        c = rng.randint(0, n)
        for j in range(d):
            b0[j] += (n - c) * z0[j] + c * z1[j]
        out.append(BrickType(tuple(rng.randint(-3, 3) for _ in range(d)), tuple(lo), tuple(hi), b, n))
    return HugeInstance(A, tuple(b0), tuple(out))


def generate_table(seed: int, types: int = 2, digits: int = 12, rows: int = 2, cols: int = 3) -> TableSpec:
    rng = random.Random(seed)
    l, m = rows, cols
    g = [[0] * m for _ in range(l)]
    out = []
    for _ in range(types):
        X = [[rng.randint(0, 3) for _ in range(m)] for _ in range(l)]
        Y = [r[:] for r in X]
        if l > 1 and m > 1:
            i1, i2 = rng.sample(range(l), 2)
            j1, j2 = rng.sample(range(m), 2)
            delta = rng.randint(-min(X[i1][j1], X[i2][j2]), min(X[i1][j2], X[i2][j1]))
            Y[i1][j1] += delta
            Y[i2][j2] += delta
            Y[i1][j2] -= delta
            Y[i2][j1] -= delta
        e = tuple(sum(X[i][j] for i in range(l)) for j in range(m))
        f = tuple(sum(r) for r in X)
        n = _random_count(rng, digits)
        c = rng.randint(0, n)
        for i in range(l):
            for j in range(m):
                g[i][j] += (n - c) * X[i][j] + c * Y[i][j]
        w = tuple(tuple(rng.randint(-3, 3) for _ in range(m)) for _ in range(l))
        out.append(LayerType(w, e, f, n))
    return TableSpec(l, m, tuple(map(tuple, g)), tuple(out))


def cmd_gen(args) -> tuple[int, dict]:
    if args.types < 1 or args.digits < 1:
        raise InputError("--types and --digits must be positive")
    if args.kind == "huge_nfold":
        obj = generate_huge(args.seed, args.types, args.digits, args.matrix)
    else:
        if args.rows < 1 or args.cols < 1:
            raise InputError("--rows and --cols must be positive")
        obj = generate_table(args.seed, args.types, args.digits, args.rows, args.cols)
    return EXIT_OK, serialize_instance(obj)


def cmd_tu_check(args) -> tuple[int, dict]:
    doc = _load_json(_read(args.file))
    if isinstance(doc, dict) and doc.get("kind") == "table3":
        spec = parse_table(doc)
        A = build_bipartite_incidence(spec.l, spec.m)
    else:
        rows, f = _get(doc, "A")
        A = _mat(rows, f)
        if not A or len({len(r) for r in A}) != 1:
            raise ParseError("A must be a nonempty rectangular matrix", "A")
        A = IntMatrix.from_rows(A)
    tu = check_total_unimodularity(A)
    return (EXIT_OK if tu else EXIT_NO), {"totally_unimodular": tu}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hugefold", description="Exact solver for huge n-fold integer programs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("feasible", help="decide feasibility of an instance")
    s.add_argument("file")
    s.set_defaults(func=cmd_feasible)

    s = sub.add_parser("solve", help="optimize and print a compact solution")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("verify", help="check a solution document against an instance")
    s.add_argument("file")
    s.add_argument("solution")
    s.add_argument("--expand-limit", type=int, default=0,
                   help="also expand and check explicitly when n is at most this")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("expand", help="list every brick of a compact solution")
    s.add_argument("solution")
    s.add_argument("--limit", type=int, required=True)
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("gen", help="generate a seeded random feasible instance")
    s.add_argument("--kind", choices=["huge_nfold", "table3"], required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--types", type=int, default=2)
    s.add_argument("--digits", type=int, default=12, help="decimal digits of each brick count")
    s.add_argument("--matrix", choices=sorted(_CATALOG), help="huge_nfold: matrix from the TU catalog")
    s.add_argument("--rows", type=int, default=2, help="table3: rows per layer")
    s.add_argument("--cols", type=int, default=3, help="table3: columns per layer")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("tu-check", help="exhaustively test a matrix for total unimodularity")
    s.add_argument("file")
    s.set_defaults(func=cmd_tu_check)
    return p


def run(argv: Sequence[str]) -> tuple[int, str, str]:
    """Run one command; returns ``(exit code, stdout text, stderr text)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return (EXIT_INPUT if exc.code else EXIT_OK), "", ""
    try:
        code, doc = args.func(args)
    except ResourceLimitError as exc:
        return EXIT_LIMIT, "", dumps({"error": type(exc).__name__, "message": str(exc)})
    except HugeFoldError as exc:
        return EXIT_INPUT, "", dumps({"error": type(exc).__name__, "message": str(exc)})
    return code, (dumps(doc) if doc is not None else ""), ""


def main(argv: Sequence[str] | None = None) -> int:
    code, out, err = run(sys.argv[1:] if argv is None else argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
