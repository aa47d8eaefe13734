from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hugefold.cli import (
    EXIT_INPUT,
    EXIT_LIMIT,
    EXIT_NO,
    EXIT_OK,
    generate_huge,
    generate_table,
    parse_instance,
    run,
    serialize_instance,
)
from hugefold.errors import ParseError, ValidationError
from hugefold.model import INF

HUGE = {
    "kind": "huge_nfold",
    "A": [[1, 1]],
    "b0": ["2000000000000", 1000000000000],
    "types": [{"w": [1, 0], "l": [0, 0], "u": [2, "+inf"], "b": [2], "count": "1000000000000"}],
}


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def test_parse_accepts_strings_and_infinity():
    inst = parse_instance(json.dumps(HUGE))
    assert inst.types[0].count == 10**12
    assert inst.b0 == (2 * 10**12, 10**12)
    assert inst.types[0].u == (2, INF)


def test_parse_errors_name_the_field():
    doc = dict(HUGE)
    del doc["b0"]
    with pytest.raises(ParseError) as exc:
        parse_instance(json.dumps(doc))
    assert exc.value.field == "b0"
    bad = json.loads(json.dumps(HUGE))
    bad["types"][0]["count"] = "12x"
    with pytest.raises(ParseError) as exc:
        parse_instance(json.dumps(bad))
    assert exc.value.field == "types[0].count"
    with pytest.raises(ParseError):
        parse_instance("{not json")


def test_validation_reports_violations():
    bad = json.loads(json.dumps(HUGE))
    bad["types"][0]["l"] = [3, 0]
    with pytest.raises(ValidationError) as exc:
        parse_instance(json.dumps(bad))
    assert [(v.kind, v.type, v.coord) for v in exc.value.violations] == [("BoundOrderViolation", 1, 1)]


def test_four_way_tables_rejected():
    with pytest.raises(ParseError) as exc:
        parse_instance(json.dumps({"kind": "table4"}))
    assert "not totally unimodular" in str(exc.value)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 30), st.booleans())
def test_serialize_round_trip(seed, types, digits, table):
    obj = generate_table(seed, types, digits) if table else generate_huge(seed, types, digits)
    assert parse_instance(json.dumps(serialize_instance(obj))) == obj


def test_gen_is_deterministic():
    a = run(["gen", "--kind", "huge_nfold", "--seed", "7", "--digits", "20"])
    b = run(["gen", "--kind", "huge_nfold", "--seed", "7", "--digits", "20"])
    assert a == b and a[0] == EXIT_OK
    c = run(["gen", "--kind", "huge_nfold", "--seed", "8", "--digits", "20"])
    assert c[1] != a[1]


@pytest.mark.parametrize("kind", ["huge_nfold", "table3"])
def test_generated_instances_are_feasible(tmp_path, kind):
    for seed in range(5):
        code, out, _ = run(["gen", "--kind", kind, "--seed", str(seed), "--digits", "15"])
        path = _write(tmp_path, f"{kind}{seed}.json", out)
        assert run(["feasible", path])[0] == EXIT_OK
        code, sol, _ = run(["solve", path])
        assert code == EXIT_OK
        sol_path = _write(tmp_path, f"sol{seed}.json", sol)
        code, out, _ = run(["verify", path, sol_path])
        assert code == EXIT_OK and json.loads(out) == {"valid": True, "violations": []}


def test_solve_feasible_and_exit_codes(fixtures, tmp_path):
    code, out, _ = run(["solve", str(fixtures / "f2.json")])
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["objective"] == "1000000"
    assert doc["presentation"] == [
        {"type": 1, "bricks": [{"z": [1, 1], "multiplicity": "1000000"}]},
        {"type": 2, "bricks": [{"z": [1, 0], "multiplicity": "1000000"}]},
    ]
    assert run(["feasible", str(fixtures / "f2.json")])[1] == '{\n  "feasible": true\n}\n'
    code, out, _ = run(["solve", str(fixtures / "f2_infeasible.json")])
    assert code == EXIT_NO and json.loads(out) == {"status": "infeasible"}
    assert run(["feasible", str(fixtures / "f2_infeasible.json")])[0] == EXIT_NO

    target = tmp_path / "out.json"
    code, out, _ = run(["solve", str(fixtures / "f2.json"), "-o", str(target)])
    assert code == EXIT_OK and out == "" and json.loads(target.read_text()) == doc


def test_input_errors_exit_2(tmp_path):
    code, out, err = run(["solve", str(tmp_path / "missing.json")])
    assert code == EXIT_INPUT and out == "" and json.loads(err)["error"] == "InputError"
    code, _, err = run(["solve", _write(tmp_path, "bad.json", "{")])
    assert code == EXIT_INPUT and json.loads(err)["error"] == "ParseError"
    assert run(["frobnicate"])[0] == EXIT_INPUT


def test_verify_flags_bad_documents(fixtures, tmp_path):
    f2 = str(fixtures / "f2.json")
    good = json.loads(run(["solve", f2])[1])
    bad = json.loads(json.dumps(good))
    bad["objective"] = "999999"
    code, out, _ = run(["verify", f2, _write(tmp_path, "s.json", bad)])
    assert code == EXIT_NO
    assert [v["kind"] for v in json.loads(out)["violations"]] == ["ObjectiveMismatch"]
    claim = _write(tmp_path, "inf.json", {"status": "infeasible"})
    code, out, _ = run(["verify", f2, claim])
    assert code == EXIT_NO and json.loads(out)["violations"][0]["kind"] == "InfeasibilityClaimRefuted"
    assert run(["verify", str(fixtures / "f2_infeasible.json"), claim])[0] == EXIT_OK


def test_expand(fixtures, tmp_path):
    sol = _write(tmp_path, "s.json", run(["solve", str(fixtures / "f1.json")])[1])
    code, out, _ = run(["expand", sol, "--limit", "3"])
    assert code == EXIT_OK
    (entry,) = json.loads(out)["types"]
    assert len(entry["bricks"]) == 3
    big = _write(tmp_path, "big.json", run(["solve", str(fixtures / "f2.json")])[1])
    code, out, err = run(["expand", big, "--limit", "1000"])
    assert code == EXIT_LIMIT and out == "" and json.loads(err)["error"] == "ExpansionTooLarge"


def test_table_cli(fixtures, tmp_path):
    spec = str(fixtures / "table_2x2x4.json")
    code, out, _ = run(["solve", spec])
    assert code == EXIT_OK
    bricks = json.loads(out)["presentation"][0]["bricks"]
    assert bricks == [
        {"z": [[0, 1], [1, 0]], "multiplicity": "2"},
        {"z": [[1, 0], [0, 1]], "multiplicity": "2"},
    ]
    sol = _write(tmp_path, "s.json", out)
    assert run(["verify", spec, sol, "--expand-limit", "4"])[0] == EXIT_OK
    code, out, _ = run(["expand", sol, "--limit", "4"])
    assert json.loads(out)["types"][0]["bricks"][0] == [[0, 1], [1, 0]]


def test_tu_check(tmp_path, fixtures):
    assert run(["tu-check", _write(tmp_path, "a.json", {"A": [[1, 1, 0], [0, 1, 1]]})])[0] == EXIT_OK
    code, out, _ = run(["tu-check", _write(tmp_path, "b.json", {"A": [[1, 1, 0], [0, 1, 1], [1, 0, 1]]})])
    assert code == EXIT_NO and json.loads(out) == {"totally_unimodular": False}
    assert run(["tu-check", str(fixtures / "table_2x2x4.json")])[0] == EXIT_OK
    code, _, err = run(["tu-check", _write(tmp_path, "c.json", {"A": [[1] * 20]})])
    assert code == EXIT_LIMIT and json.loads(err)["error"] == "MatrixTooLargeForTUCheck"
