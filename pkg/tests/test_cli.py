from __future__ import annotations

import json
from pathlib import Path

import pytest

from fixlab.cli import main

SAMPLES = Path(__file__).resolve().parents[1] / "samples"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_b2(capsys):
    code, out, _ = run(capsys, "solve", "--engine", "tarski", "--poset", SAMPLES / "b2.json",
                       "--map", SAMPLES / "b2_map.json", "--start", "bot")
    assert code == 0
    assert json.loads(out) == {"engine": "tarski", "above": "bot", "point": "a"}


@pytest.mark.parametrize("engine", ["pataraia", "dacar", "kt", "iterate"])
def test_solve_engines_agree_on_b2_from_b(capsys, engine):
    code, out, _ = run(capsys, "solve", "--engine", engine, "--poset", SAMPLES / "b2.json",
                       "--map", SAMPLES / "b2_map.json", "--start", "b")
    assert code == 0 and json.loads(out)["point"] == "top"


def test_solve_transfinite(capsys):
    code, out, _ = run(capsys, "solve", "--poset", SAMPLES / "omega1.json", "--map", SAMPLES / "successor.json",
                       "--start", "0", "--ordinal", "w+1")
    data = json.loads(out)
    assert code == 0
    assert data["point"] == "inf" and data["stage"] == "w" and data["stages"][0] == ["0", 0]


def test_solve_not_stabilized(capsys):
    code, out, _ = run(capsys, "solve", "--poset", SAMPLES / "omega1.json", "--map", SAMPLES / "successor.json",
                       "--start", "0", "--ordinal", "5", "--out", "text")
    assert code == 1 and "no fixed stage" in out


def test_solve_precondition_exit_code(capsys):
    code, _, err = run(capsys, "solve", "--engine", "tarski", "--poset", SAMPLES / "omega1.json",
                       "--map", SAMPLES / "successor.json", "--start", "0")
    assert code == 5 and "NotCompleteLattice" in err


def test_check_and_dot(capsys):
    code, out, _ = run(capsys, "check", "--poset", SAMPLES / "b2.json", "--map", SAMPLES / "b2_map.json")
    data = json.loads(out)
    assert code == 0 and data["complete_lattice"] and data["map"] == {"progressive": True, "monotone": True}
    code, out, _ = run(capsys, "check", "--poset", SAMPLES / "b2.json", "--out", "dot")
    assert code == 0 and out.startswith("digraph")


def test_check_failing_poset(capsys, tmp_path):
    p = tmp_path / "anti.json"
    p.write_text(json.dumps({"elements": ["a", "b"]}))
    code, out, _ = run(capsys, "check", "--poset", p)
    data = json.loads(out)
    assert code == 1 and data["chain_complete"] == {"verdict": "Failing", "witness": []}


def test_schema_exit_code(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("[1, 2")
    code, _, err = run(capsys, "check", "--poset", p)
    assert code == 3 and "SchemaError" in err


def test_usage_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve"])
    assert exc.value.code == 2


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["ordinal", "parse", "w^2+w*3+1", "--out", "text"], "w^2+w*3+1"),
        (["ordinal", "succ", "w", "--out", "text"], "w+1"),
        (["ordinal", "compare", "w^w", "w^3+7", "--out", "text"], "GT"),
        (["ordinal", "fs", "w*2", "--take", "3", "--out", "text"], "w, w+1, w+2"),
    ],
)
def test_ordinal_commands(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.strip() == expected


def test_ordinal_non_canonical(capsys):
    code, _, err = run(capsys, "ordinal", "parse", "w+w")
    assert code == 3 and "NonCanonical" in err


def test_ordinal_classify(capsys):
    code, out, _ = run(capsys, "ordinal", "classify", "--carrier", "2")
    data = json.loads(out)
    assert code == 0 and data["accepted"] == 5
    assert [r["length"] for r in data["representatives"]] == [0, 1, 2]
    assert data["successor_scan"][-1]["successor"] == "escapes carrier"


def test_carrier_cap_exit_code(capsys):
    code, _, err = run(capsys, "ordinal", "classify", "--carrier", "6")
    assert code == 4 and "CarrierTooLarge" in err


def test_arrow_commands(capsys):
    code, out, _ = run(capsys, "arrow", "check-cc", "--input", SAMPLES / "blowup_2.json")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "Complete"
    assert data["sup1"][0] == [[], [], 0]
    code, out, _ = run(capsys, "arrow", "check-cc", "--input", SAMPLES / "discrete_to_point.json")
    assert code == 1 and json.loads(out) == {"verdict": "Failing", "stage": 1, "chain": [[], []]}
    code, out, _ = run(capsys, "arrow", "blowup", "--n", "2", "--family", SAMPLES / "family_3.json")
    data = json.loads(out)
    assert code == 0 and data["bound"]["result"] == "BoundHolds" and data["bound"]["computes_fixed_point"]
    code, out, _ = run(capsys, "arrow", "ev0")
    assert code == 0 and all(json.loads(out).values())


def test_dataflow_command(capsys):
    code, out, _ = run(capsys, "dataflow", "--graph", SAMPLES / "loop.json", "--engine", "iterate")
    data = json.loads(out)
    assert code == 0 and data["fixed_point"] and data["out"]["n1"] == ["d1", "d2"]


def test_dataflow_malformed(capsys, tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"nodes": ["a"], "edges": [["a", "b"]]}))
    code, _, err = run(capsys, "dataflow", "--graph", p)
    assert code == 3 and "MalformedGraph" in err


def test_suite_subset(capsys):
    code, out, err = run(capsys, "suite", "--only", "ordinal-laws", "--only", "classifier", "--timing")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert [c["name"] for c in data["checks"]] == ["ordinal-laws", "classifier"]
    assert "ordinal-laws:" in err


def test_caps_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("FIXLAB_CAPS", "blowup_n=1")
    code, _, err = run(capsys, "arrow", "blowup", "--n", "3")
    assert code == 4 and "SizeLimit" in err
