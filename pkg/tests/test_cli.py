import json
import subprocess
import sys

import pytest

from causalflow.cli import run
from causalflow.dot import influence_dot, parse_dot
from causalflow.fixtures import BadParams, cycle, generate_fixture, line
from causalflow.geometry import dump, serialize, validate
from causalflow import find_flow


@pytest.fixture
def files(tmp_path, C6, P2x2):
    paths = {}
    for name, g in {"L3": line(3), "C6": C6, "P2x2": P2x2, "L16": line(16)}.items():
        paths[name] = tmp_path / f"{name}.json"
        dump(g, paths[name])
    paths["bad"] = tmp_path / "bad.json"
    paths["bad"].write_text('{"vertices": 2, "edges": [[0, 0]], "inputs": [0], "outputs": [1]}')
    paths["garbled"] = tmp_path / "garbled.json"
    paths["garbled"].write_text("{\n  \"vertices\": 2,\n  oops\n}")
    return {k: str(v) for k, v in paths.items()}


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_find_line(capsys, files):
    code, out, _ = invoke(capsys, "find", files["L3"])
    assert code == 0
    assert json.loads(out)["flow"]["successor"] == {"0": "1", "1": "2"}


def test_find_cycle(capsys, files):
    code, out, _ = invoke(capsys, "find", files["C6"])
    assert code == 1
    failure = json.loads(out)["failure"]
    assert failure["variant"] == "ViciousCircuit"
    assert failure["circuit"] == ["a0", "b0", "a1", "b1", "a2", "b2", "a0"]
    assert failure["scc"] == ["a0", "a1", "a2"]


def test_verify_line(capsys, files):
    code, out, _ = invoke(capsys, "verify", files["L3"], "--angles", "zero")
    assert code == 0
    report = json.loads(out)
    assert report["passed"] and all(report["checks"].values())


def test_verify_with_angle_file(capsys, files, tmp_path):
    angles = tmp_path / "angles.json"
    angles.write_text(json.dumps({"0": 0.3, "1": 2.1}))
    code, out, _ = invoke(capsys, "verify", files["L3"], "--angles", str(angles), "--raw-corrections")
    assert code == 0


def test_invalid_input(capsys, files):
    code, out, err = invoke(capsys, "find", files["bad"])
    assert code == 2 and out == ""
    assert "loop edge on vertex 0" in err
    code, _, err = invoke(capsys, "find", files["garbled"])
    assert code == 2 and "line 3" in err


def test_missing_file(capsys, tmp_path):
    assert invoke(capsys, "find", str(tmp_path / "nope.json"))[0] == 2


def test_resource_limit(capsys, files):
    code, _, err = invoke(capsys, "verify", files["L16"])
    assert code == 3 and "resource limit" in err
    assert invoke(capsys, "verify", files["L3"], "--max-qubits", "2")[0] == 3
    assert invoke(capsys, "verify", files["L3"], "--max-qubits", "3")[0] == 0


def test_order_and_pattern(capsys, files):
    code, out, _ = invoke(capsys, "order", files["P2x2"])
    assert code == 0 and json.loads(out)["layers"] == [["0", "1"], ["2", "3"]]
    code, out, _ = invoke(capsys, "pattern", files["L3"], "--shift")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and rows[0]["format"] == "causalflow-pattern" and len(rows) == 9


def test_dot_round_trip(capsys, files, C6):
    code, out, _ = invoke(capsys, "dot", files["C6"])
    assert code == 1
    parsed = parse_dot(out)
    result = find_flow(C6)
    assert parsed["labels"] == {v: C6.name(v) for v in range(6)}
    assert parsed["filled"] == set(result.witness.scc)
    assert set(parsed["arcs"]) == result.digraph.arcs()
    solid = {a for a, style in parsed["arcs"].items() if style == "solid"}
    assert solid == result.cover.arcs()
    assert invoke(capsys, "find", files["L3"], "--format", "dot")[1] == influence_dot(
        line(3), find_flow(line(3)).cover, find_flow(line(3)).digraph)


def test_multiple_files(capsys, files, tmp_path):
    out_path = tmp_path / "all.jsonl"
    code = run(["find", files["L3"], files["C6"], files["bad"], "--jobs", "2", "-o", str(out_path)])
    rows = [json.loads(line) for line in out_path.read_text().splitlines()]
    assert code == 2
    assert [r["exit"] for r in rows] == [0, 1, 2]
    assert rows[0]["result"]["flow"]["chains"] == [["0", "1", "2"]]


def test_gen_is_deterministic(capsys, tmp_path):
    code, first, _ = invoke(capsys, "gen", "random", "8", "10", "2", "--seed", "7")
    second = invoke(capsys, "gen", "random", "8", "10", "2", "--seed", "7")[1]
    assert code == 0 and first == second
    raw = json.loads(first)
    assert raw["meta"] == {"family": "random", "params": [8, 10, 2], "seed": 7}
    g = validate(raw)
    assert (g.n, g.m, len(g.inputs), len(g.outputs)) == (8, 10, 2, 2)
    assert invoke(capsys, "gen", "random", "8", "10", "2", "--seed", "8")[1] != first


def test_gen_families(capsys):
    assert validate(json.loads(invoke(capsys, "gen", "line", "3")[1])) == line(3)
    assert validate(json.loads(invoke(capsys, "gen", "cycle", "6")[1])) == cycle(6)
    assert invoke(capsys, "gen", "cycle", "5")[0] == 2
    with pytest.raises(BadParams):
        generate_fixture("torus", 3)


def test_cycles_never_have_flows():
    for t in range(2, 8):
        assert not find_flow(cycle(2 * t))


def test_console_script(files):
    proc = subprocess.run([sys.executable, "-m", "causalflow.cli", "find", files["C6"]],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["failure"]["variant"] == "ViciousCircuit"


def test_geometry_json_round_trip(capsys, C6):
    assert validate(json.loads(json.dumps(serialize(C6)))) == C6
