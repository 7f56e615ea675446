import io
import json
import pathlib

import pytest

from lconvex import cli
from lconvex.graphcore import path_graph
from lconvex.gridconvex import GridFunction, TreeGrid, is_lconvex
from lconvex.zeroext import ZeroExtInstance
from oracles import triangle

GOLDEN = pathlib.Path(__file__).parent / "golden"


def run(argv):
    out = io.StringIO()
    status = cli.run([str(a) for a in argv], out)
    text = out.getvalue()
    return status, (json.loads(text) if text.strip().startswith("{") else text)


def dump(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


def test_mcmf_solve_verify_triangle(tmp_path):
    path = dump(tmp_path, "triangle.json", triangle().to_json())
    status, rep = run(["mcmf", "solve", path, "--verify", "--dual-brute", 4])
    assert status == cli.OK == rep["status"]
    assert rep["result"]["cost"] == "3/2"
    assert all(v["passed"] for v in rep["verifications"])
    assert {v["name"] for v in rep["verifications"]} >= {"optimality", "half-integrality", "cost"}


def test_text_report(tmp_path):
    path = dump(tmp_path, "triangle.json", triangle().to_json())
    status, text = run(["mcmf", "solve", path, "--text"])
    assert status == 0 and "cost: 3/2" in text and "status: 0" in text


def test_input_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    status, rep = run(["mcmf", "solve", bad])
    assert status == cli.INPUT_ERROR and "error" in rep["result"]
    status, _ = run(["mcmf", "solve", tmp_path / "missing.json"])
    assert status == cli.INPUT_ERROR
    status, _ = run(["mcmf", "solve", dump(tmp_path, "x.json", {"n": 2, "edges": []})])
    assert status == cli.INPUT_ERROR
    assert run(["nonsense"])[0] == cli.INPUT_ERROR


def test_infeasible_demand_is_rejected(tmp_path):
    data = {"n": 2, "edges": [{"u": 0, "v": 1, "cap": 1, "cost": 1}], "terminals": [{"node": 0, "demand": 2}, {"node": 1, "demand": 0}]}
    status, rep = run(["mcmf", "solve", dump(tmp_path, "inf.json", data)])
    assert status == cli.REJECTED


def test_zeroext_rejects_k3(tmp_path):
    data = {"graph": {"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]}, "n": 1, "b": [[0, 0, "1"]], "c": []}
    status, rep = run(["zeroext", "solve", dump(tmp_path, "k3.json", data)])
    assert status == cli.REJECTED
    assert "NP-hard" in json.dumps(rep)


def test_zeroext_generated_instance_solves(tmp_path):
    out = tmp_path / "z.json"
    assert run(["gen", "zeroext", "--seed", 7, "--graph", "C4", "--n", 2, "-o", out])[0] == 0
    ZeroExtInstance.from_json(json.loads(out.read_text()))
    status, rep = run(["zeroext", "solve", out, "--verify"])
    assert status == 0 and all(v["passed"] for v in rep["verifications"])
    status, brute = run(["zeroext", "solve", out, "--brute"])
    assert status == 0 and brute["result"]["value"] == rep["result"]["value"]


def test_gen_is_deterministic_and_matches_golden(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["gen", "mcmf", "--seed", 1, "--n", 3, "--k", 3, "-o", a])
    run(["gen", "mcmf", "--seed", 1, "--n", 3, "--k", 3, "-o", b])
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text()) == json.loads((GOLDEN / "gen_mcmf_seed1_n3_k3.json").read_text())
    assert run(["gen", "mcmf", "--seed", -1, "-o", a])[0] == cli.INPUT_ERROR


@pytest.mark.parametrize("seed", range(4))
def test_gridfn_gen_and_verify(tmp_path, seed):
    out = tmp_path / "g.json"
    run(["gen", "gridfn", "--seed", seed, "-o", out])
    g = GridFunction.from_json(json.loads(out.read_text()))
    assert is_lconvex(g.grid, g)
    status, rep = run(["lconvex", "verify", out, "--sda"])
    assert status == 0 and rep["result"]["lconvex"] is True


def test_lconvex_verify_refuses_non_closed_domain(tmp_path):
    grid = TreeGrid(path_graph(4), 1)
    data = GridFunction(grid, {(0,): 0, (3,): 0}).to_json()
    status, rep = run(["lconvex", "verify", dump(tmp_path, "open.json", data)])
    assert status == cli.REJECTED


@pytest.mark.parametrize("seed", range(3))
def test_semilattice_check(tmp_path, seed):
    out = tmp_path / "p.json"
    run(["gen", "poset", "--seed", seed, "-o", out])
    status, rep = run(["semilattice", "check", out])
    assert status == 0
    assert all(v["passed"] for v in rep["verifications"])
    assert "submodular" in rep["result"]


def test_semilattice_check_rejects_pentagon(tmp_path):
    from lconvex.semilattice import pentagon

    status, _ = run(["semilattice", "check", dump(tmp_path, "n5.json", pentagon().to_json())])
    assert status == cli.REJECTED


def test_reports_are_deterministic_up_to_timing(tmp_path):
    path = dump(tmp_path, "triangle.json", triangle().to_json())
    reps = [run(["mcmf", "solve", path, "--verify"])[1] for _ in range(2)]
    for r in reps:
        r.pop("timing")
    assert reps[0] == reps[1]
    assert reps[0]["instance_digest"] == cli.digest(triangle().to_json())
