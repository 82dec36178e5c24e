import io
import json

import pytest

from chabauty_bounds import cli, graphs
from chabauty_bounds.bounds import n_g_1
from chabauty_bounds.graphs import StableStats


def run(*argv):
    out = io.StringIO()
    code = cli.main([str(a) for a in argv], out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path, sample_annulus, cubic_disc):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)
    theta = {"vertices": [{"id": "a", "weight": 0}, {"id": "b", "weight": 0}],
             "edges": [{"id": f"e{i}", "ends": ["a", "b"], "length": "1"} for i in range(3)]}
    bad = json.loads(json.dumps(theta))
    bad["edges"][1]["length"] = "0"
    return {
        "sample_annulus": write("sample_annulus.json", sample_annulus.to_json()),
        "disc": write("disc.json", cubic_disc.to_json()),
        "omega": write("omega.json", {"p": 3, "mode": "annulus", "modulus": "2",
                                      "terms": [{"n": -1, "val": "0"}]}),
        "theta": write("theta.json", theta),
        "tent": write("tent.json", {"vertex_values": {"a": "0", "b": "0"},
                                    "edges": {"e0": [{"pos": "1/2", "val": "1/2"}]}}),
        "bad": write("bad.json", bad),
        "dir": tmp_path,
    }


def test_np_examples():
    assert run("np", "--p", 3, "--r", 1, "--n0", 3) == (0, "5\n")
    assert run("np", "--p", 2, "--r", "1/100", "--n0", 0) == (0, "901\n")
    code, text = run("np", "--p", 2, "--r", "1/100", "--n0", 0, "--show-violations", "--check-naive",
                     "--format", "json")
    rec = json.loads(text)
    assert code == 0 and rec["N_p"] == rec["naive"] == 901
    assert rec["violations"][-1] == {"block": 9, "largest_violator": 900}


def test_np_precondition_exit():
    assert run("np", "--p", 3, "--r", 0, "--n0", 1)[0] == 3
    assert run("np", "--p", 4, "--r", 1, "--n0", 1)[0] == 3


@pytest.mark.parametrize("argv", [
    ["np", "--p", "3", "--r", "0.5", "--n0", "1"],
    ["np", "--p", "3", "--r", "1"],
    ["bound", "rational", "--q", "3"],
])
def test_parse_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv, io.StringIO())
    assert exc.value.code == 2


def test_bound_rational():
    code, text = run("bound", "rational", "--q", 3, "--e", 1, "--p", 3, "--g", 3, "--format", "json")
    assert code == 0 and json.loads(text)["final_bound"] == 343
    code, text = run("bound", "rational", "--q", 3, "--e", 1, "--p", 3, "--g", 3,
                     "--use-remark-bound", "--format", "json")
    assert json.loads(text)["final_bound"] == 490 == n_g_1(3)
    code, text = run("bound", "rational", "--q", 3, "--e", 1, "--p", 3, "--g", 3, "--format", "csv")
    header, row = text.strip().splitlines()
    assert header.split(",")[-1] == "final_bound" and row.endswith(",343")
    assert run("bound", "rational", "--q", 3, "--e", 1, "--p", 3, "--g", 2)[0] == 3


def test_bound_others():
    code, text = run("bound", "torsion", "--g", 2, "--p", 3, "--e", 1, "--variant", 1, "--format", "json")
    assert code == 0 and json.loads(text)["final_bound"] == 113817600120
    for argv in (["torsion-intro", "--g", 4, "--d", 1], ["wide-open", "--deg", 3, "--r", 1, "--g", 2, "--p", 3],
                 ["annulus", "--r", 1, "--g", 2, "--p", 3]):
        assert run("bound", *argv)[0] == 0
    assert json.loads(run("bound", "annulus", "--r", 1, "--g", 2, "--p", 3, "--format", "json")[1])["final_bound"] == 10


def test_graph_check(files):
    code, text = run("graph", "check", "--file", files["theta"], "--function", files["tent"], "--format", "json")
    rec = json.loads(text)
    assert code == 0
    assert rec["is_canonical_section"] and rec["max_abs_slope"] == 1 and rec["slope_bound_verdict"] == "holds"
    assert run("graph", "check", "--file", files["bad"])[0] == 2
    assert run("graph", "check", "--file", str(files["dir"] / "missing.json"))[0] == 2


def test_graph_enumerate_and_stats(files):
    code, text = run("graph", "enumerate", "--genus", 2)
    lines = text.strip().splitlines()
    assert code == 0 and len(lines) == 7
    path = files["dir"] / "g2.jsonl"
    path.write_text(text)
    code, text = run("graph", "stats", "--file", path, "--format", "json")
    assert code == 0 and len(json.loads(text)) == 7
    assert run("graph", "enumerate", "--genus", 9)[0] == 3


def test_invariant_breach_exit(files, monkeypatch):
    monkeypatch.setattr(graphs, "stable_stats_check", lambda G: StableStats(2, 9, 9, 9, 9))
    assert run("graph", "stats", "--file", files["theta"])[0] == 4


def test_newton_commands(files):
    code, text = run("newton", "slopes", "--file", files["sample_annulus"], "--r", "1/2", "--format", "json")
    rec = json.loads(text)
    assert code == 0 and rec["F"] == "-1" and rec["slope_toward_inner"] == 4
    rec = json.loads(run("newton", "zeros", "--file", files["disc"], "--r", "1/3", "--format", "json")[1])
    assert rec["zeros"] == 3 and rec["disc_bound"] == 5
    rec = json.loads(run("newton", "verify-annulus", "--file", files["omega"], "--r", 1, "--format", "json")[1])
    assert rec["holds"]
    assert run("newton", "slopes", "--file", files["sample_annulus"], "--r", 1)[0] == 3
    assert run("newton", "slopes", "--file", files["theta"], "--r", 1)[0] == 2


def test_oracle_commands():
    code, text = run("oracle", "enumerate", "--genus", 2, "--format", "json")
    assert code == 0 and json.loads(text)["agree"]
    code, text = run("oracle", "np", "--max-den", 5, "--format", "json")
    assert code == 0 and json.loads(text)["mismatches"] == 0


@pytest.mark.parametrize("argv", [
    ["bound", "torsion", "--g", "2", "--p", "3", "--e", "1", "--format", "json"],
    ["np", "--p", "2", "--r", "1/100", "--n0", "0", "--show-violations", "--format", "json"],
    ["graph", "enumerate", "--genus", "3"],
])
def test_json_determinism(argv):
    assert run(*argv) == run(*argv)
