import json
import os
import subprocess
import sys

import pytest

from qfold.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, run

from conftest import DATA, aut_path


def data(name):
    return os.path.join(DATA, name + ".json")


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_ok(capsys):
    code, out, _ = call(capsys, "cartan", "validate", "--datum", data("g2"))
    assert code == EXIT_OK
    assert json.loads(out)["ok"] is True


def test_validate_fails_on_bad_datum(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"labels": ["1", "2"], "gram": [[2, -1], [-2, 4]]}))
    code, _, err = call(capsys, "cartan", "validate", "--datum", str(bad))
    assert code == EXIT_FAIL and "FAILED" in err
    code, _, _ = call(capsys, "uq", "dim", "--datum", str(bad), "--weight", "1,1")
    assert code == EXIT_INPUT


def test_input_errors(capsys, tmp_path):
    assert call(capsys, "fold", "verify", "--datum", data("a3"), "--aut", aut_path("a3_flip"),
                "--p", "3", "--max-height", "2")[0] == EXIT_INPUT
    assert call(capsys, "fold", "verify", "--datum", data("a3"), "--aut", aut_path("a3_flip"),
                "--p", "4")[0] == EXIT_INPUT
    assert call(capsys, "cartan", "fold", "--datum", data("a3"), "--aut", "2,1,3")[0] == EXIT_INPUT
    assert call(capsys, "cartan", "validate", "--datum", str(tmp_path / "none.json"))[0] == EXIT_INPUT
    assert call(capsys, "nonsense")[0] == EXIT_INPUT
    assert call(capsys, "canon", "compute", "--datum", data("a2"), "--max-height", "99")[0] == EXIT_INPUT
    assert call(capsys, "idents", "verify", "--family", "star-serre", "--params", "n=12,r=2")[0] == EXIT_INPUT
    assert call(capsys, "idents", "verify", "--family", "matrix-serre",
                "--params", "n=2,m=2,N=2,r=2,A=1")[0] == EXIT_INPUT


def test_fold_and_factor(capsys):
    code, out, _ = call(capsys, "cartan", "fold", "--datum", data("d4"), "--aut", aut_path("d4_triality"))
    doc = json.loads(out)
    assert code == EXIT_OK and sorted(doc["orbits"]) == [["1", "3", "4"], ["2"]]
    code, out, _ = call(capsys, "cartan", "fold", "--datum", data("a3"), "--aut", "3,2,1")
    assert code == EXIT_OK and len(json.loads(out)["orbits"]) == 2


def test_uq_commands(capsys):
    code, out, _ = call(capsys, "uq", "dim", "--datum", data("a3"), "--weight", "1,2,1")
    assert code == EXIT_OK
    assert call(capsys, "uq", "dim", "--datum", data("a2"))[0] == EXIT_INPUT
    code, out, _ = call(capsys, "uq", "serre", "--datum", data("g2"))
    assert code == EXIT_OK
    code, out, _ = call(capsys, "uq", "gram", "--datum", data("a2"), "--weight", "1,1")
    assert code == EXIT_OK and json.loads(out)
    code, _, _ = call(capsys, "uq", "kernel", "--datum", data("c2"), "--p", "2", "--max-height", "4")
    assert code == EXIT_OK


def test_canon_commands(capsys, tmp_path):
    code, _, _ = call(capsys, "canon", "verify", "--datum", data("a2"), "--max-height", "4")
    assert code == EXIT_OK
    code, _, _ = call(capsys, "canon", "scan", "--datum", data("a2"), "--weight", "1,1")
    assert code == EXIT_OK
    out_file = tmp_path / "b.json"
    code, _, _ = call(capsys, "canon", "compute", "--datum", data("a2"), "--max-height", "3",
                      "--out-basis", "--out", str(out_file))
    assert code == EXIT_OK and json.loads(out_file.read_text())
    code, out, _ = call(capsys, "canon", "graph", "--datum", data("a2"), "--max-height", "3", "--dot")
    assert code == EXIT_OK and out.startswith("digraph crystal {")


def test_fold_verify_and_xi(capsys):
    code, out, err = call(capsys, "fold", "verify", "--datum", data("a3"), "--aut", aut_path("a3_flip"),
                          "--p", "2", "--max-height", "4")
    assert code == EXIT_OK and json.loads(out)["ok"]
    code, out, _ = call(capsys, "fold", "xi", "--datum", data("a3"), "--aut", aut_path("a3_flip"),
                        "--p", "2", "--max-height", "3")
    assert code == EXIT_OK and json.loads(out)["xi"][0]["map"] == [[0, 0, 1]]


@pytest.mark.parametrize("family,params", [
    ("expansion", "r=3,k=2,l=1"),
    ("alternating-sum", "r=5,t=3,k=7"),
    ("multi-slot", "n=3,r=2,k=3"),
    ("star-serre", "n=4,r=2"),
    ("matrix-serre", "n=2,m=2,N=2,r=2,A=1+1"),
    ("factorization", "N=2,r=2"),
    ("strategy", "n=3,r=2,samples=20"),
])
def test_idents_families(capsys, family, params):
    code, out, _ = call(capsys, "idents", "verify", "--family", family, "--params", params)
    assert code == EXIT_OK, out
    assert json.loads(out)["ok"]


def test_output_is_deterministic(capsys, tmp_path):
    outs = []
    for jobs in ("1", "3"):
        f = tmp_path / f"r{jobs}.json"
        call(capsys, "canon", "verify", "--datum", data("a3"), "--max-height", "4", "--jobs", jobs,
             "--out", str(f))
        outs.append(f.read_bytes())
    assert outs[0] == outs[1]


def test_cache_dir_from_environment(tmp_path):
    env = dict(os.environ, QFOLD_CACHE_DIR=str(tmp_path))
    cmd = [sys.executable, "-m", "qfold.cli", "canon", "compute", "--datum", data("a2"),
           "--max-height", "3"]
    res = subprocess.run(cmd, env=env, capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert list(tmp_path.rglob("*.json"))
    again = subprocess.run(cmd, env=env, capture_output=True, text=True)
    assert again.stdout == res.stdout


def test_star_uq_family(capsys):
    code, out, _ = call(capsys, "idents", "verify", "--family", "star-uq", "--datum", data("d4"),
                        "--params", "eta=2,eta2=1+3+4")
    assert code == EXIT_OK and json.loads(out)["ok"]
    code, out, _ = call(capsys, "idents", "verify", "--family", "star-uq", "--datum", data("a3"),
                        "--aut", aut_path("a3_flip"), "--p", "2", "--params", "eta=1+3,eta2=2")
    assert code == EXIT_OK and len(json.loads(out)["checks"]) == 2


def test_fold_verify_order_six_chain(capsys, tmp_path):
    g = [[2 if i == j else 0 for j in range(7)] for i in range(7)]
    for a, b in [(0, 1), (1, 2), (3, 4), (4, 5), (4, 6)]:
        g[a][b] = g[b][a] = -1
    f = tmp_path / "a3d4.json"
    f.write_text(json.dumps({"labels": [str(k) for k in range(1, 8)], "gram": g}))
    code, out, _ = call(capsys, "fold", "verify", "--datum", str(f), "--aut", "3,2,1,6,5,7,4",
                        "--p", "2", "--max-height", "3")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["ok"]
    names = {c["check"] for c in doc["checks"]}
    assert "composite matching is a bijection onto the final basis" in names
