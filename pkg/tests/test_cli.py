from __future__ import annotations

import json
import subprocess
import sys

import pytest

from compactpsp.cli import main


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def k3_file(tmp_path):
    return write(tmp_path / "g.json", {"n": 3, "edges": [[1, 2], [2, 3], [1, 3]]})


@pytest.fixture
def path_file(tmp_path):
    return write(tmp_path / "p.json", {"n": 3, "edges": [[1, 2], [2, 3]]})


def test_version_lists_gadget_formulas(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert "paper: N = 2 * ceil(log2(n + 1)) + 2" in out
    assert "tight: smallest even N with C(N, N/2) / 2 >= n" in out


def test_gen_iss(tmp_path, capsys):
    out = tmp_path / "iss.json"
    assert main(["gen-iss", "--n-elems", "4", "--check", "--out", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert obj["pair"]["s_a"]["sets"] == [[1, 2], [1, 3], [1, 4]]
    assert obj["check"]["ok"]
    assert main(["gen-iss", "--n-elems", "4"]) == 0
    assert "check" not in json.loads(capsys.readouterr().out)


def test_gen_iss_odd(capsys):
    assert main(["gen-iss", "--n-elems", "5"]) == 2
    assert "even" in capsys.readouterr().err


def test_reduce_manifest(tmp_path, k3_file):
    out = tmp_path / "red"
    assert main(["reduce", "--graph", k3_file, "--pattern", "k3", "--gadget", "paper",
                 "--out", str(out)]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    for key, value in {"n": 3, "m": 3, "k": 3, "l": 3, "N": 6, "r": 6, "universe_size": 54,
                       "set_count": 27, "v_sets": 9, "e_sets": 18}.items():
        assert manifest[key] == value
    assert manifest["ratio"] > 0
    assert "seed" in manifest
    assert len(manifest["instances"]) == 6
    assert len(list(out.glob("instance_*.json"))) == 6


def test_reduce_single_ordering(tmp_path, k3_file):
    out = tmp_path / "red"
    assert main(["reduce", "--graph", k3_file, "--pattern", "k3", "--ordering", "3",
                 "--target", "vecsum", "--out", str(out)]) == 0
    files = sorted(p.name for p in out.glob("instance_*.json"))
    assert files == ["instance_00003.json"]
    assert main(["reduce", "--graph", k3_file, "--pattern", "k3", "--ordering", "6",
                 "--out", str(out)]) == 2


@pytest.mark.parametrize(
    "target, problem, algo",
    [("psp", "psp", "bnb"), ("xcover", "xcover", "bnb"), ("vecsum", "vecsum", "enum")],
)
def test_reduce_then_solve(tmp_path, k3_file, path_file, capsys, target, problem, algo):
    yes, no = tmp_path / "yes", tmp_path / "no"
    main(["reduce", "--graph", k3_file, "--pattern", "k3", "--target", target, "--out", str(yes)])
    main(["reduce", "--graph", path_file, "--pattern", "k3", "--target", target, "--out", str(no)])
    capsys.readouterr()
    wit = tmp_path / "w.json"
    assert main(["solve", problem, "--in", str(yes / "instance_00000.json"), "--algo", algo,
                 "--witness", str(wit)]) == 0
    assert json.loads(capsys.readouterr().out)["found"] is True
    assert len(json.loads(wit.read_text())["indices"]) == 6
    assert main(["solve", problem, "--in", str(no / "instance_00000.json"), "--algo", algo]) == 1


def test_solve_dp_and_bfs(tmp_path, capsys):
    inst = write(tmp_path / "i.json", {"universe_size": 2, "sets": [[1], [2], [1, 2]], "r": 2})
    wit = tmp_path / "w.json"
    assert main(["solve", "psp", "--in", inst, "--algo", "dp", "--witness", str(wit)]) == 0
    assert json.loads(capsys.readouterr().out)["max_size"] == 2
    assert json.loads(wit.read_text()) == {"indices": [0, 1]}
    assert main(["solve", "psp", "--in", inst, "--algo", "dp", "--r", "3"]) == 1
    assert main(["solve", "xcover", "--in", inst, "--algo", "bfs", "--r", "1"]) == 0
    capsys.readouterr()
    assert main(["solve", "xcover", "--in", inst, "--algo", "bfs", "--r", "0"]) == 1
    assert json.loads(capsys.readouterr().out)["min_size"] == 1


def test_solve_budget_and_bad_algo(tmp_path, k3_file, capsys):
    out = tmp_path / "red"
    main(["reduce", "--graph", k3_file, "--pattern", "k3", "--out", str(out)])
    inst = str(out / "instance_00000.json")
    assert main(["solve", "psp", "--in", inst, "--algo", "dp"]) == 2
    assert "budget" in capsys.readouterr().err
    assert main(["solve", "psp", "--in", inst, "--algo", "bnb", "--max-nodes", "2"]) == 2
    assert main(["solve", "psp", "--in", inst, "--algo", "bfs"]) == 2
    assert main(["solve", "psp", "--in", str(tmp_path / "missing.json"), "--algo", "bnb"]) == 2


def test_solve_subiso(tmp_path, capsys):
    inst = write(tmp_path / "s.json", {"g": {"n": 4, "edges": [[1, 2], [2, 3], [3, 4], [1, 4]]},
                                       "h": {"n": 3, "edges": [[1, 2], [2, 3]]}})
    wit = tmp_path / "phi.json"
    assert main(["solve", "subiso", "--in", inst, "--algo", "enum", "--witness", str(wit)]) == 0
    assert json.loads(wit.read_text()) == {"map": [1, 2, 3]}


def test_verify(tmp_path, capsys):
    rep = tmp_path / "rep.json"
    assert main(["verify", "--n-min", "3", "--n-max", "4", "--pattern", "k3", "--report",
                 str(rep)]) == 0
    obj = json.loads(rep.read_text())
    assert obj["disagreements"] == 0 and obj["monotone_violations"] == 0
    assert len(obj["reports"]) == 8 + 64
    assert "seed" in obj
    assert "n=4: 64 hosts, 23 yes, 0 disagreements" in capsys.readouterr().err


def test_verify_deterministic_across_jobs(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--n-min", "4", "--n-max", "4", "--pattern", "p3"]
    assert main(args + ["--report", str(a)]) == 0
    assert main(args + ["--report", str(b), "--jobs", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_random(tmp_path):
    rep = tmp_path / "r.json"
    assert main(["verify", "--n-min", "5", "--n-max", "5", "--pattern", "k3", "--random", "3",
                 "--seed", "9", "--report", str(rep)]) == 0
    assert json.loads(rep.read_text())["seed"] == 9


def test_bench(tmp_path, capsys):
    out = tmp_path / "b.csv"
    assert main(["bench", "--universe", "8,9", "--sets", "16", "--r", "2", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "universe,sets,r,dp_ms,bnb_ms,agree"
    assert len(lines) == 3 and all(line.endswith(",1") for line in lines[1:])
    assert json.loads(out.with_suffix(".meta.json").read_text())["seed"] is not None
    assert "slope" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "compactpsp", "gen-iss", "--n-elems", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pair"]["m_sets"] == 1
