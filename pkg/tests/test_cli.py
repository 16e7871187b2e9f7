import json
import subprocess
import sys
from pathlib import Path

import pytest

from affine_reduction import cli
from affine_reduction.weights import ChiResult

GOLDEN = Path(__file__).parent / "golden"
W0_THETA = '{"t": [-1, -1], "w": [1, 2, 1]}'

GOLDEN_RUNS = {
    "a1_tree.dot": ["tree", "--type", "A1", "--word", "0,1,0", "--format", "dot"],
    "a1_tree.json": ["tree", "--type", "A1", "--word", "0,1,0"],
    "a2_w0_theta_tree.json": ["tree", "--type", "A2", "--element", W0_THETA],
    "a1_dims.json": ["dims", "--type", "A1", "--word", "0,1,0"],
    "a2_w0_theta_classify.json": ["classify", "--type", "A2", "--element", W0_THETA, "--b", "kappa=0,nu=0"],
    "a2_chi_theta.json": ["verify", "chi", "--type", "A2", "--mu", "theta"],
    "a1_superregular_2.json": ["verify", "superregular", "--type", "A1", "--mu", "2"],
}


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tree_dot(capsys):
    code, out, _ = run(capsys, "tree", "--type", "A1", "--word", "0,1,0", "--format", "dot")
    assert code == 0
    assert out.startswith("digraph")
    assert sum(1 for line in out.splitlines() if "label=" in line and "->" not in line) == 3


def test_dims_example(capsys):
    code, out, _ = run(capsys, "dims", "--type", "A1", "--word", "0,1,0", "--b", "kappa=0,nu=0")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "1"
    (row,) = doc["rows"]
    assert (row["d_w"], row["dim"], row["count"]) == (2, 2, 1)


def test_dims_all_classes(capsys):
    code, out, _ = run(capsys, "dims", "--type", "A1", "--word", "0,1,0")
    rows = json.loads(out)["rows"]
    assert code == 0
    assert sorted((r["d_w"], r["dim"], r["count"]) for r in rows) == [(1, 1, 1), (2, 2, 1)]


def test_verify_chi_theta(capsys):
    code, out, _ = run(capsys, "verify", "chi", "--type", "A2", "--mu", "theta")
    assert code == 0
    doc = json.loads(out)
    zero = [r for r in doc["rows"] if r["class"]["nu"] == [[0, 1], [0, 1]]][0]
    assert (zero["engine_count"], zero["dual_mult"]) == (2, 2)


def test_components_n_values(capsys):
    code, out, _ = run(capsys, "components", "--type", "A1", "--word", "0,1,0", "--b", "kappa=0,nu=0",
                       "--n-values", '{"A1": 2}', "--dim-y-gamma", "3")
    assert code == 0
    (row,) = json.loads(out)["rows"]
    assert row["count_alv"] == 2
    assert (row["dim_Y_gamma"], row["dim_Y_w_gamma"]) == (3, 5)


def test_verify_superregular(capsys):
    code, out, _ = run(capsys, "verify", "superregular", "--type", "A2", "--mu", "2rho")
    assert code == 0
    assert json.loads(out)["mismatches"] == 0


def test_verify_invariants_small(capsys):
    code, out, _ = run(capsys, "verify", "invariants", "--type", "A2", "--max-length", "5")
    assert code == 0
    (row,) = json.loads(out)["rows"]
    assert row["failures"] == [] and row["elements"] > 0


def test_table_format(capsys):
    code, out, _ = run(capsys, "tree", "--type", "A1", "--word", "0,1,0", "--format", "table")
    assert code == 0
    assert "one-step" in out and "two-step" in out


@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_golden_files(capsys, name):
    code, _, _ = run(capsys, *GOLDEN_RUNS[name], "--golden", str(GOLDEN / name))
    assert code == 0


def test_golden_mismatch_exit_code(capsys, tmp_path):
    path = tmp_path / "g.json"
    argv = ["dims", "--type", "A1", "--word", "0,1,0"]
    assert run(capsys, *argv, "--golden", str(path), "--update-golden")[0] == 0
    assert run(capsys, *argv, "--golden", str(path))[0] == 0
    path.write_text(path.read_text().replace('"d_w": 2', '"d_w": 3'))
    code, _, err = run(capsys, *argv, "--golden", str(path))
    assert code == 1 and "golden mismatch" in err


def test_byte_stability(capsys):
    argv = ["classify", "--type", "A2", "--element", W0_THETA, "--b", "kappa=0,nu=0"]
    outs = {run(capsys, *argv)[1] for _ in range(3)}
    assert len(outs) == 1


def test_theorem_mismatch_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "chi_check", lambda G, mu, c, strategy: ChiResult(tuple(mu), c, 1, 2))
    code, out, _ = run(capsys, "verify", "chi", "--type", "A1", "--mu", "2")
    assert code == 1
    assert json.loads(out)["ok"] is False


@pytest.mark.parametrize("argv", [
    ["tree", "--type", "Q9", "--word", "0"],
    ["tree", "--type", "A1", "--word", "0,5"],
    ["tree", "--type", "A1"],
    ["tree", "--type", "A1", "--word", "0", "--element", '{"t": [0], "w": []}'],
    ["dims", "--type", "A1", "--word", "0,1,0", "--b", "kappa=0,nu=-1"],
    ["dims", "--type", "A1", "--word", "0,1,0", "--format", "dot"],
    ["verify", "chi", "--type", "A1", "--mu", "-1"],
    ["tree", "--type", "A2", "--word", "0,1,2,1,0", "--node-budget", "1", "--seed", "3"],
])
def test_error_exit_code(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == "" and err.startswith("error:")


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"type": "A1", "word": "0,1,0", "b": "kappa=0,nu=0"}))
    code, out, _ = run(capsys, "dims", "--config", str(cfg))
    assert code == 0 and json.loads(out)["rows"][0]["dim"] == 2
    cfg.write_text(json.dumps({"type": "A1", "colour": "red"}))
    code, _, err = run(capsys, "dims", "--config", str(cfg))
    assert code == 2 and "unknown config keys" in err
    cfg.write_text(json.dumps({"type": "A1", "word": "0", "mu": "2"}))
    assert run(capsys, "dims", "--config", str(cfg))[0] == 2


def test_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"type": "A1", "word": "1"}))
    code, out, _ = run(capsys, "dims", "--config", str(cfg), "--word", "0,1,0")
    assert code == 0 and json.loads(out)["rows"][0]["w"]["label"] == "t(2).s1"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "affine_reduction", "dims", "--type", "A1", "--word", "0,1,0",
                           "--b", "kappa=0,nu=0"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["rows"][0]["count"] == 1


def test_verify_invariants_default_matrix(capsys):
    code, out, _ = run(capsys, "verify", "invariants")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert [r["type"] for r in rows] == ["A1", "A2", "C2", "GL2", "GL3"]
    assert all(r["max_length"] == 8 and r["failures"] == [] for r in rows)
