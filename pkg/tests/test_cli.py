import io
import json
import subprocess
import sys

import pytest

from stability_lab import __version__
from stability_lab.cli import run
from stability_lab.geometry import save_manifold, wu_bundle

WU = ["--family", "wu", "--d", "1", "--weights", "1,3"]


def call(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_analyze_j_table_row():
    code, out, _ = call(["analyze-j", *WU, "--alpha", "1,1", "--beta", "1,1/5"])
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"]["dest"] == ["C"]
    assert doc["tool"]["version"] == __version__
    assert doc["manifold"]["sha256"] == wu_bundle(1, (1, 3)).sha256()
    assert doc["completeness"] == "certified"


def test_sweep_walls():
    code, out, _ = call(["sweep", *WU, "--alpha", "1,1", "--beta0", "1,1/20", "--beta1", "1,1/2", "--var", "beta"])
    assert code == 0
    assert json.loads(out)["report"]["walls"] == ["5/26", "2/9"]


def test_factorize_trivial():
    code, out, _ = call(["factorize", "--n", "3", "--coeffs", "0,0"])
    assert code == 0
    doc = json.loads(out)
    assert [f["r_p"]["exact"] for f in doc["factors"]] == ["0", "0"]


def test_determinism():
    argv = ["analyze-dhym", *WU, "--alpha", "1,1", "--beta", "1,1/3"]
    assert call(argv)[1] == call(argv)[1]
    argv = ["oracle-sweep", *WU, "--alpha", "1,1", "--beta0", "1,1/20", "--beta1", "1,1/2", "--grid", "50"]
    assert call(argv)[1] == call(argv)[1]


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        [],
        ["analyze-j", *WU, "--alpha", "1,x", "--beta", "1,1"],
        ["analyze-j", *WU, "--alpha", "1,1,1", "--beta", "1,1"],
        ["analyze-j", "--alpha", "1,1", "--beta", "1,1"],
        ["analyze-gma", *WU, "--alpha", "1,1", "--beta", "1,1", "--coeffs", "1"],
        ["analyze-gma", *WU, "--alpha", "1,1", "--beta", "1,1", "--coeffs", "1,-1"],
        ["factorize", "--n", "4", "--coeffs", "1,1"],
        ["analyze-dhym", *WU, "--alpha", "1,1", "--beta", "1,1", "--phi-hat", "4"],
        ["sweep", *WU, "--alpha", "1,1", "--beta0", "1,0", "--beta1", "1,1"],
        ["analyze-j", "--family", "blowup", "--alpha", "1,-1/2", "--beta", "1,-1/4"],
    ],
)
def test_input_errors_exit_2(argv):
    code, _, err = call(argv)
    assert code == 2
    assert "error" in err


def test_schema_violation(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "x"}')
    assert call(["analyze-j", "--manifold", str(bad), "--alpha", "1,1", "--beta", "1,1"])[0] == 2
    assert call(["analyze-j", "--manifold", str(tmp_path / "missing.json"), "--alpha", "1,1", "--beta", "1,1"])[0] == 2


def test_manifold_file(tmp_path):
    f = tmp_path / "wu.json"
    f.write_text(json.dumps(save_manifold(wu_bundle(1, (1, 3)))))
    code, out, _ = call(["analyze-j", "--manifold", str(f), "--alpha", "1,1", "--beta", "1,1/5"])
    assert code == 0 and json.loads(out)["verdict"]["dest"] == ["C"]


def test_strict_exit_3():
    argv = ["analyze-j", *WU, "--alpha", "1,1", "--beta", "1,1/20"]
    assert call(argv)[0] == 0
    assert call([*argv, "--strict"])[0] == 3
    assert call(["analyze-j", *WU, "--alpha", "1,1", "--beta", "1,1/5", "--strict"])[0] == 0
    argv = ["analyze-dhym", "--family", "blowup", "--n", "3", "--alpha", "1,-1/2", "--beta", "1,-1/4", "--strict"]
    assert call(argv)[0] == 3


def test_gma_and_cones_reports():
    code, out, _ = call(["analyze-gma", *WU, "--alpha", "1,1", "--beta", "1,1/10", "--coeffs", "1,1"])
    doc = json.loads(out)
    assert code == 0 and doc["verdict"]["factors"][0]["r_p"]["exact"] == "1"
    code, out, _ = call(["cones", *WU, "--alpha", "1,1", "--beta", "1,2"])
    doc = json.loads(out)
    assert doc["projection"]["eta"] == ["1", "0"] and doc["projection"]["big"] == "boundary"


def test_dhym_computes_angle():
    code, out, _ = call(["analyze-dhym", *WU, "--alpha", "1,1", "--beta", "1,1"])
    doc = json.loads(out)
    assert code == 0 and doc["angle"]["Z"] == {"re": "-14", "im": "14"}


def test_csv_out_and_plot(tmp_path):
    out_path, plot = tmp_path / "r.csv", tmp_path / "p.json"
    argv = ["sweep", *WU, "--alpha", "1,1", "--beta0", "1,1/20", "--beta1", "1,1/2", "--format", "csv",
            "--out", str(out_path), "--plot-data", str(plot)]
    code, out, _ = call(argv)
    assert code == 0 and out == ""
    assert out_path.read_text().splitlines()[0].startswith("t_lo")
    assert json.loads(plot.read_text())["wall_values"] == ["5/26", "2/9"]


def test_coefficient_sweep():
    code, out, _ = call(["sweep", *WU, "--var", "coeffs", "--alpha", "1,1", "--beta", "1,1/10", "--c0", "1/2,0", "--c1", "2,0"])
    doc = json.loads(out)
    assert code == 0
    assert [c[0] for c in doc["params"]["wall_coeffs"]] == ["1", "5/4", "25/14"]


def test_oracle_sweep_agrees():
    code, out, _ = call(["oracle-sweep", *WU, "--alpha", "1,1", "--alpha", "2,2", "--beta0", "1,1/20", "--beta1", "1,1/2", "--grid", "100"])
    doc = json.loads(out)
    assert code == 0 and doc["agree"] and doc["mismatches"] == []


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "stability_lab", "factorize", "--coeffs", "1"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["n"] == 2
