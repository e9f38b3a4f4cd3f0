import json
import subprocess
import sys

import numpy as np
import pytest

from detrep.cli import main
from conftest import CUBIC_TEXT, DEGENERATE_CUBIC_TEXT, QUADRIC_TEXT


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in [("quadric", QUADRIC_TEXT), ("cubic", CUBIC_TEXT), ("degenerate", DEGENERATE_CUBIC_TEXT)]:
        p = tmp_path / f"{name}.txt"
        p.write_text(f"# {name}\n{text}\n")
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


def test_rep_trivariate_orthostochastic(capsys, files):
    code, out, _ = run(capsys, "rep", "trivariate", "-f", files["cubic"], "--strategy", "orthostochastic")
    assert code == 0
    obj = json.loads(out)
    assert len(obj["pencils"]) == 2 and max(obj["residuals"]) <= 1e-9


def test_rep_text_output(capsys, files):
    code, out, _ = run(capsys, "rep", "trivariate", "-f", files["cubic"], "--output", "text")
    assert code == 0
    assert "x+33.7014y+36.8578z" in out and "0.607983z" in out


def test_rep_then_check(capsys, files):
    for kind, name in [("quadratic", "quadric"), ("trivariate", "cubic"), ("trivariate", "degenerate")]:
        code, out, _ = run(capsys, "rep", kind, "-f", files[name])
        assert code == 0
        pencil_file = files["dir"] / f"{name}.json"
        pencil_file.write_text(out)
        code, out, _ = run(capsys, "check", "-f", files[name], "-p", str(pencil_file))
        assert code == 0 and "residual" in out
        # a single pencil object works too
        single = files["dir"] / f"{name}_0.json"
        single.write_text(json.dumps(json.loads(pencil_file.read_text())["pencils"][0]))
        assert run(capsys, "check", "-f", files[name], "-p", str(single))[0] == 0


def test_check_mismatch(capsys, files):
    bad = files["dir"] / "bad.json"
    bad.write_text(json.dumps({"size": 1, "hermitian": False, "matrices": [[[1.0]], [[2.0]]]}))
    code, out, _ = run(capsys, "check", "-e", "1 + x + y", "-p", str(bad))
    assert code == 2 and "MISMATCH" in out


def test_exit_codes(capsys, files):
    assert run(capsys, "rep", "quadratic", "-e", "1 + x1^2")[0] == 2
    assert run(capsys, "rep", "trivariate", "-e", "x^3 + 3*x*y^2 + y^3 + z^3")[0] == 3
    assert run(capsys, "rep", "trivariate", "-f", str(files["dir"] / "missing.txt"))[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    code, _, err = run(capsys, "rep", "quadratic", "-e", "1 + x^")
    assert code == 1 and "position" in err
    assert run(capsys, "rep", "trivariate", "-e", "x^4 + y^4 + z^4", "--strategy", "orthostochastic")[0] == 1


def test_rep_quadratic_no_rep_reports_eigenvalues(capsys):
    code, _, err = run(capsys, "rep", "quadratic", "-e", "1 + x1^2")
    assert code == 2 and "W_eigenvalues" in err


def test_gmd(capsys, tmp_path):
    f = tmp_path / "m.json"
    A = [[1.0, 2.0], [2.0, 1.0]]
    B = [[0.0, 1.0], [1.0, 0.0]]
    f.write_text(json.dumps({"matrices": [A, B]}))
    code, out, _ = run(capsys, "gmd", str(f))
    assert code == 0 and json.loads(out)["value"]["re"] == pytest.approx(-4.0)
    f.write_text(json.dumps({"matrices": [A], "multiplicities": [2]}))
    code, out, _ = run(capsys, "gmd", str(f), "--output", "text")
    assert code == 0 and float(out) == pytest.approx(np.linalg.det(A))
    f.write_text("{not json")
    assert run(capsys, "gmd", str(f))[0] == 1


def test_solve_and_determinism(capsys, tmp_path):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"vars": ["x", "y"], "equations": ["x^2 + y^2 - 2", "x - y"]}))
    code, out1, _ = run(capsys, "solve", "-s", str(f), "--seed", "5")
    _, out2, _ = run(capsys, "solve", "-s", str(f), "--seed", "5")
    assert code == 0 and out1 == out2
    obj = json.loads(out1)
    assert obj["pathStats"]["solutions"] == 2


def test_seed_env_fallback(capsys, monkeypatch):
    _, a, _ = run(capsys, "random", "orthogonal", "-n", "3", "--seed", "9")
    monkeypatch.setenv("DETREP_SEED", "9")
    _, b, _ = run(capsys, "random", "orthogonal", "-n", "3")
    assert a == b
    M = np.array(json.loads(a)["matrix"])
    assert np.allclose(M.T @ M, np.eye(3))
    monkeypatch.setenv("DETREP_SEED", "nope")
    assert run(capsys, "random", "psd")[0] == 1


def test_random_kinds(capsys):
    for kind in ("integer-symmetric", "orthogonal", "psd", "unipotent"):
        code, out, _ = run(capsys, "random", kind, "-n", "4", "--seed", "1")
        assert code == 0 and np.array(json.loads(out)["matrix"]).shape == (4, 4)


def test_rep_output_is_byte_identical(capsys, files):
    _, a, _ = run(capsys, "rep", "trivariate", "-f", files["cubic"], "--seed", "2")
    _, b, _ = run(capsys, "rep", "trivariate", "-f", files["cubic"], "--seed", "2")
    assert a == b


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "detrep", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("detrep ")
