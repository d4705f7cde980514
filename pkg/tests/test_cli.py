import csv
import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from glt_lab.cli import main
from glt_lab.errors import InvalidInputError
from glt_lab.io import format_matrix, read_matrix, write_matrix

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=40)
@given(a=arrays(np.float64, st.tuples(st.integers(1, 5), st.integers(1, 5)), elements=finite),
       b=arrays(np.float64, st.tuples(st.integers(1, 5), st.integers(1, 5)), elements=finite))
def test_matrix_csv_roundtrip_exact(tmp_path_factory, a, b):
    d = tmp_path_factory.mktemp("io")
    write_matrix(a, d / "a.csv")
    assert np.array_equal(read_matrix(d / "a.csv"), a)
    if b.shape == a.shape:
        z = a + 1j * b
        write_matrix(z, d / "z.csv")
        assert np.array_equal(read_matrix(d / "z.csv"), z)


def test_read_matrix_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("1,2\n3,4\n")
    with pytest.raises(InvalidInputError):
        read_matrix(p)
    p.write_text("# rows=2 cols=2 dtype=real\n1,2\n3\n")
    with pytest.raises(InvalidInputError):
        read_matrix(p)
    with pytest.raises(InvalidInputError):
        read_matrix(tmp_path / "missing.csv")


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_toeplitz_stdout(capsys):
    code, out, _ = run(["build", "--family", "toeplitz", "--n", "3",
                        "--coeffs", "0:2,1:-1,-1:-1"], capsys)
    assert code == 0
    assert out == format_matrix(np.array([[2.0, -1, 0], [-1, 2, -1], [0, -1, 2]]))


@pytest.mark.parametrize("argv, expected", [
    (["--family", "circulant", "--n", "3", "--values", "2,-1,-1"],
     [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]),
    (["--family", "omega", "--n", "2", "--values", "0,1", "--omega=-1"], [[0, -1], [1, 0]]),
    (["--family", "tau", "--n", "3", "--values", "0,1"], [[0, 1, 0], [1, 0, 1], [0, 1, 0]]),
    (["--family", "hankel", "--n", "2", "--values", "1,2,3"], [[1, 2], [2, 3]]),
    (["--family", "diag", "--n", "2,2", "--func", "x"], np.diag([0.5, 0.5, 1, 1])),
    (["--family", "fd4", "--n", "3", "--func", "1"],
     [[6, -4, 1], [-4, 6, -4], [1, -4, 6]]),
    (["--family", "cw-full", "--n", "1", "--params", '{"gamma": 1, "B": 0.5}'],
     [[-0.5, -0.5], [-0.5, -0.5]]),
    (["--family", "toeplitz", "--n", "2,2", "--coeffs", "0;0:4,1;0:-1,-1;0:-1,0;1:-1,0;-1:-1"],
     [[4, -1, -1, 0], [-1, 4, 0, -1], [-1, 0, 4, -1], [0, -1, -1, 4]]),
])
def test_build_families(tmp_path, capsys, argv, expected):
    out = tmp_path / "m.csv"
    code, _, err = run(["build", *argv, "--out", str(out)], capsys)
    assert code == 0, err
    np.testing.assert_allclose(read_matrix(out), expected, atol=1e-14)


def test_build_roundtrip_exact(tmp_path, capsys):
    from glt_lab.discretizations import bspline_toeplitz, CWParams, curie_weiss_restricted
    out = tmp_path / "b.csv"
    assert run(["build", "--family", "bspline", "--n", "5", "--kind", "cubic_C1",
                "--which", "sum", "--out", str(out)], capsys)[0] == 0
    assert np.array_equal(read_matrix(out), bspline_toeplitz("cubic_C1", "sum", 5))
    assert run(["build", "--family", "cw-restricted", "--n", "39", "--B", "0.5",
                "--out", str(out)], capsys)[0] == 0
    assert np.array_equal(read_matrix(out), curie_weiss_restricted(CWParams(1.0, 0.5, 39)))
    assert run(["build", "--family", "fd4-2d", "--n", "3,2", "--func", "x**2",
                "--out", str(out)], capsys)[0] == 0


def test_usage_errors(tmp_path, capsys):
    assert run(["build", "--family", "toeplitz", "--n", "3", "--bogus", "1"], capsys)[0] == 2
    assert run(["build", "--family", "toeplitz", "--n", "3", "--coef", "0:1"], capsys)[0] == 2
    assert run(["build", "--family", "nope", "--n", "3"], capsys)[0] == 2
    assert run(["build", "--n", "3"], capsys)[0] == 2
    assert run(["build", "--family", "diag", "--n", "3", "--func", "z+1"], capsys)[0] == 2
    assert run(["experiment", "--id", "unknown"], capsys)[0] == 2
    assert run([], capsys)[0] == 2
    code, _, err = run(["mean", "--a", str(tmp_path / "x.csv"), "--b", "y.csv"], capsys)
    assert code == 2 and err


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert main(["build", "--help"]) == 0


def test_mean_and_karcher(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_matrix(4 * np.eye(2), a)
    write_matrix(9 * np.eye(2), b)
    code, _, _ = run(["mean", "--a", str(a), "--b", str(b), "--out", str(tmp_path / "g.csv")],
                     capsys)
    assert code == 0
    np.testing.assert_allclose(read_matrix(tmp_path / "g.csv"), 6 * np.eye(2))
    T = np.array([[2.0, -1.0], [-1.0, 2.0]])
    write_matrix(T, a)
    code, _, err = run(["karcher", "--inputs", f"{a},{a}", "--out", str(tmp_path / "k.csv")],
                       capsys)
    assert code == 0 and "iterations=0" in err
    np.testing.assert_allclose(read_matrix(tmp_path / "k.csv"), T, atol=1e-14)


def test_numerical_failures_exit_3(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_matrix(np.diag([1.0, -1.0]), a)
    write_matrix(np.eye(2), b)
    code, _, err = run(["mean", "--a", str(a), "--b", str(b)], capsys)
    assert code == 3 and "positive definite" in err
    write_matrix(np.diag([1.0, 100.0]), a)
    code, _, _ = run(["karcher", "--inputs", f"{a},{b}", "--max-iter", "1", "--theta", "0.01"],
                     capsys)
    assert code == 3


def test_spectrum_subcommand(tmp_path, capsys):
    m = tmp_path / "t.csv"
    run(["build", "--family", "cw-restricted", "--n", "39", "--out", str(m)], capsys)
    out, ov = tmp_path / "r.csv", tmp_path / "o.csv"
    code, _, err = run(["spectrum", "--matrix", str(m), "--symbol", "cw:1,1", "--out", str(out),
                        "--overlay", str(ov)], capsys)
    assert code == 0, err
    row = list(csv.DictReader(open(out)))[0]
    assert float(row["lambda_min"]) == pytest.approx(-0.99374, abs=1e-5)
    assert len(list(csv.reader(open(ov)))) == 41
    from glt_lab.symbols import sample_symbol, write_grid_symbol
    from glt_lab.discretizations import curie_weiss_symbol
    gfile = tmp_path / "g.csv"
    write_grid_symbol(sample_symbol(curie_weiss_symbol(1.0, 1.0)), gfile)
    code, stdout, _ = run(["spectrum", "--matrix", str(m), "--symbol", str(gfile)], capsys)
    assert code == 0 and stdout.startswith("n,lambda_min")
    assert run(["spectrum", "--matrix", str(m), "--symbol", "nothing"], capsys)[0] == 2


def test_experiment_decay_stdout(capsys):
    code, out, _ = run(["experiment", "--id", "gm2_ex1", "--sizes", "40,80,160"], capsys)
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert float(rows[0]["alpha"]) == pytest.approx(2.0132, abs=0.05)
    assert rows[-1]["alpha"] == ""


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"id": "gm2_ex1", "sizes": [40, 80], "log": "base2"}))
    code, out, _ = run(["experiment", "--config", str(cfg)], capsys)
    assert code == 0 and len(out.splitlines()) == 3
    code, out, _ = run(["experiment", "--config", str(cfg), "--sizes", "20,40,80"], capsys)
    assert code == 0 and len(out.splitlines()) == 4
    cfg.write_text(json.dumps({"id": "gm2_ex1", "colour": "red"}))
    assert run(["experiment", "--config", str(cfg)], capsys)[0] == 2
    cfg.write_text("{not json")
    assert run(["experiment", "--config", str(cfg)], capsys)[0] == 2


def test_experiment_outdir_and_cw(tmp_path, capsys):
    code, _, _ = run(["experiment", "--id", "case1_ex2", "--sizes", "20,40",
                      "--outdir", str(tmp_path / "e")], capsys)
    assert code == 0
    assert {p.name for p in (tmp_path / "e").iterdir()} >= {"reports.csv", "decay_min.csv",
                                                            "extremes.csv", "overlay_20.csv"}
    code, out, _ = run(["cw", "--sizes", "40,80", "--which", "max"], capsys)
    assert code == 0 and out.startswith("n,extreme,tau,alpha,flagged")
    code, out, _ = run(["decay", "--experiment", "cw", "--sizes", "40,80"], capsys)
    assert code == 0 and "-0.99373859" in out


def test_thread_env_validation(monkeypatch, capsys):
    monkeypatch.setenv("GLT_LAB_THREADS", "0")
    assert run(["cw", "--sizes", "40,80"], capsys)[0] == 2
    monkeypatch.setenv("GLT_LAB_THREADS", "2")
    assert run(["cw", "--sizes", "40,80"], capsys)[0] == 0


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "glt_lab.cli", "build", "--family", "toeplitz",
                          "--n", "2", "--coeffs", "0:1"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("# rows=2 cols=2")
    out = subprocess.run([sys.executable, "-m", "glt_lab.cli", "build", "--nope"],
                         capture_output=True, text=True)
    assert out.returncode == 2 and "unrecognized" in out.stderr
