import json
import math

import numpy as np
import pytest

from cbar.cli import EXIT_INPUT, EXIT_OK, EXIT_TOLERANCE, main
from cbar.io import decode_approximant


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


def write_seq(path, seq):
    path.write_text(json.dumps([[[c.real, c.imag] for c in p] for p in seq]))
    return str(path)


# --- metric ---------------------------------------------------------------------


@pytest.mark.parametrize("p, q, d", [("1", "inf@0", 0.5), ("0", "0", 0.0), ("inf@0", "inf@3.14159265", 2.0)])
def test_metric_examples(capsys, p, q, d):
    code, rec, _ = run_json(capsys, "metric", p, q)
    assert code == EXIT_OK
    assert rec["d"] == pytest.approx(d, abs=1e-12)
    assert rec["chi_le_2d"] is True and rec["schema"] == 1


def test_metric_chordal_value(capsys):
    _, rec, _ = run_json(capsys, "metric", "0", "inf@1")
    assert rec["chi_phi"] == pytest.approx(1.0)
    assert rec["d"] == pytest.approx(1.0)


def test_metric_csv(capsys):
    code, out, _ = run(capsys, "metric", "1", "inf@0", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "key,value"
    assert "d,0.5" in out.splitlines()


def test_metric_parse_error_has_position(capsys):
    code, out, err = run(capsys, "metric", "1+2x", "0")
    assert code == EXIT_INPUT and out == ""
    assert "position 3" in err and "^" in err


# --- approximate ------------------------------------------------------------------


def test_approximate_log1m(capsys, tmp_path):
    code, rec, _ = run_json(capsys, "approximate", "log1m", "--eps", "1e-2", "--out", str(tmp_path))
    assert code == EXIT_OK
    rep = rec["report"]
    assert rec["status"] == "ok" and rep["achieved_error"] < 1e-2
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == ["coefficients.json", "errors.csv", "report.json"]
    Q = decode_approximant(json.loads((tmp_path / "coefficients.json").read_text()))
    assert Q.degree == rep["degree"]
    table = np.loadtxt(tmp_path / "errors.csv", delimiter=",", skiprows=1)
    assert table.shape[1] == 3 and table[:, 2].max() == pytest.approx(rep["achieved_error"], rel=1e-12)
    assert json.loads((tmp_path / "report.json").read_text()) == rec


def test_approximate_square_polynomial(capsys):
    code, rec, _ = run_json(capsys, "approximate", "poly:[0,0,1]", "--eps", "1e-6")
    assert code == EXIT_OK and rec["report"]["degree"] == 2


def test_approximate_reciprocal_on_segment_fails(capsys, tmp_path):
    code, rec, err = run_json(capsys, "approximate", "invx", "--eps", "0.05", "--out", str(tmp_path))
    assert code == EXIT_TOLERANCE
    assert "d-discontinuous" in err and "d-discontinuous" in rec["error"]
    assert rec["error_type"] == "DDiscontinuityError"
    assert (tmp_path / "report.json").exists()


def test_approximate_degree_cap_exit(capsys):
    code, rec, err = run_json(capsys, "approximate", "log1m", "--eps", "1e-3", "--degree-cap", "1000")
    assert code == EXIT_TOLERANCE and rec["status"] == "failed"
    assert "degree cap" in err


@pytest.mark.parametrize("argv", [
    ["approximate", "invx2", "--eps", "0.05"],
    ["approximate", "circle-inf", "--eps", "0.1"],
    ["approximate", "theta-re", "--eps", "0.05"],
    ["approximate", "exp", "--compact", "square", "--eps", "1e-4"],
    ["approximate", "theta-re", "--compact", "square", "--eps", "0.1"],
    ["approximate", "segpoly:[1,0,-2]", "--eps", "1e-6"],
])
def test_approximate_other_domains(capsys, argv):
    code, rec, _ = run_json(capsys, *argv)
    assert code == EXIT_OK and rec["report"]["success"]
    assert rec["report"]["achieved_error"] < float(argv[argv.index("--eps") + 1])


def test_approximate_circle_tan_fails(capsys):
    code, _, err = run(capsys, "approximate", "circle-tan", "--eps", "0.1")
    assert code == EXIT_TOLERANCE and "d-discontinuous" in err


def test_approximate_params(capsys):
    code, rec, _ = run_json(capsys, "approximate", "const", "--params", '{"value": 7}', "--eps", "1e-6")
    assert code == EXIT_OK and rec["report"]["degree"] == 0


@pytest.mark.parametrize("argv, fragment", [
    (["approximate", "nosuch"], "unknown target"),
    (["approximate", "log1m", "--eps", "0"], "--eps"),
    (["approximate", "log1m", "--eps", "nan"], "--eps"),
    (["approximate", "log1m", "--grid-boundary", "0"], "--grid-boundary"),
    (["approximate", "const", "--params", '{"nope": 1}'], "bad parameters"),
    (["approximate", "poly:[1,", "--eps", "0.1"], "bad coefficient list"),
    (["approximate", "circle-id", "--compact", "square"], "--compact"),
    (["classify", "/nonexistent/seq.json"], "No such file"),
])
def test_input_errors_exit_2(capsys, argv, fragment):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_INPUT
    assert fragment in err


def test_bad_flag_values_exit_2(capsys):
    for argv in (["approximate", "log1m", "--eps", "abc"], ["verify", "nosuch"],
                 ["approximate", "log1m", "--params", "[1]"], ["frobnicate"]):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == EXIT_INPUT
    capsys.readouterr()


def test_threads_env_validated(capsys, monkeypatch):
    monkeypatch.setenv("CBAR_THREADS", "zero")
    code, _, err = run(capsys, "metric", "0", "1")
    assert code == EXIT_INPUT and "CBAR_THREADS" in err
    monkeypatch.setenv("CBAR_THREADS", "1")
    assert run(capsys, "metric", "0", "1")[0] == EXIT_OK


def test_reports_are_byte_identical(capsys, tmp_path):
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "approximate", "theta-karg", "--eps", "0.1", "--out", str(tmp_path))
        assert code == EXIT_OK
        outs.append([out] + [(tmp_path / n).read_bytes() for n in ("report.json", "coefficients.json", "errors.csv")])
    assert outs[0] == outs[1]


# --- classify ------------------------------------------------------------------------


def test_classify_np_sequence(capsys, tmp_path):
    p = np.polynomial.polynomial.polypow([2, 1], 6)
    path = write_seq(tmp_path / "np.json", [n * p + 0j for n in range(1, 101)])
    out = tmp_path / "out"
    code, rec, err = run_json(capsys, "classify", path, "--out", str(out))
    assert code == EXIT_OK and rec["verdict"]["kind"] == "InfiniteType"
    assert "InfiniteType" in err and rec["verdict"]["k_constant"]
    theta = np.loadtxt(out / "theta.csv", delimiter=",", skiprows=1)
    z = theta[:, 0] + 1j * theta[:, 1]
    err_theta = np.angle(np.exp(1j * (theta[:, 2] - 6 * np.angle(2 + z))))
    assert np.max(np.abs(err_theta)) < 1e-10
    bins = np.bincount((np.mod(theta[:, 2], 2 * math.pi) // (2 * math.pi / 64)).astype(int), minlength=64)
    assert bins.min() > 0


def test_classify_exponential_sums(capsys, tmp_path):
    c = [1 / math.factorial(k) for k in range(31)]
    path = write_seq(tmp_path / "exp.json", [np.array(c[: n + 1]) + 0j for n in range(1, 31)])
    code, rec, _ = run_json(capsys, "classify", path, "--tol", "1e-6")
    assert code == EXIT_OK and rec["verdict"]["kind"] == "FiniteType"


def test_classify_geometric_sums(capsys, tmp_path):
    path = write_seq(tmp_path / "geo.json", [np.ones(n + 1) + 0j for n in range(1, 201)])
    code, rec, _ = run_json(capsys, "classify", path)
    v = rec["verdict"]
    assert code == EXIT_OK and v["kind"] == "NotUniformlyCauchy"
    assert abs(complex(*v["witness_point"]) - 1) < 0.05


def test_classify_bad_input(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[[1], [2]")
    code, _, err = run(capsys, "classify", str(bad))
    assert code == EXIT_INPUT and "invalid JSON" in err
    short = write_seq(tmp_path / "short.json", [np.ones(1) + 0j] * 2)
    code, _, err = run(capsys, "classify", short)
    assert code == EXIT_INPUT and "at least 3" in err
    ok = write_seq(tmp_path / "ok.json", [np.ones(1) + 0j] * 3)
    code, _, err = run(capsys, "classify", ok, "--grid-angular", "1")
    assert code == EXIT_INPUT and "degenerate" in err


# --- verify ---------------------------------------------------------------------------


@pytest.mark.parametrize("suite", ["metric-axioms", "lipschitz", "meanvalue", "maxprinciple"])
def test_verify_suites_pass(capsys, suite):
    code, rec, _ = run_json(capsys, "verify", suite)
    assert code == EXIT_OK and rec["passed"] is True and rec["suite"] == suite


def test_verify_maxprinciple_values(capsys):
    _, rec, _ = run_json(capsys, "verify", "maxprinciple")
    values = {c["name"]: c["value"] for c in rec["checks"]}
    assert values["boundary sup equals 1/6"] == pytest.approx(1 / 6, abs=1e-12)
    assert values["value at 1/sqrt(2) equals 1/(3+2 sqrt 2)"] == pytest.approx(1 / (3 + 2 * math.sqrt(2)), abs=1e-12)


def test_verify_csv_table(capsys):
    code, out, _ = run(capsys, "verify", "meanvalue", "--format", "csv")
    lines = out.splitlines()
    assert code == EXIT_OK and lines[0] == "check,passed,value,threshold,counterexample"
    assert any(line.startswith("log1m") and ",True," in line for line in lines)


def test_verify_is_deterministic(capsys):
    a = run(capsys, "verify", "metric-axioms", "--seed", "3")[1]
    b = run(capsys, "verify", "metric-axioms", "--seed", "3")[1]
    assert a == b
