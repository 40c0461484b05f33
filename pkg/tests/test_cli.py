import json
import subprocess
import sys

import numpy as np
import pytest

from cli_cases import CASES, GOLDEN_DIR
from seqspace.basis import basis_element, reconstruct
from seqspace.cli import RunConfig, main, run_command
from seqspace.duality import dual_membership
from seqspace.io import load_sequence, loads
from seqspace.kernel import DTYPE
from seqspace.matrices import build_B_tau, build_B_tau_inv
from seqspace.paranorm import classify, paranorm_g
from seqspace.transforms import backward, forward


def run(*argv):
    return run_command(list(argv))


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_and_repeatable(name):
    code, first = run_command(CASES[name])
    _, second = run_command(CASES[name])
    assert first == second
    assert first == (GOLDEN_DIR / name).read_text(encoding="utf-8")
    assert code == (2 if "growth" in name else 0)


@pytest.mark.parametrize("name", ["inverse_check.json", "build_matrix_btau_inv.json", "dual_check_growth.json"])
def test_thread_cap_does_not_change_artifacts(name, monkeypatch):
    monkeypatch.setenv("SEQSPACE_THREADS", "4")
    assert run_command(CASES[name])[1] == (GOLDEN_DIR / name).read_text(encoding="utf-8")


def test_build_matrix_example():
    code, text = run("build-matrix", "--op", "Btau", "--tau", "0.5", "--weights", "constant:1", "-N", "4", "--format", "csv")
    assert code == 0
    assert DTYPE(text.splitlines()[0].split(",")[0]) == DTYPE(0.5)


def test_build_matrix_json_matches_library():
    _, text = run("build-matrix", "--op", "Btau-inv", "--tau", "0.7", "--weights", "power:1", "-N", "9")
    doc = loads(text)
    assert doc["op"] == "Btau-inv" and doc["dim"] == 9
    np.testing.assert_array_equal(np.array(doc["packed"], dtype=DTYPE), build_B_tau_inv(0.7, np.arange(1, 10), 9).packed)
    for op in ("delta", "delta-inv", "euler-riesz", "euler-riesz-inv", "Btau"):
        assert run("build-matrix", "--op", op, "--tau", "0.5", "-N", "3")[0] == 0


def test_inverse_check_example():
    code, text = run("inverse-check", "--tau", "0.5", "--weights", "constant:1", "-N", "32")
    doc = json.loads(text)
    assert code == 0 and doc["defect"] < 1e-8 and doc["passed"] and doc["delta_passed"]
    assert "roundtrip_max_error" not in doc


def test_inverse_check_seed_controls_vectors():
    a = run("inverse-check", "-N", "16", "--random", "--seed", "1")[1]
    b = run("inverse-check", "-N", "16", "--random", "--seed", "1")[1]
    c = run("inverse-check", "-N", "16", "--random", "--seed", "2")[1]
    assert a == b
    assert json.loads(a)["roundtrip_max_error"] != json.loads(c)["roundtrip_max_error"]


def test_transform_round_trip_through_files(tmp_path):
    x = np.random.default_rng(0).uniform(-1, 1, 24)
    src = tmp_path / "x.csv"
    src.write_text("".join(f"{float(v)!r}\n" for v in x))
    fwd, bwd = tmp_path / "y.json", tmp_path / "x2.json"
    common = ["--tau", "0.5", "--weights", "power:1"]
    assert run("transform", *common, "--direction", "fwd", "--input", str(src), "--out", str(fwd))[0] == 0
    assert run("transform", *common, "--direction", "bwd", "--input", str(fwd), "--out", str(bwd))[0] == 0
    y = np.array(loads(fwd.read_text()), dtype=DTYPE)
    # decimal text is read as the nearest longdouble, not the original float64
    np.testing.assert_array_equal(y, forward(0.5, np.arange(1, 25), load_sequence(src)))
    back = np.array(loads(bwd.read_text()), dtype=DTYPE)
    np.testing.assert_array_equal(back, backward(0.5, np.arange(1, 25), y))
    assert np.abs(back - x).max() <= 1e-7


def test_paranorm_and_classify_match_library():
    N = 12
    p = np.array([0.5, 1.5] * 6)
    doc = loads(run("paranorm", "--tau", "0.3", "--exponents", "alternating:0.5,1.5", "--input", "power:-1", "-N", "12")[1])
    x = 1 / np.arange(1, N + 1, dtype=DTYPE)
    assert doc["g"] == paranorm_g(0.3, np.ones(N), p, x)
    assert doc["M"] == 1.5
    doc = loads(run("classify", "--tau", "0.5", "--input", "constant:1", "-N", "20", "--tol", "1e-3")[1])
    ref = classify(0.5, np.ones(20), None, np.ones(20), tol=1e-3)
    assert doc["verdict"] == ref.verdict.value and doc["tail_sup"] == ref.tail_sup


def test_basis_and_reconstruct_match_library():
    doc = loads(run("basis", "--tau", "0.5", "-k", "2", "-N", "6")[1])
    np.testing.assert_array_equal(np.array(doc["values"], dtype=DTYPE), basis_element(0.5, np.ones(6), 2, 6).values)
    _, csv = run("basis", "--tau", "0.5", "-k", "2", "-N", "6", "--format", "csv")
    assert [DTYPE(v) for v in csv.split()] == doc["values"]
    doc = loads(run("reconstruct", "--tau", "0.5", "--coeffs", "geometric:0.5", "-N", "16", "-s", "4")[1])
    mu = DTYPE(0.5) ** np.arange(1, 17, dtype=DTYPE)
    np.testing.assert_array_equal(np.array(doc["partial"], dtype=DTYPE), reconstruct(0.5, np.ones(16), mu, 4))
    assert abs(doc["residual"] - DTYPE(2) ** -5) <= 1e-9


def test_dual_check_matches_library_and_exit_codes():
    code, text = run("dual-check", "--space", "c0", "--dual", "alpha", "--a", "explicit:0,1,0,0,0,0,0,0", "--B", "2,8")
    ref = dual_membership("c0", "alpha", np.eye(8)[1], 0.0, np.ones(8), B_samples=(2, 8))
    doc = loads(text)
    assert code == 0 and doc["verdict"] == ref.verdict.value == "BoundedOverHorizon"
    np.testing.assert_array_equal(np.array(doc["reports"][1]["quantity_trace"], dtype=DTYPE), ref.reports[1].quantity_trace)
    code, text = run("dual-check", "--space", "linf", "--dual", "beta", "--a", "geometric:4", "-N", "32")
    assert code == 2 and json.loads(text)["verdict"] == "GrowthDetected"


@pytest.mark.parametrize(
    "argv",
    [
        ["build-matrix", "--op", "Btau", "--tau", "-0.5", "-N", "4"],
        ["build-matrix", "--op", "Btau"],
        ["basis", "-k", "9", "-N", "4"],
        ["classify", "--input", "constant:1", "-N", "4", "--horizon", "8"],
        ["classify", "--input", "constant:1", "-N", "4", "--tol", "0"],
        ["transform", "--direction", "fwd", "--input", "powr:1", "-N", "3"],
        ["transform", "--direction", "fwd", "--input", "constant:1", "-N", "3", "--weights", "explicit:1,-1,1"],
        ["dual-check", "--space", "c0", "--dual", "beta", "--a", "constant:1", "-N", "4", "--B", "1,2"],
    ],
)
def test_precondition_errors_exit_1(argv):
    code, text = run_command(argv)
    assert code == 1 and text.startswith("error:")


def test_usage_errors_print_grammar(capsys):
    assert main(["transform", "--direction", "sideways", "--input", "x"]) == 1
    err = capsys.readouterr().err
    assert "invalid choice" in err and "sequence spec grammar" in err
    assert main(["no-such-command"]) == 1


def test_main_writes_stdout_or_file(capsys, tmp_path):
    assert main(["basis", "-k", "1", "-N", "3", "--format", "csv"]) == 0
    assert capsys.readouterr().out == "2e+00\n-4e+00\n6e+00\n"
    out = tmp_path / "b.csv"
    assert main(["basis", "-k", "1", "-N", "3", "--format", "csv", "--out", str(out)]) == 0
    assert capsys.readouterr().out == "" and out.read_text() == "2e+00\n-4e+00\n6e+00\n"
    assert main(["basis", "-k", "5", "-N", "3"]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "seqspace", "build-matrix", "--op", "Btau", "--tau", "0.5", "-N", "4", "--format", "csv"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN_DIR / "build_matrix_btau.csv").read_text()


def test_run_config_validation():
    assert RunConfig(tau=0.5, N=4).weight_sequence(4).Q[-1] == 4
    for bad in (dict(tau=-1), dict(tol=0), dict(N=0), dict(N=4, horizon=5), dict(B_samples=(1.0,))):
        with pytest.raises(ValueError):
            RunConfig(**bad)


def test_cli_B_tau_equals_library_entries():
    _, text = run("build-matrix", "--op", "Btau", "--tau", "1.7", "--weights", "geometric:0.9", "-N", "7")
    ref = build_B_tau(1.7, DTYPE("0.9") ** np.arange(1, 8, dtype=DTYPE), 7)
    assert np.array_equal(np.array(loads(text)["packed"], dtype=DTYPE), ref.packed)
