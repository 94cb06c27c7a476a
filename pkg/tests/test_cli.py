"""CLI harness: exit codes, file outputs, determinism, suite hooks."""
import csv
import json
import subprocess
import sys

from dstlab.cli import main
from dstlab.verify import run_suites, suite_rmatrix


def _run(args):
    return subprocess.run([sys.executable, "-m", "dstlab.cli", *args],
                          capture_output=True, text=True)


def test_simulate_periodic(tmp_path):
    out = tmp_path / "traj.csv"
    code = main(["simulate", "--n", "6", "--bc", "periodic", "--seed", "42",
                 "--dt", "1e-3", "--t-final", "10", "--out", str(out), "--json"])
    assert code == 0
    rows = list(csv.reader(out.open()))
    header = rows[0]
    assert header[0] == "t"
    assert header[1] == "q1" and "r6" in header
    assert header[-1] == "max_relative_drift"
    assert any(c.startswith("c0") for c in header)
    assert float(rows[-1][-1]) < 1e-8


def test_simulate_open_complex_columns(tmp_path):
    out = tmp_path / "open.csv"
    code = main(["simulate", "--n", "6", "--bc", "open", "--seed", "42",
                 "--t-final", "2", "--out", str(out)])
    assert code == 0
    header = next(csv.reader(out.open()))
    assert "q1_re" in header and "q1_im" in header


def test_simulate_t_final_zero(tmp_path):
    out = tmp_path / "zero.csv"
    code = main(["simulate", "--n", "2", "--t-final", "0", "--seed", "3",
                 "--out", str(out)])
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert len(rows) == 2          # header + single sample
    assert float(rows[1][-1]) == 0.0


def test_simulate_blowup_exit_code(tmp_path):
    out = tmp_path / "blow.csv"
    code = main(["simulate", "--n", "4", "--bc", "periodic", "--scale", "0.5",
                 "--seed", "1", "--t-final", "10", "--out", str(out)])
    assert code == 2


def test_verify_exit_codes(tmp_path):
    rep = tmp_path / "rep.json"
    code = main(["verify", "--suite", "classical", "--seed", "1",
                 "--out", str(rep)])
    assert code == 0
    data = json.loads(rep.read_text())
    assert data["summary"]["failed"] == 0
    assert all("identity_id" in r and "pass" in r for r in data["records"])
    ids = [r["identity_id"] for r in data["records"]]
    assert ids == sorted(ids)


def test_unknown_suite_usage_exit():
    assert main(["verify", "--suite", "nosuch"]) == 64


def test_bad_flag_usage_exit():
    proc = _run(["simulate", "--bc", "invalid"])
    assert proc.returncode == 64


def test_verify_json_byte_identical():
    p1 = _run(["verify", "--suite", "rmatrix", "--seed", "1", "--json"])
    p2 = _run(["verify", "--suite", "rmatrix", "--seed", "1", "--json"])
    assert p1.returncode == 0 and p2.returncode == 0
    assert p1.stdout == p2.stdout


def test_backlund_command(tmp_path):
    rep = tmp_path / "bt.json"
    code = main(["backlund", "--n", "3", "--sigma", "0.3", "--bc", "quasi",
                 "--xi", "2", "--seed", "5", "--out", str(rep)])
    assert code == 0
    data = json.loads(rep.read_text())
    assert data["pass"]
    assert all(c["pass"] for c in data["checks"].values())


def test_backlund_rejects_open():
    assert main(["backlund", "--bc", "open"]) == 64


def test_baxter_command(tmp_path):
    rep = tmp_path / "bx.json"
    code = main(["baxter", "--n", "2", "--m", "1", "--xi", "1", "--eta", "1",
                 "--seed", "7", "--out", str(rep)])
    assert code == 0
    data = json.loads(rep.read_text())
    assert data["checks"]["eigen_membership"]["residual"] < 1e-6
    assert data["checks"]["bethe_residual"]["pass"]


def test_baxter_vacuum(tmp_path):
    rep = tmp_path / "vac.json"
    code = main(["baxter", "--n", "2", "--m", "0", "--seed", "7",
                 "--out", str(rep)])
    assert code == 0
    data = json.loads(rep.read_text())
    assert data["roots"] == []
    assert data["checks"]["eigen_membership"]["residual"] < 1e-12


def test_rmatrix_wrong_k_injection_hook():
    good = {r.identity_id: r.passed for r in suite_rmatrix(seed=1)}
    bad = {r.identity_id: r.passed for r in suite_rmatrix(seed=1, inject_wrong_k=True)}
    assert all(good.values())
    flipped = {k for k, v in bad.items() if not v}
    assert flipped == {"reflection-kminus", "reflection-kplus"}


def test_jobs_parallel_report_stable():
    seq = run_suites("rmatrix", seed=2, jobs=1)
    par = run_suites("rmatrix", seed=2, jobs=4)
    assert seq == par
