"""End-to-end checks of the command-line tool (path via SPDCFILM_CLI)."""

import json
import os
import subprocess

import pytest

CLI = os.environ.get("SPDCFILM_CLI")

pytestmark = pytest.mark.skipif(not CLI, reason="SPDCFILM_CLI not set")


def run(*args, cwd):
    return subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)


def test_scenarios_ratio(tmp_path):
    r = run("scenarios", "--json", "--out", str(tmp_path), cwd=tmp_path)
    assert r.returncode == 0, r.stderr
    summary = json.loads(r.stdout)
    assert abs(summary["ratio"] - 2.0) <= 0.1


def test_coherence(tmp_path):
    r = run("coherence", "--pump-nm", "775", "--json", cwd=tmp_path)
    assert r.returncode == 0, r.stderr
    summary = json.loads(r.stdout)
    assert abs(summary["coherence_length_um"] - 3.5) <= 0.7


def test_state_json(tmp_path):
    r = run("state", "--theta", "0", "--json", cwd=tmp_path)
    assert r.returncode == 0, r.stderr
    summary = json.loads(r.stdout)
    assert summary["bell_fidelities"]["phi-"] == pytest.approx(1.0)
    assert summary["bell_fidelities"]["psi+"] == pytest.approx(0.0, abs=1e-12)


def test_missing_counts_file_is_a_validation_error(tmp_path):
    r = run("tomo", "--counts", "missing.csv", cwd=tmp_path)
    assert r.returncode == 1
    assert "missing.csv" in r.stderr


def test_tomo_from_counts_csv(tmp_path):
    sim = run("tomo", "--theta", "0", "--seed", "5", "--json", "--out",
              str(tmp_path), cwd=tmp_path)
    assert sim.returncode == 0, sim.stderr
    assert json.loads(sim.stdout)["fidelity"] >= 0.99

    counts = tmp_path / "counts.csv"
    lines = ["basis_1,basis_2,counts,seconds"]
    # phi+ expectations: perfect HH/VV correlation, none across
    table = {
        ("H", "H"): 50000, ("H", "V"): 0, ("V", "V"): 50000, ("V", "H"): 0,
        ("R", "H"): 25000, ("R", "V"): 25000, ("D", "V"): 25000, ("D", "H"): 25000,
        ("D", "R"): 25000, ("D", "D"): 50000, ("R", "D"): 25000, ("H", "D"): 25000,
        ("V", "D"): 25000, ("V", "L"): 25000, ("H", "L"): 25000, ("R", "L"): 50000,
    }
    for (b1, b2), n in table.items():
        lines.append(f"{b1},{b2},{n},1.0")
    counts.write_text("\n".join(lines) + "\n")

    r = run("tomo", "--counts", str(counts), "--json", "--out", str(tmp_path),
            cwd=tmp_path)
    assert r.returncode == 0, r.stderr
    result = json.loads(r.stdout)
    assert result["concurrence"] >= 0.95
    assert (tmp_path / "tomography.json").exists()


def test_bandwidth_summary(tmp_path):
    r = run("bandwidth", "--json", "--out", str(tmp_path), cwd=tmp_path)
    assert r.returncode == 0, r.stderr
    summary = json.loads(r.stdout)
    assert abs(summary["bandwidth_thz"] - 100.0) <= 30.0
    assert (tmp_path / "bandwidth_spectrum.csv").exists()


def test_g2_deterministic_outputs(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    for d in (a, b):
        d.mkdir()
        r = run("g2", "--seed", "42", "--json", "--out", str(d), cwd=tmp_path)
        assert r.returncode == 0, r.stderr
    assert (a / "histogram.csv").read_bytes() == (b / "histogram.csv").read_bytes()
    assert (a / "g2.csv").read_bytes() == (b / "g2.csv").read_bytes()


def test_shg_csv(tmp_path):
    r = run("shg", "--json", "--out", str(tmp_path), cwd=tmp_path)
    assert r.returncode == 0, r.stderr
    body = (tmp_path / "shg.csv").read_text().splitlines()
    assert body[0] == "theta_rad,parallel,perpendicular"
    assert len(body) > 100
