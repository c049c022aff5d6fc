import json
import subprocess
import sys

import numpy as np
import pytest

from logahoric import jsonio
from logahoric.instances import random_orbit, scrambled_connection
from logahoric.jsonio import encode_connection, encode_matrix, encode_weight
from logahoric.liecore import GroupSpec


def run_cli(*args, **kw):
    return subprocess.run([sys.executable, "-m", "logahoric.cli", *args],
                          capture_output=True, text=True, **kw)


def test_classify_counts():
    out = run_cli("classify", "--type", "E", "--rank", "8", "--affine")
    assert out.returncode == 0
    rec = json.loads(out.stdout.splitlines()[0])
    assert rec["parahoric_classes"] == 511
    assert rec["parabolic_classes"] == 256


def test_classify_tables_include_a2_in_g2():
    out = run_cli("classify", "--type", "G", "--rank", "2", "--affine", "--tables")
    assert out.returncode == 0
    rows = [json.loads(line) for line in out.stdout.splitlines()[1:]]
    assert any(r["levi_blocks"] == [["A", 2]] for r in rows)


def test_malformed_input_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("definitely not json")
    out = run_cli("normalize", "--in", str(bad), "--theta", "0", "--tau", "0")
    assert out.returncode == 2


def test_unknown_command_exit_2():
    out = run_cli("frobnicate")
    assert out.returncode == 2


def test_normalize_and_monodromy(tmp_path):
    rng = np.random.default_rng(7)
    orb = random_orbit(rng, GroupSpec("GL", 2))
    a, _, _ = scrambled_connection(rng, orb)
    path = tmp_path / "conn.json"
    path.write_text(jsonio.dumps(encode_connection(a)))
    theta = ",".join(str(x) for x in orb.theta.entries)
    tau = ",".join(str(x) for x in orb.tau.entries)
    sigma = ",".join(f"{s.re}:{s.im}" for s in orb.sigma)
    out = run_cli("normalize", "--in", str(path), "--theta", theta,
                  "--tau", tau, "--sigma", sigma)
    assert out.returncode == 0, out.stderr
    rec = json.loads(out.stdout.splitlines()[0])
    assert "levels" in rec and "retained" in rec
    out2 = run_cli("monodromy", "--in", str(path), "--theta", theta,
                   "--tau", tau, "--sigma", sigma, "--oracle")
    assert out2.returncode == 0, out2.stderr
    rec2 = json.loads(out2.stdout.splitlines()[1])
    assert rec2["oracle_max_error"] <= 1e-6


def test_rh_roundtrip(tmp_path):
    rng = np.random.default_rng(7)
    orb = random_orbit(rng, GroupSpec("GL", 2))
    a, _, _ = scrambled_connection(rng, orb)
    path = tmp_path / "rh.json"
    path.write_text(jsonio.dumps({"connection": encode_connection(a),
                                  "theta": encode_weight(orb.theta),
                                  "orbit_rep": encode_matrix(orb.orbit_rep())}))
    out = run_cli("rh", "roundtrip", "--in", str(path))
    assert out.returncode == 0, out.stderr
    rec = json.loads(out.stdout.splitlines()[-1])
    assert rec["roundtrip_max_error"] <= 1e-8


def test_apartment_act_and_stab(tmp_path):
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"w": [1, 0], "lambda": [0, 0]}))
    out = run_cli("apartment", "act", "--theta", "1/2,0", "--in", str(path))
    assert out.returncode == 0
    assert json.loads(out.stdout)["theta_out"] == ["0", "1/2"]
    out2 = run_cli("apartment", "stab", "--theta", "1/2,0", "--in", str(path))
    assert json.loads(out2.stdout)["stabilizes"] is False
    out3 = run_cli("apartment", "stab", "--theta", "1/2,1/2", "--in", str(path))
    assert json.loads(out3.stdout)["stabilizes"] is True


def test_hodge_table_deterministic():
    args = ("hodge-table", "--theta", "1/4,1", "--tau", "2/3,-1/2",
            "--sigma", "0:-1/4,0:1/2")
    out1, out2 = run_cli(*args), run_cli(*args)
    assert out1.returncode == 0
    assert out1.stdout == out2.stdout  # byte-identical report
    rows = [json.loads(line) for line in out1.stdout.splitlines()]
    assert [r["realization"] for r in rows] == ["dolbeault", "derham", "betti"]


def test_qh_check_small():
    out = run_cli("qh-check", "--group", "SL2", "--points", "5", "--seed", "3")
    assert out.returncode == 0, out.stderr
    rec = json.loads(out.stdout)
    assert rec["qh2_max_residual"] < 1e-8
    assert all(e["kernel"] == e["dim_u"] for e in rec["qh3"])
