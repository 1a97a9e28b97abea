"""Black-box CLI tests: exit codes, output schemas, determinism."""

import json
import math
import os
import subprocess
import sys

import pytest

PKG_ROOT = os.path.join(os.path.dirname(__file__), os.pardir, "src")


def run_cli(*argv, env_extra=None):
    env = dict(os.environ)
    env["PYTHONPATH"] = PKG_ROOT + os.pathsep + env.get("PYTHONPATH", "")
    if env_extra:
        env.update(env_extra)
    return subprocess.run([sys.executable, "-m", "toruspt", *argv],
                          capture_output=True, text=True, env=env)


def test_potential_contains_midpoint_value():
    res = run_cli("potential", "--case", "pt", "--A", "-2", "--B", "0.5",
                  "--n-points", "101")
    assert res.returncode == 0
    lines = res.stdout.strip().split("\n")
    assert lines[0] == "x,V_minus,V_plus"
    best = min(lines[1:],
               key=lambda ln: abs(float(ln.split(",")[0]) - math.pi / 2.0))
    assert float(best.split(",")[1]) == pytest.approx(-1.75, abs=1e-9)


def test_potential_rational_cancellation_via_cli():
    res_pt = run_cli("potential", "--case", "pt", "--A", "2", "--B", "-1.5",
                     "--x-lo", "0.1", "--x-hi", "3.0", "--n-points", "101")
    res_rs = run_cli("potential", "--case", "rational", "--a", "2", "--B",
                     "-1.5", "--branch", "-", "--x-lo", "0.1", "--x-hi", "3.0",
                     "--n-points", "101")
    assert res_pt.returncode == 0 and res_rs.returncode == 0
    for row_pt, row_rs in zip(res_pt.stdout.split("\n")[1:],
                              res_rs.stdout.split("\n")[1:]):
        if not row_pt:
            continue
        vm_pt = float(row_pt.split(",")[1])
        vm_rs = float(row_rs.split(",")[1])
        assert abs(vm_pt - vm_rs) < 1e-10


def test_potential_warns_outside_regime():
    res = run_cli("potential", "--case", "pt", "--A", "2", "--B", "5",
                  "--n-points", "65")
    assert res.returncode == 0
    assert "non-normalizable" in res.stderr
    assert res.stdout.startswith("x,")


def test_spectrum_passes_and_exit_zero():
    res = run_cli("spectrum", "--case", "pt", "--A", "-2", "--B", "0.5",
                  "--levels", "5")
    assert res.returncode == 0
    obj = json.loads(res.stdout)
    assert obj["pass"] is True
    assert [row["eps_analytic"] for row in obj["levels"]] == [0, 5, 12, 21, 32]
    assert set(obj) == {"case", "params", "levels", "max_rel_err", "pass"}


def test_algebra_alias_matches_pt_spectrum():
    res = run_cli("algebra", "--B1", "-0.5", "--mu", "1.5", "--a", "1",
                  "--levels", "4", "--n-points", "2000")
    assert res.returncode == 0
    obj = json.loads(res.stdout)
    assert obj["case"] == "iso21"
    assert [row["eps_analytic"] for row in obj["levels"]] == [0, 5, 12, 21]
    assert obj["pass"] is True


def test_spectrum_levels_out_of_range_exits_2():
    res = run_cli("spectrum", "--case", "pt", "--A", "-2", "--B", "0.5",
                  "--levels", "50")
    assert res.returncode == 2
    assert "levels out of supported range" in res.stderr


def test_bad_arguments_exit_2():
    assert run_cli("potential", "--case", "bogus").returncode == 2
    assert run_cli("potential").returncode == 2
    assert run_cli("spectrum", "--case", "pt").returncode == 2  # missing A, B


def test_domain_failure_exits_1():
    # spectrum for a formal regime has eps(n) < 0: domain failure
    res = run_cli("spectrum", "--case", "pt", "--A", "2", "--B", "0.5",
                  "--levels", "4", "--n-points", "256")
    assert res.returncode == 1


def test_tolerance_failure_exits_1():
    res = run_cli("spectrum", "--case", "pt", "--A", "-2", "--B", "0.5",
                  "--levels", "3", "--n-points", "1000", "--rel-tol", "1e-12",
                  "--abs-tol", "1e-12")
    assert res.returncode == 1
    assert json.loads(res.stdout)["pass"] is False


def test_beta_case_potential():
    res = run_cli("potential", "--case", "beta", "--A", "1", "--B", "0.25",
                  "--a", "1", "--c", "1.5", "--x-lo", "0.2", "--x-hi", "2.9",
                  "--n-points", "65")
    assert res.returncode == 0
    assert res.stdout.startswith("x,V_minus,V_plus")


def test_appell_case_potential():
    res = run_cli("potential", "--case", "appell", "--a", "1", "--lambda", "2",
                  "--branch", "+", "--C1", "-1", "--x-lo", "0.2", "--x-hi",
                  "2.0", "--n-points", "65")
    assert res.returncode == 0
    assert len(res.stdout.strip().split("\n")) == 66


def test_wavefunction_nodes_in_csv():
    res = run_cli("wavefunction", "--case", "pt", "--A", "-2", "--B", "0.5",
                  "--n", "2", "--x-lo", "0.05", "--x-hi", "3.09",
                  "--n-points", "801")
    assert res.returncode == 0
    rows = [ln.split(",") for ln in res.stdout.strip().split("\n")[1:]]
    f_minus = [float(r[1]) for r in rows]
    signs = [1 if v > 0 else -1 for v in f_minus]
    crossings = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    assert crossings == 2
    # ground state has no interior nodes
    res0 = run_cli("wavefunction", "--case", "pt", "--A", "-2", "--B", "0.5",
                   "--n", "0", "--x-lo", "0.05", "--x-hi", "3.09",
                   "--n-points", "801")
    f0 = [float(ln.split(",")[1]) for ln in res0.stdout.strip().split("\n")[1:]]
    assert all(v > 0 for v in f0)


def test_wavefunction_component2_flags():
    res = run_cli("wavefunction", "--case", "component2", "--a", "1", "--B",
                  "0.25", "--branch", "-", "--n", "1", "--format", "json",
                  "--n-points", "301")
    assert res.returncode == 0
    obj = json.loads(res.stdout)
    assert obj["normalizable"] is True
    assert "DegenerateJacobiWarning" in obj["warnings"]
    assert set(obj["rows"][0]) == {"x", "psi2"}


def test_byte_identical_reruns(tmp_path):
    args = ("spectrum", "--case", "pt", "--A", "-2", "--B", "0.5", "--levels",
            "3", "--n-points", "1000")
    out = [run_cli(*args).stdout for _ in range(2)]
    assert out[0] == out[1]
    path_args = args + ("--output", str(tmp_path / "rep.json"))
    run_cli(*path_args)
    first = (tmp_path / "rep.json").read_bytes()
    run_cli(*path_args)
    assert (tmp_path / "rep.json").read_bytes() == first


def test_config_file_roundtrip(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("A=-2\nB=0.5\nn_points=65\n")
    res = run_cli("potential", "--case", "pt", "--config", str(cfg))
    assert res.returncode == 0
    assert len(res.stdout.strip().split("\n")) == 66
    # explicit flag overrides the config value
    res2 = run_cli("potential", "--case", "pt", "--config", str(cfg),
                   "--n-points", "129")
    assert len(res2.stdout.strip().split("\n")) == 130


def test_config_unknown_key_exits_2(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("A=-2\nnot_a_key=3\n")
    res = run_cli("potential", "--case", "pt", "--B", "0.5", "--config",
                  str(cfg), "--n-points", "65")
    assert res.returncode == 2
    assert "unknown key" in res.stderr


def test_output_dir_override(tmp_path):
    res = run_cli("potential", "--case", "pt", "--A", "-2", "--B", "0.5",
                  "--n-points", "65", "--output", "out.csv",
                  env_extra={"TORUSPT_OUTDIR": str(tmp_path)})
    assert res.returncode == 0
    assert (tmp_path / "out.csv").exists()


def test_errata_contains_keyed_entries():
    res = run_cli("errata")
    assert res.returncode == 0
    assert "[eq68]" in res.stdout
    assert "A = lambda/(2a)" in res.stdout
    assert "[eq37_vs_eq89]" in res.stdout
    assert "E_eq37" in res.stdout and "E_eq89" in res.stdout
    # every entry names at least one verify check
    for block in res.stdout.split("\n\n"):
        if block.strip().startswith("["):
            assert "checks:" in block


def test_verify_single_suite_exits_zero():
    res = run_cli("verify", "--suite", "geometry")
    assert res.returncode == 0
    assert "0 failures" in res.stdout
    res_json = run_cli("verify", "--suite", "geometry", "--format", "json")
    obj = json.loads(res_json.stdout)
    assert obj["pass"] is True
    assert all(c["status"] in ("PASS", "INFO") for c in obj["checks"])


def test_verify_rejects_unknown_suite():
    assert run_cli("verify", "--suite", "nonsense").returncode == 2
