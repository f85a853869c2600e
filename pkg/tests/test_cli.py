import json
import os
import subprocess
import sys

SINGLE_TRIANGLE_OFF = "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n"


def run_cli(*args, env_extra=None):
    env = dict(os.environ, RIGIDITYLAB_LOG="error")
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "rigiditylab.cli", *args],
        capture_output=True,
        env=env,
    )


def test_validate_builtin_model():
    proc = run_cli("validate", "--model", "octahedron")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["passed"] is True


def test_validate_boundary_edges_exit_1(tmp_path):
    bad = tmp_path / "bad.off"
    bad.write_text(SINGLE_TRIANGLE_OFF)
    proc = run_cli("validate", "--input", str(bad))
    assert proc.returncode == 1
    report = json.loads(proc.stdout)
    assert not report["passed"]
    assert {v["condition"] for v in report["violations"]} == {"iv"}


def test_validate_parse_error_exit_2(tmp_path):
    bad = tmp_path / "broken.off"
    bad.write_text("definitely not an OFF file\n")
    proc = run_cli("validate", "--input", str(bad))
    assert proc.returncode == 2
    assert b"ParseError" in proc.stderr


def test_missing_input_exit_2():
    proc = run_cli("validate", "--input", "/nonexistent/file.off")
    assert proc.returncode == 2


def test_analyze_bricard_exact():
    proc = run_cli("analyze", "--model", "bricard-default", "--mode", "exact")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["verdict"] == "inconclusive"
    assert len(report["combinations"]) == 6
    assert report["relations"]


def test_analyze_distinct_octahedron_rigid():
    proc = run_cli("analyze", "--model", "octahedron-distinct")
    report = json.loads(proc.stdout)
    assert report["verdict"] == "rigid"
    assert len(report["constant_angle_edges"]) == 12


def test_analyze_numeric_mode():
    proc = run_cli("analyze", "--model", "octahedron-distinct", "--mode", "numeric")
    report = json.loads(proc.stdout)
    assert report["verdict"] == "rigid_presumed"
    assert report["height"] == 10**6


def test_flex_writes_series_and_report(tmp_path):
    out_csv = tmp_path / "series.csv"
    out_json = tmp_path / "report.json"
    proc = run_cli(
        "flex", "--model", "bricard-default", "--steps", "15", "--step", "0.01",
        "--out-csv", str(out_csv), "--out-json", str(out_json),
    )
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report == json.loads(out_json.read_text())
    assert all(c["max_deviation"] is not None for c in report["combinations"])
    lines = out_csv.read_text().strip().split("\n")
    assert len(lines) == 2 + 16  # comment, header, 15 steps + initial sample


def test_flex_rigid_model_exit_2():
    proc = run_cli("flex", "--model", "octahedron", "--steps", "5")
    assert proc.returncode == 2
    assert b"SingularPoint" in proc.stderr


def test_oracle_output():
    proc = run_cli("oracle", "--model", "tetrahedron", "--samples", "20000")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert len(report["edges"]) == 6
    for row in report["edges"]:
        assert row["abs_difference"] < 0.1


def test_reproducible_outputs(tmp_path):
    runs = [
        run_cli("oracle", "--model", "cube", "--samples", "5000", "--seed", "9",
                "--workers", "2").stdout
        for _ in range(2)
    ]
    assert runs[0] == runs[1]
    flexes = [
        run_cli("flex", "--model", "bricard-default", "--steps", "8").stdout
        for _ in range(2)
    ]
    assert flexes[0] == flexes[1]


def test_unknown_flag_rejected():
    proc = run_cli("oracle", "--model", "cube", "--frobnicate")
    assert proc.returncode != 0


def test_model_and_input_mutually_exclusive(tmp_path):
    proc = run_cli("validate")
    assert proc.returncode == 2


def test_help_lists_flags():
    for sub, flags in [
        ("analyze", ["--model", "--input", "--mode", "--height", "--out-json"]),
        ("flex", ["--steps", "--step", "--tol", "--seed", "--out-csv"]),
        ("oracle", ["--samples", "--seed", "--workers"]),
    ]:
        proc = run_cli(sub, "--help")
        assert proc.returncode == 0
        for flag in flags:
            assert flag.encode() in proc.stdout
