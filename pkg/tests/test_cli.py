import json
import subprocess
import sys

import numpy as np
import pytest

import harmlens as hl


def run_cli(*args, cwd=None):
    proc = subprocess.run(
        [sys.executable, "-m", "harmlens.cli", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
        timeout=300,
    )
    return proc


def test_render_writes_csv_and_svg(tmp_path):
    proc = run_cli(
        "render", "--f", "koebe", "--region", "disk:r=0.5", "--n", "256",
        "--out", str(tmp_path / "kb"),
    )
    assert proc.returncode == 0, proc.stderr
    csv = (tmp_path / "kb.csv").read_text().splitlines()
    assert csv[0] == "z_re,z_im,f_re,f_im"
    first = csv[1].split(",")
    assert len(first) == 4
    assert abs(float(first[2]) - 2.0) < 1e-12  # koebe at z = 0.5
    svg = (tmp_path / "kb.svg").read_text()
    assert svg.startswith("<svg")
    assert "polyline" in svg
    header = json.loads(proc.stdout)
    assert header["config"]["command"] == "render"


def test_render_output_is_byte_identical_across_runs(tmp_path):
    d1 = tmp_path / "one"
    d2 = tmp_path / "two"
    d1.mkdir()
    d2.mkdir()
    args = ("render", "--f", "ft:t=0.5", "--region", "lens", "--n", "128",
            "--out", "a")
    a = run_cli(*args, cwd=str(d1))
    b = run_cli(*args, cwd=str(d2))
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    assert (d1 / "a.csv").read_bytes() == (d2 / "a.csv").read_bytes()
    assert (d1 / "a.svg").read_bytes() == (d2 / "a.svg").read_bytes()


def test_certify_koebe_on_the_lens_exits_zero():
    proc = run_cli("certify", "--f", "koebe", "--region", "lens", "--n", "1024")
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    assert doc["univalence"]["outcome"] == "CERTIFIED_AT_RESOLUTION"
    assert doc["typical_reality"]["passed"] is True


def test_certify_collision_exit_codes():
    # a genuine collision is failure unless it was declared expected
    plain = run_cli("certify", "--f", "theorem5", "--region", "lens", "--n", "1024")
    assert plain.returncode == 1
    expected = run_cli(
        "certify", "--f", "theorem5", "--region", "lens", "--n", "1024",
        "--expect-collision",
    )
    assert expected.returncode == 0, expected.stderr
    doc = json.loads(expected.stdout)
    assert doc["univalence"]["outcome"] == "COLLISION"
    assert doc["univalence"]["witness"]["dz"] > 0.3


def test_certify_random_measures_inside_the_safe_disk(tmp_path):
    nu, mu = hl.sample_measures(5, seed=123)
    doc = hl.measure_pair_to_json(nu, mu)
    path = tmp_path / "m.json"
    path.write_text(json.dumps(doc))
    proc = run_cli(
        "certify", "--measures", str(path), "--region", "disk:r=0.2134", "--n", "1024",
    )
    assert proc.returncode == 0, proc.stderr
    out = json.loads(proc.stdout)
    assert out["univalence"]["outcome"] == "CERTIFIED_AT_RESOLUTION"


@pytest.mark.parametrize(
    "args",
    [
        ("certify", "--f", "koebe", "--region", "disk:r=banana"),
        ("certify", "--f", "koebe", "--region", "torus"),
        ("certify", "--f", "koebe", "--measures", "x.json", "--region", "lens"),
        ("certify", "--measures", "no_such_file.json", "--region", "lens"),
        ("certify", "--f", "mandelbrot", "--region", "lens", "--n", "256"),
        ("witness",),
        ("conjecture", "--id", "7"),
    ],
)
def test_usage_errors_exit_two(args):
    proc = run_cli(*args)
    assert proc.returncode == 2, (proc.stdout, proc.stderr)


def test_radius_report_bracket():
    proc = run_cli("radius", "--kind", "ru")
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    lo, hi = doc["report"]["bracket"]
    assert abs(lo - 0.2132083435181047) < 1e-12
    assert abs(hi - 0.4143141537122339) < 1e-12


def test_conjecture_two_cli_is_deterministic_and_worker_independent():
    base = ("conjecture", "--id", "2", "--samples", "3", "--n", "512", "--seed", "0")
    a = run_cli(*base)
    b = run_cli(*base)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    c = run_cli(*base, "--workers", "2")
    assert c.returncode == 0
    # the config echo records the worker flag; the report must not change
    assert json.loads(c.stdout)["report"] == json.loads(a.stdout)["report"]


def test_conjecture_one_cli():
    proc = run_cli("conjecture", "--id", "1", "--samples", "2", "--n", "512", "--seed", "0")
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    assert doc["report"]["consistent"] is True


def test_witness_critical_at_the_vertex():
    proc = run_cli("witness", "--kind", "critical", "--z0", "0.41421356237309515j")
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    assert abs(doc["witness"]["t"] - 0.5) < 1e-9
    assert doc["witness"]["residual"] < 1e-9


def test_witness_critical_rejects_off_arc_points():
    proc = run_cli("witness", "--kind", "critical", "--z0", "0.45j")
    assert proc.returncode == 1
    err = json.loads(proc.stdout or proc.stderr)
    assert "error" in err


def test_witness_scaled_frozen_values():
    proc = run_cli("witness", "--kind", "scaled", "--z0", "0.55+0.6j")
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    assert abs(doc["witness"]["t"] - 0.08026182532504994) < 1e-9
    assert abs(doc["witness"]["R"] - 0.6206602578231459) < 1e-9


def test_witness_proposition_and_coeffs():
    prop = run_cli("witness", "--kind", "proposition", "--alpha", "0.7853981633974483")
    assert prop.returncode == 0, prop.stderr
    pdoc = json.loads(prop.stdout)
    assert pdoc["witness"]["residual"] < 1e-9
    assert min(pdoc["witness"]["perturbed_residuals"]) > 1e-4
    coeffs = run_cli("witness", "--kind", "coeffs", "--coeff-n", "3")
    assert coeffs.returncode == 0, coeffs.stderr
    doc = json.loads(coeffs.stdout)
    assert abs(doc["witness"]["max_a"] - 14.0 / 3.0) < 1e-9
    assert abs(doc["witness"]["max_b"] - 5.0 / 3.0) < 1e-9


def test_witness_nonconvexity():
    proc = run_cli("witness", "--kind", "nonconvexity",
                   "--s", "-1.0", "--t", "1.0", "--lam", "0.5")
    assert proc.returncode == 0, proc.stderr
    a = json.loads(proc.stdout)["witness"]["a"]
    assert abs(a[0]) < 1e-9
    assert abs(abs(a[1]) - (np.sqrt(2.0) - 1.0)) < 1e-9


def test_demo_reports_picard_preimages():
    proc = run_cli("demo", "--picard", "--w", "0.1", "--k", "3")
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    pre = doc["demo"]["picard"]["preimages"]
    assert len(pre) >= 3
    assert max(doc["demo"]["picard"]["residuals"]) < 1e-10


def test_witness_collision_frozen():
    proc = run_cli("witness", "--kind", "collision", "--alpha", "0.39269908169872414")
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)["witness"]
    z1 = complex(*doc["points"][0]) if isinstance(doc["points"][0], list) else None
    assert z1 is not None
    assert abs(z1 - (0.11683714391375084 + 0.40184151105323723j)) < 1e-9
    assert abs(doc["parameters"]["r"] - 0.9762434228679497) < 1e-9
