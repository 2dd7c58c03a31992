import json
import math
import subprocess
import sys

import numpy as np
import pytest

from hagedorn import cli, fixtures


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- embedded fixture integrity ----------------------------------------------------

def test_matrix_fixtures_digit_for_digit():
    s = math.sqrt(2.0)
    assert np.array_equal(fixtures.M1, np.eye(2))
    assert np.array_equal(fixtures.M2, np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.array_equal(
        fixtures.M3, np.array([[1.0 / s, 1.0 / s], [1.0 / s, -1.0 / s]])
    )


def test_frame_fixtures_digit_for_digit():
    s = math.sqrt(2.0)
    Q1 = np.array([[1.0, 1.0], [1.0, -1.0]]) / s
    assert np.array_equal(fixtures.Z1.Q, Q1)
    assert np.array_equal(fixtures.Z1.P, 1j * Q1)

    Q2 = np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]) / 2.0
    assert np.array_equal(fixtures.Z2.Q, Q2)
    assert np.array_equal(fixtures.Z2.P, 1j * Q2)

    Q3 = np.array([[1j, -1j * (1 + s)], [1.0, s - 1.0]])
    P3 = np.array(
        [
            [(1 - s) / (2 * s), 1 / (2 * s)],
            [1j * (1 + s) / (2 * s), 1j / (2 * s)],
        ]
    )
    assert np.array_equal(fixtures.Z3.Q, Q3)
    assert np.array_equal(fixtures.Z3.P, P3)


# -- validate -------------------------------------------------------------------

@pytest.mark.parametrize("name", ["Z1", "Z2", "Z3"])
def test_validate_fixtures_pass(capsys, name):
    code, out, _ = run_cli(capsys, "validate", "--fixture", name)
    assert code == 0
    report = json.loads(out)
    assert report["pass"] is True
    assert report["isotropy"] <= 1e-12
    assert report["normalisation"] <= 1e-12


def test_validate_identity_pair_fails(capsys, tmp_path):
    path = tmp_path / "frame.json"
    eye = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
    path.write_text(json.dumps({"Q": eye, "P": eye}))
    code, out, _ = run_cli(capsys, "validate", "--fixture", str(path))
    assert code == 1
    report = json.loads(out)
    assert report["pass"] is False
    assert report["normalisation"] > 0.1


def test_validate_random_generated_frame(capsys, tmp_path):
    from hagedorn.frames import frame_to_json, random_normalised_frame

    f = random_normalised_frame(3, np.random.default_rng(5))
    path = tmp_path / "rand.json"
    path.write_text(json.dumps(frame_to_json(f)))
    code, out, _ = run_cli(capsys, "validate", "--fixture", str(path))
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_unknown_fixture_usage_error(capsys):
    code, _, err = run_cli(capsys, "validate", "--fixture", "Z9")
    assert code == 2
    assert "Z9" in err


def test_bad_flag_exits_2():
    proc = subprocess.run(
        [sys.executable, "-m", "hagedorn.cli", "validate", "--frame", "Z1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2


# -- poly ------------------------------------------------------------------------

def test_poly_export_graded_lex(capsys):
    code, out, _ = run_cli(capsys, "poly", "--fixture", "M2", "--k", "2", "2")
    assert code == 0
    obj = json.loads(out)
    assert obj["kmax"] == [2, 2]
    ks = [tuple(e["k"]) for e in obj["entries"]]
    assert ks == sorted(ks, key=lambda k: (sum(k), k))
    entry = dict()
    for e in obj["entries"]:
        if e["k"] == [1, 1]:
            entry = {tuple(t["k"]): complex(t["re"], t["im"]) for t in e["terms"]}
    assert entry == {(1, 1): 4.0 + 0j, (0, 0): -2.0 + 0j}


def test_poly_check_passes(capsys):
    code, out, _ = run_cli(capsys, "poly", "--fixture", "M3", "--k", "3", "3", "--check")
    assert code == 0
    report = json.loads(out)
    assert all(entry["pass"] for entry in report.values())
    assert set(report) == {"genfunc", "tensor", "laguerre", "counting"}


def test_poly_custom_matrix_file(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps([[[0.0, 0.5], [0.3, 0.0]], [[0.3, 0.0], [0.0, -0.5]]]))
    code, out, _ = run_cli(capsys, "poly", "--fixture", str(path), "--k", "2", "2", "--check")
    assert code == 0


def test_poly_asymmetric_matrix_rejected(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps([[[1.0, 0.0], [0.5, 0.0]], [[0.2, 0.0], [1.0, 0.0]]]))
    code, _, err = run_cli(capsys, "poly", "--fixture", str(path), "--k", "1", "1")
    assert code == 2
    assert "AsymmetricM" in err


# -- packet / wigner grids -----------------------------------------------------------

def test_packet_csv_format(capsys):
    code, out, _ = run_cli(
        capsys, "packet", "--Z", "Z1", "--k", "0", "0", "--points", "5"
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "x1,x2,re,im,abs"
    assert len(lines) == 26
    # center row carries the ground-state peak (pi eps)^(-d/4) / sqrt|det Q|
    row = [l for l in lines[1:] if l.startswith("0.0,0.0,")][0]
    peak = abs(complex(*map(float, row.split(",")[2:4])))
    assert peak == pytest.approx((math.pi * 0.1) ** -0.5, rel=1e-12)


def test_packet_deterministic(tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (out1, out2):
        code = cli.main(
            ["packet", "--Z", "Z2", "--Y", "Z3", "--k", "1", "2",
             "--points", "9", "--out", str(path)]
        )
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_packet_index_length_guard(capsys):
    code, _, err = run_cli(capsys, "packet", "--Z", "Z1", "--k", "1")
    assert code == 2
    assert "--k" in err


def test_wigner_csv_header_and_peak(capsys):
    code, out, _ = run_cli(
        capsys, "wigner", "--Z", "Z2", "--k", "0", "0", "--l", "0", "0", "--points", "3"
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "q1,q2,p1,p2,re,im,abs"
    assert len(lines) == 3**4 + 1
    center = [l for l in lines[1:] if l.startswith("0.0,0.0,0.0,0.0,")][0]
    val = float(center.split(",")[4])
    assert val == pytest.approx((math.pi * 0.1) ** -2, rel=1e-12)


def test_wigner_d1_default_grid(tmp_path):
    # d=1 JSON frame exercises the q1,p1 header path
    path = tmp_path / "std.json"
    path.write_text(json.dumps({"Q": [[[1.0, 0.0]]], "P": [[[0.0, 1.0]]]}))
    out = tmp_path / "w.csv"
    code = cli.main(
        ["wigner", "--Z", str(path), "--k", "1", "--l", "1", "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "q1,p1,re,im,abs"
    assert len(lines) == 41**2 + 1


# -- verify ---------------------------------------------------------------------

def test_verify_frames_scope(capsys):
    code, out, _ = run_cli(capsys, "verify", "frames")
    assert code == 0
    report = json.loads(out)
    assert all(v["pass"] for v in report.values())
    assert "fixture-frame-residuals" in report


def test_verify_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["verify", "polys", "--out", str(a)]) == 0
    assert cli.main(["verify", "polys", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_console_script_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "hagedorn.cli", "verify", "frames"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)
