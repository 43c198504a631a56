import json
import subprocess
import sys

import pytest

from lcscalc.cli import main

R4_CHART = "coord x1\ncoord y1\ncoord x2\ncoord y2\n"
R4_STRUCTURE = "omega = dx1^dy1 + dx2^dy2\ntheta = 0\n"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    (tmp_path / "r4.chart").write_text(R4_CHART)
    (tmp_path / "r4.st").write_text(R4_STRUCTURE)
    return tmp_path


def test_lcs_check_symplectic(capsys, files):
    code, out, _ = run(capsys, "lcs", "check", "--chart", str(files / "r4.chart"),
                       "--omega", "dx1^dy1 + dx2^dy2", "--theta", "0")
    assert code == 0
    assert "[fail]" not in out and out.endswith("result: pass\n")


def test_lcs_check_degenerate(capsys, files):
    code, out, _ = run(capsys, "lcs", "check", "--chart", str(files / "r4.chart"),
                       "--omega", "dx1^dy1", "--theta", "dx2")
    assert code == 1
    assert "[fail] nondegenerate" in out


def test_lcs_check_parse_error(capsys, files):
    code, _, err = run(capsys, "lcs", "check", "--chart", str(files / "r4.chart"), "--omega", "dx1^^dy1")
    assert code == 2 and "at byte 4" in err


def test_lcs_check_missing_file(capsys, files):
    code, _, err = run(capsys, "lcs", "check", "--chart", str(files / "nope"), "--omega", "dx1^dy1")
    assert code == 2 and "cannot read" in err


def test_collar_pipeline(capsys, files):
    chart, st = files / "c.chart", files / "c.st"
    code, out, _ = run(capsys, "lcs", "collar", "dz - y*dx", "--chart-out", str(chart), "--structure-out", str(st))
    assert code == 0
    assert "[pass] lee-sign: eps = -1" in out
    assert st.read_text() == "omega = (y/t)*dt^dx + (-1/t)*dt^dz - dx^dy\ntheta = (1/t)*dt\n"
    assert chart.read_text() == "coord t collar\ncoord x\ncoord y\ncoord z\n"
    code, out, _ = run(capsys, "lcs", "check", "--chart", str(chart), "--structure", str(st))
    assert code == 0 and "eps = -1" in out


def test_collar_rejects_non_contact(capsys):
    code, out, _ = run(capsys, "lcs", "collar", "dz")
    assert code == 1 and "[fail] contact: alpha ^ d alpha = 0" in out


def test_hl_verify_r4(capsys, files):
    code, out, _ = run(capsys, "hl", "verify", str(files / "r4.chart"), str(files / "r4.st"),
                       "--trials", "50", "--seed", "0")
    assert code == 0 and "[fail]" not in out
    assert "[pass] spectrum-steps" in out
    assert "c_0 = 2, c_1 = 1, c_2 = 0, c_3 = -1, c_4 = -2" in out


def test_hl_verify_collar(capsys, files):
    chart, st = files / "c.chart", files / "c.st"
    run(capsys, "lcs", "collar", "dz - y*dx", "--chart-out", str(chart), "--structure-out", str(st))
    code, out, _ = run(capsys, "hl", "verify", str(chart), str(st), "--trials", "20", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["exit_status"] == 0
    status = {c["name"]: c["status"] for c in doc["checks"]}
    assert status["delta-formulas-agree"] == "reported"
    assert status["relation-scan"] == "pass"
    assert status["lichnerowicz-nilpotency"] == "pass"


def test_hl_verify_degenerate(capsys, files):
    (files / "bad.st").write_text("omega = dx1^dy1\n")
    code, out, _ = run(capsys, "hl", "verify", str(files / "r4.chart"), str(files / "bad.st"))
    assert code == 1 and "[fail] nondegenerate" in out


@pytest.mark.parametrize("t, expected", [("0", [1] * 11), ("1", [1, 1] + [0] * 9)])
def test_dga_betti(capsys, tmp_path, t, expected):
    p = tmp_path / "m.txt"
    p.write_text(f"param t = {t}\ngen w1 : 1\ngen w2 : 2\nd w2 = t*w1*w2\n")
    code, out, _ = run(capsys, "dga", "betti", str(p), "--max-degree", "10")
    assert code == 0
    assert json.loads(out)["betti"] == expected
    assert out.startswith('{"betti"')


def test_dga_betti_errors(capsys, tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("gen x : 2\ngen y : 2\nd x = x*y\n")
    assert run(capsys, "dga", "betti", str(p))[0] == 1
    p.write_text("gen a : 1\ngen x : 2\nd a = x\nd x = a*x\n")
    code, _, err = run(capsys, "dga", "betti", str(p))
    assert code == 1 and "d(d(a)) = a*x" in err
    p.write_text("gen a : 1\nd a = (\n")
    assert run(capsys, "dga", "betti", str(p))[0] == 2


def test_dga_twisted(capsys, tmp_path):
    p = tmp_path / "torus.txt"
    p.write_text("gen e1 : 1\ngen e2 : 1\n")
    code, out, _ = run(capsys, "dga", "betti", str(p), "--max-degree", "2", "--lee", "e1", "--weight", "1")
    assert code == 0 and json.loads(out)["betti"] == [0, 0, 0]


def test_kerr_verify(capsys):
    code, out, _ = run(capsys, "kerr", "verify")
    assert code == 0
    assert "[reported] ks-identity:" in out and "difference = r^2" in out
    assert "[reported] two-form-printed:" in out
    assert "[fail]" not in out


def test_kerr_sample(capsys, tmp_path):
    out_path = tmp_path / "s.csv"
    assert run(capsys, "kerr", "sample", "--a", "1", "--n", "3", "--seed", "7", "--out", str(out_path))[0] == 0
    first = out_path.read_bytes()
    assert run(capsys, "kerr", "sample", "--a", "1", "--n", "3", "--seed", "7", "--out", str(out_path))[0] == 0
    assert out_path.read_bytes() == first
    assert first.startswith(b"index,theta_p_num,") and first.count(b"\n") == 4


@pytest.mark.parametrize("argv", [
    ["kerr", "sample", "--a", "1", "--n", "0", "--seed", "7"],
    ["kerr", "sample", "--a", "-1", "--n", "3", "--seed", "7"],
    ["kerr", "sample", "--a", "x", "--n", "3", "--seed", "7"],
    ["kerr", "sample", "--a", "1", "--n", "3"],
    ["kerr", "sample", "--a", "1", "--n", "3", "--seed", str(2 ** 64)],
    ["nonsense"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "lcscalc", "kerr", "sample", "--a", "1", "--n", "2", "--seed", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.count("\n") == 3
