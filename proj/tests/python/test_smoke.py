import csv
import json
import math
import os
import shutil
import subprocess

import pytest


@pytest.fixture
def core():
    return pytest.importorskip("boundary_lab")


def test_words(core):
    m = core.GroupModel([1.0, 1.0])
    assert m.reduce("aBba") == "aa"
    assert m.multiply("ab", "BA") == "e"
    assert m.invert("ab") == "BA"
    assert m.distance("ab", "aB") == 2.0
    assert len(m.annulus(3.0, 1.5)) == 156


def test_exponent_and_density(core):
    m = core.GroupModel([1.0, 2.0])
    h = core.critical_exponent(m)
    t = math.exp(-h)
    assert abs(3 * t**3 + t**2 + t - 1) < 1e-9
    unit = core.GroupModel([1.0, 1.0])
    d = core.ConformalDensity(unit, math.log(3) / 2)
    assert d.dimension == pytest.approx(2.0)
    assert d.mu("ab") == pytest.approx(1 / 12)
    assert d.rn_derivative("a", ("a", "b")) == pytest.approx(3.0)
    assert d.p1_norm("a") == pytest.approx(math.sqrt(3) / 2)
    assert d.bms_mass("ab", "aB") == pytest.approx(1 / 16)


def test_boundary_action(core):
    m = core.GroupModel([1.0, 1.0])
    assert m.act("A", ("", "ab")) == ("e", "ba")
    assert m.gromov_bb(("", "ab"), ("", "aB")) == 1.0


def test_epsilon_above_exponent_is_rejected(core):
    with pytest.raises(ValueError):
        core.ConformalDensity(core.GroupModel([1.0, 1.0]), 2.0)


def test_run_writes_reports(core, tmp_path):
    code, _ = core.run("shadow", "{}", str(tmp_path))
    assert code == 0
    summary = json.loads((tmp_path / "shadow.json").read_text())
    assert summary["summary"]["min_ratio"] == pytest.approx(0.75)
    with open(tmp_path / "shadow.csv", newline="") as f:
        rows = list(csv.DictReader(f))
    assert summary["row_count"] == len(rows)
    assert list(rows[0]) == summary["columns"]


def test_run_rejects_unknown_keys(core, tmp_path):
    code, log = core.run("exponent", '{"no_such_key": 1}', str(tmp_path))
    assert code == 2
    assert "no_such_key" in log


def _cli():
    path = os.environ.get("BOUNDARY_LAB_CLI") or shutil.which("boundary-lab")
    if not path:
        pytest.skip("boundary-lab binary not found")
    return path


def test_cli_exponent(tmp_path):
    result = subprocess.run([_cli(), "exponent", "--out", str(tmp_path)], capture_output=True)
    assert result.returncode == 0
    report = json.loads((tmp_path / "exponent.json").read_text())
    assert abs(report["summary"]["h"] - math.log(3)) < 1e-9


def test_cli_unknown_subcommand(tmp_path):
    result = subprocess.run([_cli(), "nope", "--out", str(tmp_path)], capture_output=True)
    assert result.returncode == 1
