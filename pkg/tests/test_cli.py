import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from whampdo.cli import main, run
from whampdo.mpdo import read_dump

PRESETS = Path(__file__).resolve().parent.parent / "presets"
Z2 = str(PRESETS / "z2.json")
LY = str(PRESETS / "lee_yang.json")


def report(argv):
    code, text = run(argv)
    return code, json.loads(text)


def test_validate():
    code, rep = report(["validate", Z2])
    assert code == 0
    assert rep["data"]["is_hopf"] is True
    code, rep = report(["validate", "--spec", LY])
    assert code == 0 and rep["data"]["is_hopf"] is False


def test_info_lee_yang():
    code, rep = report(["info", LY])
    assert code == 0
    assert max(rep["data"]["sectors"]["fp_dims"]) == pytest.approx(1.6180339887, abs=1e-10)
    assert rep["data"]["sector_ordering"]


def test_positional_and_flag_agree():
    assert run(["validate", Z2]) == run(["validate", "--spec", Z2])


def test_deterministic_reports():
    a = run(["verify", LY, "--suite", "rfp"])
    b = run(["verify", LY, "--suite", "rfp"])
    assert a == b and a[0] == 0


@pytest.mark.parametrize("suite", ["rfp", "glue", "circuit", "hopf-special", "identities"])
def test_z2_suites(suite):
    code, rep = report(["verify", Z2, "--suite", suite])
    assert code == 0
    assert rep["pass"] is True
    assert all(c["pass"] for c in rep["checks"].values())


def test_lee_yang_circuit():
    code, rep = report(["verify", LY, "--suite", "circuit"])
    assert code == 0
    assert rep["data"]["distance"] <= 1e-8


def test_exit_codes(tmp_path, capsys):
    assert main(["verify", Z2, "--suite", "rfp", "--tol", "1e-300"]) == 1
    assert main(["verify", LY, "--suite", "hopf-special"]) == 2
    assert main(["validate", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    assert main(["validate", str(bad)]) == 2
    assert main(["validate"]) == 2
    assert main(["mpdo", LY, "--x", "nonsense"]) == 2
    assert main(["mpdo", LY, "--n", "0"]) == 2
    assert main(["mpdo", LY, "--x", "omega", "--n", "7"]) == 2
    capsys.readouterr()


def test_budget_env(monkeypatch):
    monkeypatch.setenv("WHA_BUDGET_ENTRIES", "abc")
    assert main(["validate", Z2]) == 2
    monkeypatch.setenv("WHA_BUDGET_ENTRIES", "1000")
    assert main(["mpdo", Z2, "--n", "6"]) == 2


def test_mpdo_dump(tmp_path):
    out = tmp_path / "rho.bin"
    code, rep = report(["mpdo", Z2, "--n", "3", "--out", str(out)])
    assert code == 0 and rep["data"]["dump"] == str(out)
    head, rho = read_dump(out)
    assert head["N"] == 3 and head["site_dim"] == 2 and head["shape"] == [8, 8]
    want = (np.eye(8) + np.diag([1, -1, -1, 1, -1, 1, 1, -1])) / 8
    assert np.allclose(rho, want, atol=1e-15)


def test_x_from_file(tmp_path):
    f = tmp_path / "x.json"
    f.write_text(json.dumps({"coefficients": [[1, 0], 0.5]}))
    code, rep = report(["mpdo", Z2, "--x", str(f), "--n", "2"])
    assert code == 0 and rep["data"]["x"] == "x.json"
    f.write_text(json.dumps([0, 1]))
    assert main(["mpdo", Z2, "--x", str(f)]) == 2


def test_report_to_file(tmp_path, capsys):
    out = tmp_path / "rep.json"
    assert main(["witness-nogluing", LY, "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    rep = json.loads(out.read_text())
    assert rep["data"]["distance"] == pytest.approx(0.4, abs=1e-10)
    assert rep["data"]["is_hopf"] is False


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "whampdo", "validate", Z2], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["pass"] is True
