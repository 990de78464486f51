import asyncio
import json
import sys

import pytest

import main
from src.config import DEFAULT_RUN_CONFIG


def _exit_code(monkeypatch, *argv) -> int:
    monkeypatch.setattr(sys, "argv", ["main.py", *argv])
    with pytest.raises(SystemExit) as info:
        asyncio.run(main.main())
    return info.value.code


def test_force_table_on_stdout(monkeypatch, capsys):
    assert _exit_code(monkeypatch, "force") == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert lines[0].startswith("# units:")
    assert lines[1].startswith("# config_sha256:")
    assert lines[2] == "v,F_T0,F_finiteT,regime_flags"
    assert "CASIMIR" not in out


def test_table_file_and_gnuplot(monkeypatch, tmp_path):
    out, plot = tmp_path / "torque.csv", tmp_path / "torque.dat"
    assert _exit_code(monkeypatch, "torque", "-q", "-o", str(out), "--gnuplot", str(plot)) == 0
    assert out.read_text().splitlines()[2].startswith("Omega,")
    assert plot.read_text().splitlines()[-1].count(" ") == 1


def test_config_errors_exit_2(monkeypatch, tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text(DEFAULT_RUN_CONFIG.replace("gap = 1 nat", "gap = 1"))
    assert _exit_code(monkeypatch, "force", "--config", str(bad)) == 2
    assert "bad.ini:12:" in capsys.readouterr().err


def test_unknown_check_exits_2(monkeypatch):
    assert _exit_code(monkeypatch, "verify", "-q", "--checks", "torque,magic") == 2


def test_verify_writes_report(monkeypatch, tmp_path):
    report = tmp_path / "report.json"
    assert _exit_code(monkeypatch, "verify", "-q", "--checks", "torque", "-o", str(report)) == 0
    data = json.loads(report.read_text())
    assert data["status"] == "success"
    assert data["checks"][0]["check"] == "torque"


def test_verification_failure_exits_3(monkeypatch, tmp_path):
    report = tmp_path / "report.json"
    code = _exit_code(monkeypatch, "verify", "-q", "--checks", "torque", "--tolerance=-1",
                      "-o", str(report))
    assert code == 3


def test_bad_thread_count(monkeypatch):
    assert _exit_code(monkeypatch, "force", "-q", "--threads", "0") == 2


def test_bad_trajectory_header_exits_2(monkeypatch, tmp_path, capsys):
    path = tmp_path / "loop.dat"
    path.write_text("# units: time=nat, length=nat, v=\n0 0 0\n1 1e-3 0\n2 0 0\n")
    assert _exit_code(monkeypatch, "dissipation", "-q", "--trajectory", str(path)) == 2
    assert "loop.dat:1:" in capsys.readouterr().err
