import asyncio
import math

import pytest

from src.batch import FrictionBatch, run_command
from src.config import DEFAULT_RUN_CONFIG, build_run_config
from src.utils.table_io import render_table

WARM = DEFAULT_RUN_CONFIG.replace("temperature = 0 nat", "temperature = 1 nat").replace(
    "velocities = list 1 nat", "velocities = list 1e-3 0.5 nat").replace(
    "angular_velocities = list 1 nat", "angular_velocities = log 1e-3 1 4 nat")


def _run(coro):
    return asyncio.run(coro)


def _batch(text: str = DEFAULT_RUN_CONFIG, **kwargs) -> FrictionBatch:
    return FrictionBatch(build_run_config(text, "<test>"), verbose=False, **kwargs)


def test_force_rows_at_zero_temperature():
    report = _run(_batch().run_force())
    assert report["status"] == "success"
    assert report["columns"] == ["v", "F_T0", "F_finiteT", "regime_flags"]
    (row,) = report["rows"]
    c_p = 15.0 * math.pi ** 2 / 64.0 / math.pi ** 4
    assert row[1] == pytest.approx(-c_p)
    assert math.isnan(row[2])
    assert "T0_only" in row[3]
    assert report["header"][0].startswith("units: v=nat")


def test_force_rows_flag_regime():
    report = _run(_batch(WARM).run_force())
    slow, fast = report["rows"]
    assert slow[3] == "ok"
    assert slow[2] == pytest.approx(-math.pi ** 4 / 4.0 / math.pi ** 4 * 1e-3)
    assert "regime" in fast[3].split(";")


def test_torque_rows_match_closed_form():
    report = _run(_batch(WARM).run_torque())
    assert report["status"] == "success"
    for omega, tau_T0, tau_lin, tau_numeric, rel_err, flags in report["rows"]:
        assert tau_numeric == pytest.approx(tau_lin, rel=1e-9)
        assert rel_err <= 1e-9
        assert "coarse" not in flags


def test_coarse_annuli_fail_tolerance():
    text = DEFAULT_RUN_CONFIG + "n_annuli = 1\n"
    report = _run(_batch(text).run_torque())
    assert report["status"] == "failure"
    assert "coarse" in report["rows"][0][-1]


def test_output_does_not_depend_on_threads():
    tables = []
    for threads in (1, 4):
        report = _run(_batch(WARM, threads=threads).run_torque())
        tables.append(render_table(report["columns"], report["rows"], report["header"]))
    assert tables[0] == tables[1]


def test_dissipation_rows():
    text = DEFAULT_RUN_CONFIG.replace("velocities = list 1 nat", "velocities = list 1e-3 2e-3 nat").replace(
        "leg_duration = 1000 nat", "leg_duration = 1 nat")
    report = _run(_batch(text, threads=2).run_dissipation())
    assert report["status"] == "success"
    assert [row[1] for row in report["rows"]] == ["T0", "T0"]
    for row in report["rows"]:
        assert row[-1] < 1e-2


def test_dissipation_from_trajectory_file(tmp_path):
    path = tmp_path / "loop.dat"
    path.write_text("# units: time=nat, length=nat\n0 0 0\n1 1e-3 0\n2 0 0\n")
    report = _run(_batch().run_dissipation(str(path)))
    (row,) = report["rows"]
    assert row[0] == pytest.approx(1e-3)
    assert row[3] == pytest.approx(2.0)


def test_failed_rows_become_error_entries(tmp_path):
    path = tmp_path / "open.dat"
    path.write_text("# units: time=nat, length=nat\n0 0 0\n1 1e-3 0\n")
    report = _run(_batch().run_dissipation(str(path)))
    assert report["status"] == "error"
    assert report["rows"][0][-1] == "error:LoopViolationError"


def test_empty_verification_suite_passes():
    report = _run(_batch().run_verify([]))
    assert report["status"] == "success"
    assert report["passed"] == 0
    assert report["checks"] == []


def test_verify_selected_checks():
    report = _run(run_command("verify", build_run_config(DEFAULT_RUN_CONFIG), verbose=False,
                              names=["torque", "sinc_window"]))
    assert report["status"] == "success"
    assert [c["check"] for c in report["checks"]] == ["torque", "sinc_window"]
    assert all(c["status"] == "passed" for c in report["checks"])


def test_tolerance_override_can_fail_a_check():
    report = _run(_batch(tolerance=-1.0).run_verify(["torque"]))
    assert report["status"] == "failure"
    assert report["failed"] == ["torque"]


@pytest.mark.slow
def test_full_verification_suite():
    report = _run(_batch(threads=4).run_verify())
    failed = {c["check"]: c["detail"] for c in report["checks"] if c["status"] != "passed"}
    assert report["status"] == "success", failed
