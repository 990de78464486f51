import math

import pytest
from scipy import constants

from src.errors import ConfigParseError
from src.units import NaturalUnits
from src.utils.table_io import format_value, read_trajectory, render_gnuplot, render_table, units_line


def test_format_value():
    assert format_value(1.0) == "1.000000000000e+00"
    assert format_value(-2.5e-7) == "-2.500000000000e-07"
    assert format_value(math.nan) == "nan"
    assert format_value("T0_only") == "T0_only"
    assert format_value(3) == "3"
    assert format_value(None) == ""


def test_render_table():
    text = render_table(["v", "F", "flags"], [[1.0, -2.0, "ok"], [2.0, math.nan, "regime;small_m"]],
                        [units_line({"v": "m/s", "F": "Pa"}), "config_sha256: abc"])
    lines = text.splitlines()
    assert lines[0] == "# units: v=m/s, F=Pa"
    assert lines[1] == "# config_sha256: abc"
    assert lines[2] == "v,F,flags"
    assert lines[3] == "1.000000000000e+00,-2.000000000000e+00,ok"
    assert lines[4].endswith(",nan,regime;small_m")


def test_render_gnuplot():
    text = render_gnuplot([1.0, 2.0], [3.0, 4.0], ["v F"])
    assert text.splitlines() == ["# v F", "1.000000000000e+00 3.000000000000e+00",
                                 "2.000000000000e+00 4.000000000000e+00"]


def test_read_trajectory(tmp_path):
    path = tmp_path / "loop.dat"
    path.write_text("# units: time=fs, length=nm, v=1 m/s\n"
                    "0 0 0\n"
                    "1 1 0\n"
                    "2 0 0\n")
    traj = read_trajectory(str(path), NaturalUnits())
    fs = constants.femto * constants.eV / constants.hbar
    assert traj.n_nodes == 3
    assert traj.t_end == pytest.approx(2.0 * fs)
    assert traj.x[1] == pytest.approx(1.0)
    assert traj.is_closed
    assert traj.speed_scale == pytest.approx(NaturalUnits().to_natural(1.0, "m/s", "velocity"))


def test_trajectory_header_is_required(tmp_path):
    path = tmp_path / "bare.dat"
    path.write_text("0 0 0\n1 1 0\n")
    with pytest.raises(ConfigParseError, match="units"):
        read_trajectory(str(path), NaturalUnits())


def test_trajectory_errors(tmp_path):
    path = tmp_path / "bad.dat"
    path.write_text("# units: time=fs, length=nm\n0 0\n1 1\n")
    with pytest.raises(ConfigParseError, match="3 columns"):
        read_trajectory(str(path), NaturalUnits())
    path.write_text("# units: time=fs\n0 0 0\n1 1 0\n")
    with pytest.raises(ConfigParseError, match="length"):
        read_trajectory(str(path), NaturalUnits())
    path.write_text("# units: time=fs, length=nm\n0 0 0\n0 1 0\n")
    with pytest.raises(ConfigParseError, match="increasing"):
        read_trajectory(str(path), NaturalUnits())


def test_speed_entry_in_units_header(tmp_path):
    path = tmp_path / "loop.dat"
    body = "0 0 0\n1 1 0\n2 0 0\n"
    units = NaturalUnits()

    path.write_text("# units: time=nat, length=nat, v=.5 m/s\n" + body)
    assert read_trajectory(str(path), units).speed_scale == pytest.approx(units.to_natural(0.5, "m/s", "velocity"))
    path.write_text("# units: time=nat, length=nat, v=m/s\n" + body)
    assert read_trajectory(str(path), units).speed_scale == pytest.approx(units.to_natural(1.0, "m/s", "velocity"))

    for entry, message in (("v=", "v is empty"), ("v=2", "lacks a unit"), ("v=-1 m/s", "positive"),
                           ("v=1 parsec", "unknown unit")):
        path.write_text(f"# comment\n# units: time=nat, length=nat, {entry}\n" + body)
        with pytest.raises(ConfigParseError, match=message) as info:
            read_trajectory(str(path), units)
        assert info.value.line == 2
