import math

import pytest
from scipy import constants

from src.errors import DomainError
from src.units import NaturalUnits, parse_quantity


@pytest.fixture
def units() -> NaturalUnits:
    return NaturalUnits()


def test_parse_quantity():
    assert parse_quantity("10 nm") == (10.0, "nm")
    assert parse_quantity(" 2.5e3   m/s ") == (2500.0, "m/s")
    assert parse_quantity("7") == (7.0, "")
    with pytest.raises(DomainError):
        parse_quantity("ten nm")
    with pytest.raises(DomainError):
        parse_quantity("   ")


def test_scales_of_default_units(units):
    assert units.to_natural(1.0, "nm", "length") == pytest.approx(1.0)
    assert units.to_natural(1.0, "eV", "energy") == pytest.approx(1.0)
    assert units.to_natural(1.0, "eV", "frequency") == pytest.approx(1.0)
    one_ev_in_kelvin = constants.eV / constants.k
    assert units.to_natural(one_ev_in_kelvin, "K", "temperature") == pytest.approx(1.0)
    natural_speed = constants.nano * constants.eV / constants.hbar
    assert units.to_natural(natural_speed, "m/s", "velocity") == pytest.approx(1.0)
    assert units.to_natural(1.0, "fs", "time") == pytest.approx(constants.femto * constants.eV / constants.hbar)


def test_frequency_units(units):
    assert units.to_natural(1.0, "Hz", "frequency") == pytest.approx(
        units.to_natural(2.0 * math.pi, "rad/s", "frequency"))


def test_round_trip_to_si(units):
    value = units.to_natural(300.0, "K", "temperature")
    assert units.from_natural(value, "temperature") == pytest.approx(300.0)


def test_natural_and_dimensionless(units):
    assert units.to_natural(3.5, "nat", "velocity") == 3.5
    assert units.to_natural(0.25, "", "dimensionless") == 0.25


def test_unit_errors(units):
    with pytest.raises(DomainError, match="missing unit"):
        units.to_natural(10.0, "", "length")
    with pytest.raises(DomainError, match="expected a velocity"):
        units.to_natural(1.0, "nm", "velocity")
    with pytest.raises(DomainError, match="unknown unit"):
        units.to_natural(1.0, "furlong", "length")
    with pytest.raises(DomainError):
        units.scale("charge")


def test_from_strings():
    units = NaturalUnits.from_strings("2 eV", "1 A")
    assert units.energy == pytest.approx(2.0 * constants.eV)
    assert units.length == pytest.approx(constants.angstrom)
    assert units.parse("2 eV", "energy") == pytest.approx(1.0)
    with pytest.raises(DomainError):
        NaturalUnits.from_strings("1 nm", "1 nm")
