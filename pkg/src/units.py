"""Conversion between physical units and the natural units used by the kernels.

Kernels work with hbar = k_B = 1. A NaturalUnits instance fixes the energy and
length scales; time, temperature, frequency and velocity follow from them.
Energy, frequency and temperature share one natural dimension, so a plasma
frequency may be written as ``9 eV`` or as ``1.37e16 rad/s``.
"""

import math
from dataclasses import dataclass
from typing import Dict, Tuple

from scipy import constants

from .errors import DomainError

NATURAL = "nat"

# suffix -> (dimension, SI value of one unit)
UNIT_TABLE: Dict[str, Tuple[str, float]] = {
    "m": ("length", 1.0),
    "cm": ("length", constants.centi),
    "mm": ("length", constants.milli),
    "um": ("length", constants.micro),
    "nm": ("length", constants.nano),
    "pm": ("length", constants.pico),
    "A": ("length", constants.angstrom),
    "s": ("time", 1.0),
    "ms": ("time", constants.milli),
    "us": ("time", constants.micro),
    "ns": ("time", constants.nano),
    "ps": ("time", constants.pico),
    "fs": ("time", constants.femto),
    "J": ("energy", 1.0),
    "eV": ("energy", constants.eV),
    "meV": ("energy", constants.milli * constants.eV),
    "keV": ("energy", constants.kilo * constants.eV),
    "K": ("temperature", 1.0),
    "mK": ("temperature", constants.milli),
    "rad/s": ("frequency", 1.0),
    "Hz": ("frequency", 2.0 * math.pi),
    "kHz": ("frequency", 2.0 * math.pi * constants.kilo),
    "MHz": ("frequency", 2.0 * math.pi * constants.mega),
    "GHz": ("frequency", 2.0 * math.pi * constants.giga),
    "THz": ("frequency", 2.0 * math.pi * constants.tera),
    "m/s": ("velocity", 1.0),
    "km/s": ("velocity", constants.kilo),
    "mm/s": ("velocity", constants.milli),
    "um/s": ("velocity", constants.micro),
    "nm/s": ("velocity", constants.nano),
    "m^-3": ("density", 1.0),
    "cm^-3": ("density", 1.0 / constants.centi ** 3),
    "nm^-3": ("density", 1.0 / constants.nano ** 3),
}

# output dimensions and the SI label written into table headers
SI_LABELS: Dict[str, str] = {
    "length": "m",
    "time": "s",
    "energy": "J",
    "temperature": "K",
    "frequency": "rad/s",
    "velocity": "m/s",
    "density": "m^-3",
    "pressure": "Pa",
    "energy_per_area": "J/m^2",
    "power_per_area": "W/m^2",
    "torque": "N*m",
    "dimensionless": "1",
}

# energy, frequency and temperature are one dimension once hbar = k_B = 1
_NATURAL_CLASS = {
    "energy": "energy",
    "frequency": "energy",
    "temperature": "energy",
}


def _natural_class(dimension: str) -> str:
    return _NATURAL_CLASS.get(dimension, dimension)


def parse_quantity(text: str) -> Tuple[float, str]:
    """Split ``"<number> <unit>"`` into its value and unit suffix."""
    parts = text.strip().split(None, 1)
    if not parts:
        raise DomainError("empty quantity")
    try:
        value = float(parts[0])
    except ValueError:
        raise DomainError(f"not a number: {parts[0]!r}") from None
    unit = parts[1].strip() if len(parts) > 1 else ""
    return value, unit


@dataclass(frozen=True)
class NaturalUnits:
    """Natural unit system fixed by an energy scale and a length scale (both SI)."""

    energy: float = constants.eV
    length: float = constants.nano

    def __post_init__(self):
        if not (self.energy > 0 and self.length > 0):
            raise DomainError("natural unit scales must be positive")

    def scale(self, dimension: str) -> float:
        """SI value of one natural unit of ``dimension``."""
        hbar, k_b = constants.hbar, constants.k
        e0, l0 = self.energy, self.length
        scales = {
            "length": l0,
            "time": hbar / e0,
            "energy": e0,
            "temperature": e0 / k_b,
            "frequency": e0 / hbar,
            "velocity": l0 * e0 / hbar,
            "density": l0 ** -3,
            "pressure": e0 / l0 ** 3,
            "energy_per_area": e0 / l0 ** 2,
            "power_per_area": e0 ** 2 / (hbar * l0 ** 2),
            "torque": e0,
            "dimensionless": 1.0,
        }
        try:
            return scales[dimension]
        except KeyError:
            raise DomainError(f"unknown dimension {dimension!r}") from None

    def to_natural(self, value: float, unit: str, dimension: str) -> float:
        if unit == NATURAL or (dimension == "dimensionless" and unit == ""):
            return float(value)
        if unit == "":
            raise DomainError(f"missing unit suffix for a {dimension} value")
        try:
            unit_dimension, si = UNIT_TABLE[unit]
        except KeyError:
            raise DomainError(f"unknown unit {unit!r}") from None
        if _natural_class(unit_dimension) != _natural_class(dimension):
            raise DomainError(f"unit {unit!r} is a {unit_dimension}, expected a {dimension}")
        return value * si / self.scale(unit_dimension)

    def from_natural(self, value: float, dimension: str) -> float:
        """Convert a natural-unit value to the SI unit listed in SI_LABELS."""
        return value * self.scale(dimension)

    def parse(self, text: str, dimension: str) -> float:
        value, unit = parse_quantity(text)
        return self.to_natural(value, unit, dimension)

    @classmethod
    def from_strings(cls, energy: str = "1 eV", length: str = "1 nm") -> "NaturalUnits":
        e_value, e_unit = parse_quantity(energy)
        l_value, l_unit = parse_quantity(length)
        e_dim, e_si = UNIT_TABLE.get(e_unit, (None, 0.0))
        l_dim, l_si = UNIT_TABLE.get(l_unit, (None, 0.0))
        if e_dim != "energy":
            raise DomainError(f"energy scale needs an energy unit, got {e_unit!r}")
        if l_dim != "length":
            raise DomainError(f"length scale needs a length unit, got {l_unit!r}")
        return cls(energy=e_value * e_si, length=l_value * l_si)

    def describe(self) -> str:
        return f"natural (hbar = k_B = 1; energy = {self.energy:.6e} J, length = {self.length:.6e} m)"
