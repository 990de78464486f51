import configparser
import hashlib
import math
import os
import re
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from dotenv import load_dotenv

from .errors import ConfigParseError, DomainError
from .physics.dissipation import PlateConfig, QuadratureSpec
from .physics.response import DrudeMetal, ThermalState
from .units import NaturalUnits

# Load environment variables
load_dotenv()

SECTIONS = ("units", "metal", "plates", "trajectory", "quadrature", "run")
CHECK_NAMES = ("torque", "sinc_window", "qhat", "delta_limit", "pair", "pipeline")
SHAPES = ("rectilinear", "square", "circle", "file")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigParseError(f"{name} must be an integer, got {raw!r}", source="environment") from None


def _env_float(name: str) -> Optional[float]:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        return float(raw)
    except ValueError:
        raise ConfigParseError(f"{name} must be a number, got {raw!r}", source="environment") from None


class Config:
    def __init__(self):
        # Worker threads for quadrature fan-out
        self.threads = _env_int("CF_THREADS", 1)
        # Acceptance tolerance override for torque rows and checks
        self.tolerance = _env_float("CF_TOLERANCE")
        self.out = os.getenv("CF_OUT") or None
        self.config_path = os.getenv("CF_CONFIG") or None

        # Logging
        self.debug = os.getenv("CF_DEBUG", "false").lower() == "true"

    @staticmethod
    def section_overrides() -> Dict[Tuple[str, str], str]:
        """CF_<SECTION>_<KEY> variables, keyed by (section, key)."""
        overrides = {}
        for name, value in sorted(os.environ.items()):
            if not name.startswith("CF_"):
                continue
            rest = name[3:].lower()
            for section in SECTIONS:
                if rest.startswith(section + "_") and len(rest) > len(section) + 1:
                    overrides[(section, rest[len(section) + 1:])] = value
        return overrides


config = Config()


@dataclass(frozen=True)
class TrajectorySettings:
    shape: str = "rectilinear"
    leg_duration: float = 1000.0
    radius: float = 10.0
    nodes: int = 360
    angle: float = 0.0
    file: Optional[str] = None


@dataclass(frozen=True)
class RunSettings:
    velocities: Tuple[float, ...] = ()
    angular_velocities: Tuple[float, ...] = ()
    n_annuli: Optional[int] = None
    regime_ratio: float = 10.0
    tolerance: float = 1e-9
    checks: Tuple[str, ...] = CHECK_NAMES
    pair_periods: float = 200.0
    seed: int = 1234
    output_units: str = "si"


@dataclass(frozen=True)
class RunConfig:
    units: NaturalUnits
    metal: DrudeMetal
    plates: PlateConfig
    radius: float
    trajectory: TrajectorySettings
    quadrature: QuadratureSpec
    run: RunSettings
    dissipation_constant: Optional[float] = None
    source: str = "<defaults>"
    sha256: str = field(default="", compare=False)

    @property
    def natural_output(self) -> bool:
        return self.run.output_units == "natural"


def _line_of(text: str, section: str, key: str) -> Optional[int]:
    current = None
    pattern = re.compile(rf"^\s*{re.escape(key)}\s*[=:]", re.IGNORECASE)
    for number, line in enumerate(text.splitlines(), start=1):
        header = re.match(r"^\s*\[([^\]]+)\]", line)
        if header:
            current = header.group(1).strip().lower()
            continue
        if current == section and pattern.match(line):
            return number
    return None


class _Reader:
    """Typed access to parsed sections with line-numbered errors."""

    def __init__(self, parser: configparser.ConfigParser, text: str, source: str,
                 overrides: Dict[Tuple[str, str], str], units: Optional[NaturalUnits] = None):
        self.parser = parser
        self.text = text
        self.source = source
        self.overrides = overrides
        self.units = units or NaturalUnits()

    def fail(self, section: str, key: str, message: str) -> ConfigParseError:
        if (section, key) in self.overrides:
            return ConfigParseError(f"[{section}] {key}: {message}",
                                    source=f"CF_{section.upper()}_{key.upper()}")
        return ConfigParseError(f"[{section}] {key}: {message}", _line_of(self.text, section, key), self.source)

    def raw(self, section: str, key: str) -> Optional[str]:
        if not self.parser.has_section(section) or not self.parser.has_option(section, key):
            return None
        return self.parser.get(section, key).strip()

    def quantity(self, section: str, key: str, dimension: str, default: Optional[float] = None,
                 required: bool = False) -> Optional[float]:
        text = self.raw(section, key)
        if text is None or text == "":
            if required:
                raise ConfigParseError(f"[{section}] {key} is required", source=self.source)
            return default
        try:
            return self.units.parse(text, dimension)
        except DomainError as e:
            raise self.fail(section, key, str(e)) from None

    def number(self, section: str, key: str, default, cast=float):
        text = self.raw(section, key)
        if text is None or text == "":
            return default
        try:
            return cast(text)
        except ValueError:
            raise self.fail(section, key, f"expected a {cast.__name__}, got {text!r}") from None

    def word(self, section: str, key: str, default: str, choices: Tuple[str, ...]) -> str:
        text = self.raw(section, key)
        if text is None or text == "":
            return default
        if text.lower() not in choices:
            raise self.fail(section, key, f"expected one of {', '.join(choices)}, got {text!r}")
        return text.lower()

    def grid(self, section: str, key: str, dimension: str) -> Tuple[float, ...]:
        text = self.raw(section, key)
        if text is None:
            return ()
        try:
            return tuple(parse_grid(text, self.units, dimension).tolist())
        except DomainError as e:
            raise self.fail(section, key, str(e)) from None


def parse_grid(text: str, units: NaturalUnits, dimension: str) -> np.ndarray:
    """``log a b n unit``, ``lin a b n unit``, ``list v1 ... unit`` or empty."""
    tokens = text.split()
    if not tokens:
        return np.empty(0)
    kind, rest = tokens[0].lower(), tokens[1:]
    unit = ""
    if rest:
        try:
            float(rest[-1])
        except ValueError:
            unit = rest[-1]
            rest = rest[:-1]
    try:
        numbers = [float(tok) for tok in rest]
    except ValueError:
        raise DomainError(f"malformed grid {text!r}") from None

    if kind in ("log", "lin"):
        if len(numbers) != 3 or numbers[2] != int(numbers[2]) or numbers[2] < 0:
            raise DomainError(f"{kind} grid needs: start stop count unit")
        start, stop, count = numbers[0], numbers[1], int(numbers[2])
        if kind == "log":
            if start <= 0 or stop <= 0:
                raise DomainError("log grid bounds must be positive")
            values = np.logspace(math.log10(start), math.log10(stop), count)
        else:
            values = np.linspace(start, stop, count)
    elif kind == "list":
        values = np.asarray(numbers, dtype=float)
    else:
        raise DomainError(f"unknown grid kind {tokens[0]!r}; use log, lin or list")
    return np.array([units.to_natural(float(v), unit, dimension) for v in values], dtype=float)


def _parse_checks(reader: _Reader) -> Tuple[str, ...]:
    text = reader.raw("run", "checks")
    if text is None:
        return CHECK_NAMES
    names = tuple(name.strip().lower() for name in text.replace(",", " ").split() if name.strip())
    unknown = [n for n in names if n not in CHECK_NAMES and n != "all"]
    if unknown:
        raise reader.fail("run", "checks", f"unknown check(s) {', '.join(unknown)}")
    return CHECK_NAMES if "all" in names else names


def _read_parser(text: str, source: str) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.MissingSectionHeaderError as e:
        raise ConfigParseError("missing section header", e.lineno, source) from None
    except (configparser.DuplicateSectionError, configparser.DuplicateOptionError) as e:
        raise ConfigParseError(e.message.split(":")[-1].strip() or str(e), e.lineno, source) from None
    except configparser.ParsingError as e:
        line = e.errors[0][0] if e.errors else None
        raise ConfigParseError("malformed line", line, source) from None
    for section in parser.sections():
        if section not in SECTIONS:
            line = next((n for n, l in enumerate(text.splitlines(), start=1)
                         if l.strip().lower() == f"[{section}]"), None)
            raise ConfigParseError(f"unknown section [{section}]", line, source)
    return parser


def build_run_config(text: str, source: str = "<string>",
                     overrides: Optional[Dict[Tuple[str, str], str]] = None) -> RunConfig:
    overrides = dict(overrides or {})
    parser = _read_parser(text, source)
    for (section, key), value in overrides.items():
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, key, value)

    reader = _Reader(parser, text, source, overrides)
    try:
        units = NaturalUnits.from_strings(reader.raw("units", "energy") or "1 eV",
                                          reader.raw("units", "length") or "1 nm")
    except DomainError as e:
        raise ConfigParseError(f"[units] {e}", _line_of(text, "units", "energy"), source) from None
    reader.units = units
    output_units = reader.word("units", "output", "si", ("si", "natural"))

    try:
        metal = DrudeMetal(
            plasma_frequency=reader.quantity("metal", "plasma_frequency", "frequency", required=True),
            relaxation=reader.quantity("metal", "relaxation", "frequency", required=True),
            density=reader.quantity("metal", "density", "density", required=True),
            small_m_cutoff=reader.quantity("metal", "small_m_cutoff", "energy"),
        )
    except DomainError as e:
        raise ConfigParseError(f"[metal] {e}", source=source) from None
    d_const = reader.quantity("metal", "dissipation_constant", "dimensionless")

    gap = reader.quantity("plates", "gap", "length", required=True)
    temperature = reader.quantity("plates", "temperature", "temperature", default=0.0)
    radius = reader.quantity("plates", "radius", "length", default=1.0)
    try:
        thermal = ThermalState.from_temperature(temperature)
        plates = PlateConfig(
            d=gap,
            rho1=reader.quantity("plates", "rho1", "density", default=metal.density),
            rho2=reader.quantity("plates", "rho2", "density", default=metal.density),
            thermal=thermal,
        )
    except DomainError as e:
        raise ConfigParseError(f"[plates] {e}", source=source) from None
    if not radius > 0:
        raise reader.fail("plates", "radius", "disc radius must be positive")

    trajectory = TrajectorySettings(
        shape=reader.word("trajectory", "shape", "rectilinear", SHAPES),
        leg_duration=reader.quantity("trajectory", "leg_duration", "time", default=1000.0),
        radius=reader.quantity("trajectory", "radius", "length", default=10.0),
        nodes=reader.number("trajectory", "nodes", 360, int),
        angle=reader.number("trajectory", "angle", 0.0),
        file=reader.raw("trajectory", "file") or None,
    )

    try:
        quadrature = QuadratureSpec(
            rel_tol=reader.number("quadrature", "rel_tol", 1e-8),
            k_max_factor=reader.number("quadrature", "k_max_factor", 40.0),
            m_max=reader.quantity("quadrature", "m_max", "energy"),
            max_subdivisions=reader.number("quadrature", "max_subdivisions", 200, int),
            max_velocity_change=reader.number("quadrature", "max_velocity_change", 0.01),
            m_panel_nodes=reader.number("quadrature", "m_panel_nodes", 20, int),
        )
    except DomainError as e:
        raise ConfigParseError(f"[quadrature] {e}", source=source) from None

    n_annuli_text = reader.raw("run", "n_annuli")
    n_annuli = None
    if n_annuli_text and n_annuli_text.lower() != "adaptive":
        n_annuli = reader.number("run", "n_annuli", None, int)
        if n_annuli < 1:
            raise reader.fail("run", "n_annuli", "must be at least 1")

    run = RunSettings(
        velocities=reader.grid("run", "velocities", "velocity"),
        angular_velocities=reader.grid("run", "angular_velocities", "frequency"),
        n_annuli=n_annuli,
        regime_ratio=reader.number("run", "regime_ratio", 10.0),
        tolerance=reader.number("run", "tolerance", 1e-9),
        checks=_parse_checks(reader),
        pair_periods=reader.number("run", "pair_periods", 200.0),
        seed=reader.number("run", "seed", 1234, int),
        output_units=output_units,
    )

    digest = hashlib.sha256(text.encode("utf-8"))
    for (section, key), value in sorted(overrides.items()):
        digest.update(f"\n{section}.{key}={value}".encode("utf-8"))

    return RunConfig(
        units=units,
        metal=metal,
        plates=plates,
        radius=radius,
        trajectory=trajectory,
        quadrature=quadrature,
        run=run,
        dissipation_constant=d_const,
        source=source,
        sha256=digest.hexdigest(),
    )


def load_run_config(path: Optional[str] = None, use_environment: bool = True) -> RunConfig:
    """Read an INI run configuration; CF_<SECTION>_<KEY> variables override file values."""
    overrides = Config.section_overrides() if use_environment else {}
    if path is None:
        return build_run_config(DEFAULT_RUN_CONFIG, "<defaults>", overrides)
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ConfigParseError(f"cannot read config: {e.strerror}", source=path) from None
    return build_run_config(text, path, overrides)


DEFAULT_RUN_CONFIG = """\
[units]
energy = 1 eV
length = 1 nm
output = natural

[metal]
plasma_frequency = 1 nat
relaxation = 1 nat
density = 1 nat

[plates]
gap = 1 nat
temperature = 0 nat
radius = 1 nat

[trajectory]
shape = rectilinear
leg_duration = 1000 nat

[run]
velocities = list 1 nat
angular_velocities = list 1 nat
"""
