import csv
import io
import math
import re
import sys
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import ConfigParseError, DomainError
from ..physics.trajectory import Trajectory
from ..units import NaturalUnits, parse_quantity
from .logger import logger

FLOAT_FORMAT = "{:.12e}"

_UNITS_HEADER = re.compile(r"^#\s*units\s*:\s*(.*)$", re.IGNORECASE)


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "nan"
    return FLOAT_FORMAT.format(value)


def render_table(columns: Sequence[str], rows: Iterable[Sequence], header: Sequence[str] = ()) -> str:
    """CSV text with ``# key: value`` header lines before the column names."""
    buffer = io.StringIO()
    for line in header:
        buffer.write(f"# {line}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def render_gnuplot(x: Sequence[float], y: Sequence[float], header: Sequence[str] = ()) -> str:
    lines = [f"# {line}" for line in header]
    lines += [f"{format_value(a)} {format_value(b)}" for a, b in zip(x, y)]
    return "\n".join(lines) + "\n"


def write_text(text: str, path: Optional[str] = None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info(f"Results saved to: {path}")


def _parse_units_header(line: str, number: int, path: str) -> Dict[str, str]:
    fields = {}
    for item in line.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise ConfigParseError(f"malformed units entry {item.strip()!r}", number, path)
        key, value = item.split("=", 1)
        fields[key.strip().lower()] = value.strip()
    missing = [k for k in ("time", "length") if k not in fields]
    if missing:
        raise ConfigParseError(f"units header lacks {', '.join(missing)}", number, path)
    if "v" in fields:
        _speed_quantity(fields["v"], number, path)
    return fields


def _speed_quantity(text: str, number: int, path: str) -> Tuple[float, str]:
    """``v=<value> <unit>`` or a bare unit meaning one of it."""
    if not text:
        raise ConfigParseError("units entry v is empty", number, path)
    try:
        value, unit = parse_quantity(text)
    except DomainError:
        return 1.0, text
    if not unit:
        raise ConfigParseError(f"units entry v={text} lacks a unit", number, path)
    if not value > 0:
        raise ConfigParseError(f"units entry v must be positive, got {text}", number, path)
    return value, unit


def read_trajectory(path: str, units: NaturalUnits) -> Trajectory:
    """Read ``t x y`` rows below a ``# units: time=<u>, length=<u>[, v=<speed>]`` header."""
    fields: Optional[Dict[str, str]] = None
    header_line = 1
    try:
        with open(path, "r", encoding="utf-8") as f:
            for number, line in enumerate(f, start=1):
                stripped = line.strip()
                if not stripped:
                    continue
                if not stripped.startswith("#"):
                    break
                match = _UNITS_HEADER.match(stripped)
                if match:
                    fields = _parse_units_header(match.group(1), number, path)
                    header_line = number
        data = np.loadtxt(path, comments="#", delimiter=None, ndmin=2)
    except OSError as e:
        raise ConfigParseError(f"cannot read trajectory: {e.strerror}", source=path) from None
    except ValueError as e:
        raise ConfigParseError(f"malformed trajectory table: {e}", source=path) from None
    if fields is None:
        raise ConfigParseError("trajectory file needs a '# units:' header", 1, path)
    if data.shape[1] != 3:
        raise ConfigParseError(f"trajectory rows need 3 columns (t x y), got {data.shape[1]}", source=path)

    try:
        t_scale = units.to_natural(1.0, fields["time"], "time")
        l_scale = units.to_natural(1.0, fields["length"], "length")
        speed_scale = 1.0
        if "v" in fields:
            value, unit = _speed_quantity(fields["v"], header_line, path)
            speed_scale = units.to_natural(value, unit, "velocity")
    except DomainError as e:
        raise ConfigParseError(str(e), header_line, path) from None
    try:
        return Trajectory(data[:, 0] * t_scale, data[:, 1] * l_scale, data[:, 2] * l_scale,
                          speed_scale=speed_scale)
    except DomainError as e:
        raise ConfigParseError(str(e), source=path) from None


def units_line(labels: Dict[str, str]) -> str:
    return "units: " + ", ".join(f"{k}={v}" for k, v in labels.items())


def columns_of(rows: List[Sequence], index: int) -> List:
    return [row[index] for row in rows]
