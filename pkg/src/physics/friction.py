"""Friction laws of Drude plates and the torque on a rotating disc."""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Union

import numpy as np

from ..errors import AccuracyError, DomainError
from ..utils.logger import logger
from .dissipation import PlateConfig
from .quadrature import adaptive_quad
from .response import DrudeMetal

DEFAULT_REGIME_RATIO = 10.0


class LawKind(Enum):
    T0_CUBIC = "T0"
    FINITE_T_LINEAR = "finiteT"


@dataclass(frozen=True)
class DiscSpec:
    radius: float
    omega: float

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError(f"disc radius must be positive, got {self.radius}")

    @property
    def rim_speed(self) -> float:
        return abs(self.omega) * self.radius


@dataclass(frozen=True)
class FrictionLaw:
    kind: LawKind
    coefficient: float

    def __post_init__(self):
        if not self.coefficient >= 0:
            raise DomainError("friction coefficient must be non-negative")

    def force(self, v):
        """Force per unit area opposing the velocity v."""
        v = np.asarray(v, dtype=float)
        value = -self.coefficient * (v ** 3 if self.kind is LawKind.T0_CUBIC else v)
        return value if value.ndim else float(value)

    @property
    def breakpoints(self) -> tuple:
        return ()


@dataclass(frozen=True)
class TabulatedLaw:
    """Force per area sampled at non-negative speeds, extended as an odd function."""

    velocities: tuple
    forces: tuple
    _v: np.ndarray = field(init=False, repr=False, compare=False)
    _f: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        v = np.asarray(self.velocities, dtype=float)
        f = np.asarray(self.forces, dtype=float)
        if v.ndim != 1 or v.shape != f.shape or v.size < 2:
            raise DomainError("tabulated law needs at least two (v, F) samples")
        if v[0] < 0 or np.any(np.diff(v) <= 0):
            raise DomainError("tabulated speeds must be non-negative and increasing")
        object.__setattr__(self, "_v", v)
        object.__setattr__(self, "_f", f)

    def force(self, v):
        v = np.asarray(v, dtype=float)
        speed = np.abs(v)
        if np.any(speed > self._v[-1] * (1 + 1e-12)):
            raise DomainError(f"speed {float(speed.max()):.6g} beyond tabulated range {self._v[-1]:.6g}")
        value = np.sign(v) * np.interp(speed, self._v, self._f)
        return value if value.ndim else float(value)

    @property
    def breakpoints(self) -> tuple:
        return tuple(self._v.tolist())


@dataclass(frozen=True)
class TorqueEstimate:
    value: float
    error: float
    n_annuli: Optional[int]


Law = Union[FrictionLaw, TabulatedLaw]


def _dissipation_constant(metal: DrudeMetal, override: Optional[float]) -> float:
    return metal.dissipation_constant if override is None else override


def regime_ok(config: PlateConfig, v: float, ratio: float = DEFAULT_REGIME_RATIO) -> bool:
    """True when d/(beta v) exceeds ``ratio`` (always true at T = 0 or v = 0)."""
    if config.thermal.is_zero or v == 0:
        return True
    return config.d / (config.thermal.beta * abs(v)) > ratio


def coefficient_T0(metal: DrudeMetal, config: PlateConfig, dissipation_constant: Optional[float] = None) -> float:
    d_const = _dissipation_constant(metal, dissipation_constant)
    return 15.0 * math.pi ** 2 / (64.0 * config.d ** 6) * config.rho1 * config.rho2 * d_const ** 2


def coefficient_finiteT(metal: DrudeMetal, config: PlateConfig, dissipation_constant: Optional[float] = None,
                        velocities: Iterable[float] = (), regime_ratio: float = DEFAULT_REGIME_RATIO) -> float:
    if config.thermal.is_zero:
        raise DomainError("the linear friction coefficient needs a finite temperature")
    for v in velocities:
        if not regime_ok(config, v, regime_ratio):
            logger.warning(
                f"d/(beta v) = {config.d / (config.thermal.beta * abs(v)):.3g} at v = {v:.4g} "
                f"is not large compared to 1; the linear law is outside its range"
            )
    d_const = _dissipation_constant(metal, dissipation_constant)
    beta = config.thermal.beta
    return math.pi ** 4 / (4.0 * beta ** 2 * config.d ** 4) * config.rho1 * config.rho2 * d_const ** 2


def law_for(metal: DrudeMetal, config: PlateConfig, dissipation_constant: Optional[float] = None) -> FrictionLaw:
    if config.thermal.is_zero:
        return FrictionLaw(LawKind.T0_CUBIC, coefficient_T0(metal, config, dissipation_constant))
    return FrictionLaw(LawKind.FINITE_T_LINEAR, coefficient_finiteT(metal, config, dissipation_constant))


def torque_T0(disc: DiscSpec, c_p: float) -> float:
    return -(math.pi / 3.0) * c_p * disc.radius ** 6 * disc.omega ** 3


def torque_finiteT(disc: DiscSpec, c: float) -> float:
    return -(math.pi / 2.0) * c * disc.radius ** 4 * disc.omega


def _annulus_sum(disc: DiscSpec, law: Law, n: int) -> float:
    edges = np.linspace(0.0, disc.radius, n + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    areas = math.pi * (edges[1:] ** 2 - edges[:-1] ** 2)
    return math.fsum((mid * np.asarray(law.force(disc.omega * mid)) * areas).tolist())


def torque_numeric(disc: DiscSpec, law: Law, n_annuli: Optional[int] = None,
                   tolerance: Optional[float] = None) -> TorqueEstimate:
    """Torque from the local force law integrated over the disc.

    ``n_annuli=None`` integrates adaptively in r; an integer uses mid-radius
    annuli with exact areas and a Richardson estimate against twice as many.
    ``tolerance`` is relative; exceeding it raises AccuracyError.
    """
    if n_annuli is None:
        points = [v / abs(disc.omega) for v in law.breakpoints if disc.omega != 0]
        value, error = adaptive_quad(
            lambda r: 2.0 * math.pi * r * r * float(law.force(disc.omega * r)),
            0.0, disc.radius, rel_tol=1e-13, abs_tol=0.0, limit=200, points=points,
            label="torque integral",
        )
    else:
        if n_annuli < 1:
            raise DomainError("n_annuli must be at least 1")
        value = _annulus_sum(disc, law, n_annuli)
        finer = _annulus_sum(disc, law, 2 * n_annuli)
        error = abs(finer - value) * 4.0 / 3.0
    if tolerance is not None and error > tolerance * abs(value):
        raise AccuracyError(
            f"torque with {n_annuli or 'adaptive'} annuli misses relative tolerance {tolerance:.1e}",
            value, error,
        )
    return TorqueEstimate(value, error, n_annuli)


def frictional_power(disc: DiscSpec, law: Law) -> float:
    """Power dissipated over the disc area, from the local law -F(v) v."""
    def local(r: float) -> float:
        v = disc.omega * r
        return -float(law.force(v)) * v * 2.0 * math.pi * r

    points = [v / abs(disc.omega) for v in law.breakpoints if disc.omega != 0]
    value, _ = adaptive_quad(local, 0.0, disc.radius, rel_tol=1e-13, limit=200, points=points,
                             label="frictional power")
    return value
