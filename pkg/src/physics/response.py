"""Two-oscillator Kubo response and the Drude-metal spectral density."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from ..errors import DomainError, NumericRangeError
from ..utils.logger import logger


class Regime(Enum):
    ZERO = "T0"
    FINITE = "finiteT"


@dataclass(frozen=True)
class OscillatorPair:
    alpha1: float
    alpha2: float
    omega1: float
    omega2: float

    def __post_init__(self):
        if not (self.omega1 > 0 and self.omega2 > 0):
            raise DomainError("oscillator frequencies must be positive")
        if not (self.alpha1 >= 0 and self.alpha2 >= 0):
            raise DomainError("polarizabilities must be non-negative")

    @property
    def omega_plus(self) -> float:
        return self.omega1 + self.omega2

    @property
    def omega_minus(self) -> float:
        return abs(self.omega1 - self.omega2)


@dataclass(frozen=True)
class ThermalState:
    """Inverse temperature; ``beta = inf`` is the zero-temperature state."""

    beta: float

    def __post_init__(self):
        if math.isnan(self.beta) or not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta}")

    @classmethod
    def zero(cls) -> "ThermalState":
        return cls(math.inf)

    @classmethod
    def from_temperature(cls, temperature: float) -> "ThermalState":
        if temperature < 0:
            raise DomainError("temperature must be non-negative")
        if temperature == 0:
            return cls.zero()
        return cls(1.0 / temperature)

    @property
    def is_zero(self) -> bool:
        return math.isinf(self.beta)

    @property
    def regime(self) -> Regime:
        return Regime.ZERO if self.is_zero else Regime.FINITE

    @property
    def temperature(self) -> float:
        return 0.0 if self.is_zero else 1.0 / self.beta


@dataclass(frozen=True)
class ResponseCoefficients:
    c_minus: float
    c_plus: float
    h_factor: float


@dataclass(frozen=True)
class DrudeMetal:
    plasma_frequency: float
    relaxation: float
    density: float
    small_m_cutoff: Optional[float] = None

    def __post_init__(self):
        if not (self.plasma_frequency > 0 and self.density > 0):
            raise DomainError("plasma frequency and density must be positive")
        if self.relaxation < 0:
            raise DomainError("relaxation rate must be non-negative")
        if self.small_m_cutoff is not None and not self.small_m_cutoff > 0:
            raise DomainError("small-m cutoff must be positive")

    @property
    def m_max(self) -> float:
        if self.small_m_cutoff is not None:
            return self.small_m_cutoff
        return 0.1 * self.plasma_frequency

    @property
    def dissipation_constant(self) -> float:
        return self.relaxation / (self.density * (math.pi * self.plasma_frequency) ** 2)


@dataclass(frozen=True)
class DensityValue:
    value: Union[float, np.ndarray]
    within_cutoff: bool


def logsinh(x):
    """log(sinh(x)) for x >= 0, free of overflow; -inf at x = 0."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return x + np.log(-np.expm1(-2.0 * x)) - math.log(2.0)


def channel_weights(omega1, omega2, alpha1, alpha2, beta: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Broadcasting form of ``coefficients``: returns (C-, C+, H) arrays."""
    omega1 = np.asarray(omega1, dtype=float)
    omega2 = np.asarray(omega2, dtype=float)
    amplitude = omega1 * omega2 * np.asarray(alpha1, dtype=float) * np.asarray(alpha2, dtype=float) / 4.0
    if math.isinf(beta):
        c_plus = 2.0 * amplitude
        zeros = np.zeros_like(c_plus)
        return zeros, c_plus, zeros

    half = 0.5 * beta
    denominator = logsinh(half * omega1) + logsinh(half * omega2)
    c_plus = amplitude * np.exp(logsinh(half * (omega1 + omega2)) - denominator)
    c_minus = amplitude * np.exp(logsinh(half * np.abs(omega1 - omega2)) - denominator)
    h_factor = amplitude * np.exp(-denominator)
    return c_minus, c_plus, h_factor


def coefficients(pair: OscillatorPair, state: ThermalState) -> ResponseCoefficients:
    c_minus, c_plus, h_factor = channel_weights(
        pair.omega1, pair.omega2, pair.alpha1, pair.alpha2, state.beta
    )
    values = (float(c_minus), float(c_plus), float(h_factor))
    if not all(math.isfinite(v) for v in values):
        raise NumericRangeError(f"non-finite response coefficients {values} at beta={state.beta}")
    return ResponseCoefficients(*values)


def phi_analytic(t, pair: OscillatorPair, state: ThermalState):
    """Response formula without the causal cut."""
    coeffs = coefficients(pair, state)
    t = np.asarray(t, dtype=float)
    value = coeffs.c_minus * np.sin(pair.omega_minus * t) + coeffs.c_plus * np.sin(pair.omega_plus * t)
    return value if value.ndim else float(value)


def phi(t, pair: OscillatorPair, state: ThermalState):
    value = np.where(np.asarray(t, dtype=float) >= 0.0, phi_analytic(t, pair, state), 0.0)
    return value if value.ndim else float(value)


def phi_tail(s: float, pair: OscillatorPair, state: ThermalState,
             coeffs: Optional[ResponseCoefficients] = None) -> float:
    """Abel-regularised integral of phi from s to infinity, s >= 0.

    Pass ``coeffs`` to reuse coefficients already computed for (pair, state).
    """
    if coeffs is None:
        coeffs = coefficients(pair, state)
    total = 0.0
    for c, omega in ((coeffs.c_minus, pair.omega_minus), (coeffs.c_plus, pair.omega_plus)):
        if c != 0.0 and omega > 0.0:
            total += c * math.cos(omega * s) / omega
    return total


def drude_epsilon(xi, metal: DrudeMetal):
    """Drude permittivity at imaginary frequency xi > 0."""
    xi = np.asarray(xi, dtype=float)
    if np.any(~(xi > 0)):
        raise DomainError("drude_epsilon needs xi > 0")
    value = 1.0 + metal.plasma_frequency ** 2 / (xi * (xi + metal.relaxation))
    return value if value.ndim else float(value)


def drude_epsilon_real(omega, metal: DrudeMetal):
    """Complex Drude permittivity on the real frequency axis, omega > 0."""
    omega = np.asarray(omega, dtype=float)
    if np.any(~(omega > 0)):
        raise DomainError("drude_epsilon_real needs omega > 0")
    value = 1.0 - metal.plasma_frequency ** 2 / (omega * (omega + 1j * metal.relaxation))
    return value if value.ndim else complex(value)


def alpha_imag_density(m, metal: DrudeMetal, cutoff: Optional[float] = None,
                       dissipation_constant: Optional[float] = None) -> DensityValue:
    """Small-m spectral density m^2 alpha_I(m^2) = D m.

    Broadcasts over arrays of m; ``within_cutoff`` then covers every entry.
    ``dissipation_constant`` replaces the metal's D when given.
    """
    m = np.asarray(m, dtype=float)
    if np.any(np.isnan(m) | (m < 0)):
        raise DomainError(f"spectral variable must be non-negative, got {m if m.ndim else float(m)}")
    limit = metal.m_max if cutoff is None else cutoff
    top = float(np.max(m)) if m.size else 0.0
    within = top <= limit
    if not within:
        logger.warning_once(
            f"alpha_imag_density:{limit}",
            f"m = {top:.4g} exceeds the small-m cutoff {limit:.4g}; linear density is outside its range",
        )
    d_const = metal.dissipation_constant if dissipation_constant is None else dissipation_constant
    value = d_const * m
    return DensityValue(value if value.ndim else float(value), within)
