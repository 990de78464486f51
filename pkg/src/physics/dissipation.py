"""Dissipated energy per unit area between two Drude half-spaces.

The pipeline works in the large-duration limit: every segment of the loop
contributes the delta comb of ``delta_I_limit``, whose only physical centre
is the positive frequency |k.u| with weight (pi/2) * duration * |k.u|. That
frequency is matched against the oscillator channel of the regime
(omega_+ = m1 + m2 at zero temperature, omega_- = |m1 - m2| at finite
temperature), the Drude density of ``alpha_imag_density`` fixes the channel
weights, and ``j_of_omega_v`` combines them with the spectral weight. The
remaining k-plane integral is done in polar form with the z-integrals of the
kernel taken analytically.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Tuple

import numpy as np

from ..errors import AccuracyError, DomainError, SingularKernelError, SingularMappingError
from ..utils.logger import logger
from .quadrature import adaptive_quad, gauss_legendre_panels
from .response import (
    DrudeMetal,
    ResponseCoefficients,
    ThermalState,
    alpha_imag_density,
    channel_weights,
    drude_epsilon_real,
)
from .trajectory import Segment, Trajectory, WaveVector, delta_I_limit, segmentize, speed_histogram


class BandMode(Enum):
    ZERO_TEMPERATURE = "T0"
    FINITE_TEMPERATURE = "finiteT"


@dataclass(frozen=True)
class PlateConfig:
    d: float
    rho1: float
    rho2: float
    thermal: ThermalState

    def __post_init__(self):
        if not self.d > 0:
            raise DomainError(f"gap must be positive, got {self.d}")
        if not (self.rho1 >= 0 and self.rho2 >= 0):
            raise DomainError("number densities must be non-negative")

    @classmethod
    def for_metal(cls, metal: DrudeMetal, d: float, thermal: ThermalState) -> "PlateConfig":
        return cls(d, metal.density, metal.density, thermal)


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-8
    k_max_factor: float = 40.0
    m_max: Optional[float] = None
    max_subdivisions: int = 200
    max_velocity_change: float = 0.01
    m_panel_nodes: int = 20
    thermal_cutoff: float = 80.0
    oracle_rel_tol: float = 1e-11

    def __post_init__(self):
        if not 0 < self.rel_tol < 1:
            raise DomainError("rel_tol must lie in (0, 1)")
        if not 0 < self.oracle_rel_tol < 1:
            raise DomainError("oracle_rel_tol must lie in (0, 1)")
        if not (self.k_max_factor > 0 and self.max_subdivisions > 0 and self.m_panel_nodes > 0
                and self.thermal_cutoff > 0):
            raise DomainError("quadrature limits must be positive")
        if self.m_max is not None and not self.m_max > 0:
            raise DomainError("m_max must be positive")
        if self.max_velocity_change < 0:
            raise DomainError("max_velocity_change must be non-negative")


@dataclass(frozen=True)
class DissipationResult:
    energy: float
    error: float
    duration: float
    path_length: float
    mode: BandMode

    @property
    def power(self) -> float:
        return self.energy / self.duration if self.duration > 0 else 0.0

    @property
    def mean_force(self) -> float:
        """Work per distance travelled; equals -F for a constant-speed loop."""
        return self.energy / self.path_length if self.path_length > 0 else 0.0


def coulomb_dipole_hat(z0: float, wv: WaveVector) -> float:
    if wv.k == 0:
        raise SingularKernelError("dipole kernel is singular at k = 0")
    return 2.0 * math.pi * math.exp(-wv.k * abs(z0)) / wv.k


def g_kernel(z0: float, q: float) -> float:
    if not q > 0:
        raise DomainError(f"g_kernel needs q > 0, got {q}")
    return (2.0 * q * q) ** 2 * coulomb_dipole_hat(z0, WaveVector(q)) ** 2


def halfspace_z_integral(q: float, d: float) -> float:
    if not q > 0:
        raise DomainError(f"halfspace_z_integral needs q > 0, got {q}")
    if d < 0:
        raise DomainError(f"gap must be non-negative, got {d}")
    return math.exp(-2.0 * q * d) / (2.0 * q) ** 2


def j_of_omega_v(i_minus: float, i_plus: float, coeffs: ResponseCoefficients) -> float:
    return coeffs.c_minus * i_minus + coeffs.c_plus * i_plus


def epsilon_substitution(eps):
    """Half-space factor (eps - 1) / (eps + 1) replacing 2 pi rho alpha."""
    if isinstance(eps, complex):
        if eps == -1:
            raise SingularMappingError("substitution is singular at eps = -1")
        if math.isinf(abs(eps)):
            return 1.0 + 0j
        return (eps - 1.0) / (eps + 1.0)
    eps = float(eps)
    if eps <= -1.0:
        raise SingularMappingError(f"substitution is singular for eps <= -1, got {eps}")
    if math.isinf(eps):
        return 1.0
    return (eps - 1.0) / (eps + 1.0)


def effective_dissipation_constant(metal: DrudeMetal, m: float) -> float:
    """D recovered from Im[(eps - 1)/(eps + 1)] of the Drude metal at real frequency m."""
    ratio = epsilon_substitution(complex(drude_epsilon_real(m, metal)))
    return ratio.imag / (2.0 * math.pi ** 2 * metal.density * m)


def resolve_mode(mode: Optional[BandMode], thermal: ThermalState) -> BandMode:
    inferred = BandMode.ZERO_TEMPERATURE if thermal.is_zero else BandMode.FINITE_TEMPERATURE
    if mode is None:
        return inferred
    if mode is not inferred:
        raise DomainError(f"mode {mode.value} is inconsistent with beta = {thermal.beta}")
    return mode


class _ChannelLine:
    """Drude-weighted oscillator channel restricted to the line channel(m1, m2) = w."""

    def __init__(self, mode: BandMode, metal: DrudeMetal, dissipation_constant: float, m_cap: float,
                 beta: float, spec: QuadratureSpec):
        self.mode = mode
        self.metal = metal
        self.dissipation_constant = dissipation_constant
        self.m_cap = m_cap
        self.beta = beta
        self.nodes = spec.m_panel_nodes
        if mode is BandMode.FINITE_TEMPERATURE:
            self.m_hi = min(m_cap, spec.thermal_cutoff / beta)
            if m_cap < spec.thermal_cutoff / beta:
                logger.warning_once(
                    f"thermal-window:{m_cap}:{beta}",
                    f"spectral cutoff m_max = {m_cap:.4g} truncates the thermal window "
                    f"{spec.thermal_cutoff:.0f}/beta = {spec.thermal_cutoff / beta:.4g}",
                )
        else:
            self.m_hi = m_cap

    def strength(self, m: np.ndarray) -> np.ndarray:
        """Oscillator strength a(m) with m1 m2 a(m1) a(m2) / 4 = density(m1) density(m2)."""
        density = alpha_imag_density(m, self.metal, cutoff=self.m_cap,
                                     dissipation_constant=self.dissipation_constant)
        return 2.0 * density.value / m

    def coefficients(self, w: float) -> ResponseCoefficients:
        """Channel weights C-, C+ integrated along the line, for w > 0."""
        if w <= 0:
            return ResponseCoefficients(0.0, 0.0, 0.0)
        if self.mode is BandMode.ZERO_TEMPERATURE:
            lo, hi = max(0.0, w - self.m_hi), min(w, self.m_hi)
            if hi <= lo:
                return ResponseCoefficients(0.0, 0.0, 0.0)
            m1, weights = gauss_legendre_panels(lo, hi, 1, self.nodes)
            m2 = w - m1
            _, c_plus, _ = channel_weights(m1, m2, self.strength(m1), self.strength(m2), math.inf)
            return ResponseCoefficients(0.0, float(np.dot(weights, c_plus)), 0.0)

        span = self.m_hi - w
        if span <= 0:
            return ResponseCoefficients(0.0, 0.0, 0.0)
        n_panels = max(1, int(math.ceil(span * self.beta / 4.0)))
        m1, weights = gauss_legendre_panels(0.0, span, n_panels, self.nodes)
        m2 = m1 + w
        c_minus, _, _ = channel_weights(m1, m2, self.strength(m1), self.strength(m2), self.beta)
        # m2 = m1 + w and m1 = m2 + w contribute equally
        return ResponseCoefficients(2.0 * float(np.dot(weights, c_minus)), 0.0, 0.0)

    def rate(self, w: float) -> float:
        """Dissipation per unit time at Doppler frequency w, for spectral weight (pi/2)|w| per unit time."""
        w = abs(w)
        weight = 0.5 * math.pi * w
        return j_of_omega_v(weight, weight, self.coefficients(w))


def _comb_dissipation(seg: Segment, wv: WaveVector, line: _ChannelLine) -> float:
    """Channel response summed over the positive delta centres of one segment at wv."""
    total = 0.0
    for term in delta_I_limit(seg, wv).terms():
        if term.center > 0:
            total += j_of_omega_v(term.weight, term.weight, line.coefficients(term.center))
    return total


def _group_energy(seg: Segment, line: _ChannelLine, config: PlateConfig, k_max: float,
                  spec: QuadratureSpec) -> Tuple[float, float]:
    """k-plane integral for one segment, the velocity direction taken as phi = 0."""
    angular_points = (0.5 * math.pi, math.pi, 1.5 * math.pi)

    def angular(k: float) -> float:
        value, _ = adaptive_quad(lambda phi: _comb_dissipation(seg, WaveVector(k, phi), line),
                                 0.0, 2.0 * math.pi, spec.rel_tol, limit=spec.max_subdivisions,
                                 points=angular_points, label="angular average")
        return value

    def radial(k: float) -> float:
        return k * g_kernel(0.0, k) * halfspace_z_integral(k, config.d) * angular(k)

    return adaptive_quad(radial, 0.0, k_max, spec.rel_tol, limit=spec.max_subdivisions,
                         label="k integral")


def band_integrate(traj: Trajectory, config: PlateConfig, metal: DrudeMetal,
                   spec: Optional[QuadratureSpec] = None, mode: Optional[BandMode] = None,
                   threads: int = 1, dissipation_constant: Optional[float] = None) -> DissipationResult:
    """Energy dissipated per unit plate area over one traversal of ``traj``.

    Segments moving at the same speed share one delta-limit evaluation: the
    angular average makes the result independent of direction and the delta
    weights are linear in duration, so each speed group is represented by a
    single segment along x carrying the group's total duration.
    """
    spec = spec or QuadratureSpec()
    traj.require_closed()
    mode = resolve_mode(mode, config.thermal)
    d_const = metal.dissipation_constant if dissipation_constant is None else dissipation_constant
    m_cap = spec.m_max if spec.m_max is not None else metal.m_max
    k_max = spec.k_max_factor / config.d

    histogram = speed_histogram(segmentize(traj, spec.max_velocity_change))
    groups: List[Segment] = [Segment(0.0, 0.5 * duration, 0.0, 0.0, speed, 0.0)
                             for speed, duration in histogram.items() if speed > 0]
    if not groups or config.rho1 == 0 or config.rho2 == 0 or d_const == 0:
        return DissipationResult(0.0, 0.0, traj.duration, traj.path_length, mode)

    fastest = max(seg.speed for seg in groups)
    if mode is BandMode.ZERO_TEMPERATURE and k_max * fastest > m_cap:
        logger.warning_once(
            f"zero-temperature-cutoff:{m_cap}",
            f"Doppler frequency k_max*v = {k_max * fastest:.4g} exceeds the small-m cutoff {m_cap:.4g}",
        )
    line = _ChannelLine(mode, metal, d_const, m_cap, config.thermal.beta, spec)

    def work(seg: Segment) -> Tuple[float, float]:
        return _group_energy(seg, line, config, k_max, spec)

    logger.debug(f"band_integrate: {len(groups)} speed group(s), mode {mode.value}, threads {threads}")
    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as pool:
        parts = list(pool.map(work, groups))

    prefactor = config.rho1 * config.rho2 / (2.0 * math.pi) ** 2
    energy = prefactor * math.fsum(p[0] for p in parts)
    error = prefactor * math.fsum(p[1] for p in parts)
    if energy < -error:
        raise AccuracyError("dissipated energy came out negative beyond its quadrature error", energy, error)
    return DissipationResult(energy, error, traj.duration, traj.path_length, mode)


def rate_function(metal: DrudeMetal, config: PlateConfig, spec: Optional[QuadratureSpec] = None,
                  dissipation_constant: Optional[float] = None) -> Callable[[float], float]:
    """Channel rate J(w) used by band_integrate, exposed for inspection."""
    spec = spec or QuadratureSpec()
    mode = resolve_mode(None, config.thermal)
    d_const = metal.dissipation_constant if dissipation_constant is None else dissipation_constant
    m_cap = spec.m_max if spec.m_max is not None else metal.m_max
    return _ChannelLine(mode, metal, d_const, m_cap, config.thermal.beta, spec).rate
