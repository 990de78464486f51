"""Numerical kernels. Everything here works in natural units, hbar = k_B = 1."""

from .dissipation import (
    BandMode,
    DissipationResult,
    PlateConfig,
    QuadratureSpec,
    band_integrate,
    coulomb_dipole_hat,
    effective_dissipation_constant,
    epsilon_substitution,
    g_kernel,
    halfspace_z_integral,
    j_of_omega_v,
    rate_function,
)
from .friction import (
    DiscSpec,
    FrictionLaw,
    LawKind,
    TabulatedLaw,
    TorqueEstimate,
    coefficient_T0,
    coefficient_finiteT,
    frictional_power,
    law_for,
    regime_ok,
    torque_finiteT,
    torque_numeric,
    torque_T0,
)
from .oracle import (
    cross_term_residual,
    delta_limit_ratio,
    dissipation_brute,
    qhat_brute,
    segment_qhat_brute,
    sinc_window_integral,
    spectral_pair_dissipation,
)
from .response import (
    DrudeMetal,
    OscillatorPair,
    Regime,
    ResponseCoefficients,
    ThermalState,
    alpha_imag_density,
    coefficients,
    drude_epsilon,
    phi,
)
from .trajectory import (
    DeltaComb,
    DeltaTerm,
    Segment,
    SpectralMode,
    Trajectory,
    WaveVector,
    delta_I,
    delta_I_limit,
    delta_qhat,
    matched_interval,
    q_factor,
    segmentize,
    smeared_I,
    spectral_I,
)

__all__ = [name for name in dir() if not name.startswith("_")]
