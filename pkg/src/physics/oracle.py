"""Brute-force references for the spectral pipeline.

These routines deliberately avoid interval matching and the large-duration
limit. Oscillatory time integrals go through QUADPACK's QAWO rule (Clenshaw-
Curtis moments with a cos/sin weight) rather than the Gauss-Kronrod and
Gauss-Legendre rules of the main path. The pair dissipation is integrated as
an ODE so that the double time integral costs a single pass.
"""

import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy import integrate, special

from ..errors import AccuracyError, DomainError
from .dissipation import QuadratureSpec
from .quadrature import adaptive_quad, gauss_legendre_panels, panel_quad
from .response import OscillatorPair, ThermalState, coefficients, phi_tail
from .trajectory import (
    Segment,
    SpectralMode,
    Trajectory,
    WaveVector,
    delta_I,
    delta_qhat,
    matched_interval,
    segmentize,
    spectral_I,
)

_ABS_TOL = 1e-13


def _weighted(fn: Callable[[float], float], a: float, b: float, omega: float, kind: str,
              rel_tol: float) -> float:
    """Oriented integral of fn(t) * cos(omega t) or fn(t) * sin(omega t) over [a, b]."""
    if a == b:
        return 0.0
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0
    if omega == 0:
        if kind == "sin":
            return 0.0
        value, _ = adaptive_quad(fn, a, b, rel_tol, abs_tol=_ABS_TOL, label="brute integral")
    else:
        value, _ = adaptive_quad(fn, a, b, rel_tol, abs_tol=_ABS_TOL, weight=kind, wvar=omega,
                                 label="oscillatory integral")
    return sign * value


def _chunks(a: float, b: float, frequency: float) -> np.ndarray:
    n = max(1, int(math.ceil((b - a) * abs(frequency) / (4.0 * math.pi))))
    return np.linspace(a, b, n + 1)


def _phase_integral(p0: float, rate: float, t_ref: float, a: float, b: float, omega: float,
                    rel_tol: float, subtract_one: bool) -> complex:
    """Integral over [a, b] of (exp(i p(t)) - [1]) exp(-i omega t), p(t) = p0 + rate (t - t_ref)."""
    def p(t: float) -> float:
        return p0 + rate * (t - t_ref)

    if subtract_one:
        def re_part(t: float) -> float:
            return -2.0 * math.sin(0.5 * p(t)) ** 2
    else:
        def re_part(t: float) -> float:
            return math.cos(p(t))

    def im_part(t: float) -> float:
        return math.sin(p(t))

    real, imag = [], []
    edges = _chunks(a, b, rate)
    for lo, hi in zip(edges[:-1], edges[1:]):
        rc = _weighted(re_part, lo, hi, omega, "cos", rel_tol)
        rs = _weighted(re_part, lo, hi, omega, "sin", rel_tol)
        ic = _weighted(im_part, lo, hi, omega, "cos", rel_tol)
        is_ = _weighted(im_part, lo, hi, omega, "sin", rel_tol)
        real.extend((rc, is_))
        imag.extend((ic, -rs))
    return complex(math.fsum(real), math.fsum(imag))


def qhat_brute(traj: Trajectory, omega: float, wv: WaveVector, spec: Optional[QuadratureSpec] = None) -> complex:
    """Integral of (exp(i k.(r(t) - r_s)) - 1) exp(-i omega t) over the whole loop."""
    spec = spec or QuadratureSpec()
    traj.require_closed()
    p_nodes = wv.kx * (traj.x - traj.x[0]) + wv.ky * (traj.y - traj.y[0])
    real, imag = [], []
    for i in range(traj.n_nodes - 1):
        ta, tb = float(traj.t[i]), float(traj.t[i + 1])
        rate = float(p_nodes[i + 1] - p_nodes[i]) / (tb - ta)
        part = _phase_integral(float(p_nodes[i]), rate, ta, ta, tb, omega, spec.oracle_rel_tol,
                               subtract_one=True)
        real.append(part.real)
        imag.append(part.imag)
    return complex(math.fsum(real), math.fsum(imag))


def segment_qhat_brute(seg: Segment, omega: float, wv: WaveVector,
                       spec: Optional[QuadratureSpec] = None) -> complex:
    """One segment's contribution by direct quadrature of both matched pieces."""
    spec = spec or QuadratureSpec()
    t0p, taup = matched_interval(seg, omega, wv)
    moving = _phase_integral(wv.phase(seg), wv.doppler(seg), seg.t0, seg.t_start, seg.t_end, omega,
                             spec.oracle_rel_tol, subtract_one=False)

    def one(t: float) -> float:
        return 1.0

    lo, hi = t0p - taup, t0p + taup
    still = complex(_weighted(one, lo, hi, omega, "cos", spec.oracle_rel_tol),
                    -_weighted(one, lo, hi, omega, "sin", spec.oracle_rel_tol))
    return moving - still


def dissipation_brute(pair: OscillatorPair, traj: Trajectory, coupling_gradient: float, state: ThermalState,
                      wv: Optional[WaveVector] = None, spec: Optional[QuadratureSpec] = None) -> float:
    """Energy absorbed by one oscillator pair driven along ``traj``.

    The pair couples to the plane-wave potential (g/k) sin(k.r + theta),
    averaged over theta. Before t_s the pair sits at rest at the starting
    position; the response to that history enters through the Abel-
    regularised tail of phi. Each channel carries the running integrals
    int cos/sin p(t') * cos/sin(Omega t') dt', which turns the double time
    integral into an ODE solved leg by leg with DOP853.
    """
    spec = spec or QuadratureSpec()
    traj.require_closed()
    wv = wv or WaveVector(1.0)
    if wv.k == 0 or coupling_gradient == 0:
        return 0.0
    amplitude = coupling_gradient / wv.k
    coeffs = coefficients(pair, state)
    channels = [(c, omega) for c, omega in ((coeffs.c_minus, pair.omega_minus), (coeffs.c_plus, pair.omega_plus))
                if c != 0.0 and omega > 0.0]
    if not channels:
        return 0.0

    t_s = traj.t_start
    p_nodes = wv.kx * (traj.x - traj.x[0]) + wv.ky * (traj.y - traj.y[0])
    prefactor = 0.5 * amplitude * amplitude
    n_ch = len(channels)
    y = np.zeros(4 * n_ch + 1)
    atol = 1e-13 * max(1.0, traj.duration)

    for i in range(traj.n_nodes - 1):
        ta, tb = float(traj.t[i]), float(traj.t[i + 1])
        p_a = float(p_nodes[i])
        rate = float(p_nodes[i + 1] - p_nodes[i]) / (tb - ta)

        def rhs(t: float, state_vec: np.ndarray, p_a=p_a, rate=rate, ta=ta) -> np.ndarray:
            p = p_a + rate * (t - ta)
            cp, sp = math.cos(p), math.sin(p)
            s = t - t_s
            out = np.empty_like(state_vec)
            # response to the resting pre-history before t_s
            inner = sp * phi_tail(s, pair, state, coeffs)
            for j, (c, omega) in enumerate(channels):
                co, so = math.cos(omega * s), math.sin(omega * s)
                a_cc, a_sc, a_cs, a_ss = state_vec[4 * j:4 * j + 4]
                out[4 * j:4 * j + 4] = (cp * co, sp * co, cp * so, sp * so)
                inner += c * (so * sp * a_cc - so * cp * a_sc - co * sp * a_cs + co * cp * a_ss)
            out[-1] = prefactor * rate * inner
            return out

        sol = integrate.solve_ivp(rhs, (ta, tb), y, method="DOP853", rtol=spec.oracle_rel_tol, atol=atol)
        if not sol.success:
            raise AccuracyError(f"pair dissipation ODE failed on leg {i}: {sol.message}",
                                float(sol.y[-1, -1]) if sol.y.size else float("nan"))
        y = sol.y[:, -1]
    return float(y[-1])


def spectral_pair_dissipation(pair: OscillatorPair, traj: Trajectory, coupling_gradient: float,
                              state: ThermalState, wv: Optional[WaveVector] = None, exact: bool = False,
                              spec: Optional[QuadratureSpec] = None,
                              max_velocity_change: float = 0.01) -> float:
    """(a^2 / 2) * sum over channels of C * I(Omega), the comparator of dissipation_brute.

    With ``exact`` the spectral weight keeps every cross term, using
    I = (Omega / 4) * sum_n |qhat_brute|^2.
    """
    spec = spec or QuadratureSpec()
    wv = wv or WaveVector(1.0)
    if wv.k == 0 or coupling_gradient == 0:
        return 0.0
    amplitude = coupling_gradient / wv.k
    coeffs = coefficients(pair, state)
    terms = []
    for c, omega in ((coeffs.c_minus, pair.omega_minus), (coeffs.c_plus, pair.omega_plus)):
        if c == 0.0 or omega <= 0.0:
            continue
        if exact:
            weight = 0.25 * omega * math.fsum(abs(qhat_brute(traj, omega, w, spec)) ** 2
                                              for w in (wv, wv.negated()))
        else:
            weight = spectral_I(omega, traj, wv, SpectralMode.FINITE, max_velocity_change)
        terms.append(c * weight)
    return 0.5 * amplitude * amplitude * math.fsum(terms)


def cross_term_residual(traj: Trajectory, window: Tuple[float, float], wv: WaveVector, separation: float,
                        spec: Optional[QuadratureSpec] = None, n_nodes: int = 20) -> float:
    """Relative weight of the inter-segment cross terms inside a Gaussian frequency window.

    A rest of length ``separation`` is inserted at the node farthest from the
    start. ``window`` is (centre, width); the Gaussian is cut at six widths
    and must stay at positive frequency. Returns
    |int w (full - diagonal)| / int w diagonal.
    """
    spec = spec or QuadratureSpec()
    center, width = window
    if not width > 0:
        raise DomainError("window width must be positive")
    lo, hi = center - 6.0 * width, center + 6.0 * width
    if lo <= 0:
        raise DomainError("frequency window must stay above zero")
    traj.require_closed()
    path = traj.with_dwell(traj.turning_index(), separation)
    segments = segmentize(path, max_velocity_change=0.0)
    n_panels = max(8, int(math.ceil((hi - lo) * path.duration / (2.0 * math.pi))) + 4)
    omegas, weights = gauss_legendre_panels(lo, hi, n_panels, n_nodes)

    branches = (wv, wv.negated())
    residual, diagonal = [], []
    for omega, w in zip(omegas.tolist(), weights.tolist()):
        window_w = w * math.exp(-0.5 * ((omega - center) / width) ** 2)
        full = math.fsum(abs(qhat_brute(path, omega, b, spec)) ** 2 for b in branches)
        diag = math.fsum(abs(delta_qhat(seg, omega, b)) ** 2 for b in branches for seg in segments)
        residual.append(window_w * (full - diag))
        diagonal.append(window_w * diag)
    denominator = math.fsum(diagonal)
    if denominator == 0:
        return 0.0
    return abs(math.fsum(residual)) / denominator


def sinc_window_integral(x_max: float, rel_tol: float = 1e-12) -> float:
    """Integral of (sin x / x)^2 over [-x_max, x_max] by adaptive quadrature on pi-panels."""
    if not x_max > 0:
        raise DomainError("window half-width must be positive")
    n = int(math.ceil(x_max / math.pi))
    edges = np.linspace(0.0, x_max, n + 1).tolist()
    half = panel_quad(lambda x: float(np.sinc(x / math.pi)) ** 2, edges, rel_tol, label="sinc window")
    return 2.0 * half


def sinc_window_closed_form(x_max: float) -> float:
    si, _ = special.sici(2.0 * x_max)
    return 2.0 * (float(si) - math.sin(x_max) ** 2 / x_max)


def delta_limit_ratio(seg: Segment, omega_window: float, wv: WaveVector, rel_tol: float = 1e-12) -> float:
    """Resonant branch of delta_I integrated over |omega - |k.u|| <= omega_window, over pi tau (k.u)^2.

    The integrand is omega * delta_I, so the ratio tends to 1 with error
    below 2 / (omega_window * tau).
    """
    c = wv.doppler(seg)
    if c == 0:
        raise DomainError("no resonance for a segment at rest")
    if not 0 < omega_window < abs(c):
        raise DomainError("window must be positive and keep omega above zero")
    branch = (1,) if c > 0 else (-1,)
    center = abs(c)
    n = max(1, int(math.ceil(omega_window * seg.tau / math.pi)))
    edges = sorted(set(np.linspace(center - omega_window, center + omega_window, 2 * n + 1).tolist()))
    value = panel_quad(lambda w: w * delta_I(seg, w, wv, branches=branch), edges, rel_tol,
                       label="delta-limit window")
    return value / (math.pi * seg.tau * c * c)


def random_segments(rng: np.random.Generator, count: int) -> List[Tuple[Segment, float, WaveVector]]:
    """Random (segment, omega, wave vector) draws for the segment-level comparison."""
    draws = []
    for _ in range(count):
        seg = Segment(
            t0=float(rng.uniform(-5.0, 5.0)),
            tau=float(rng.uniform(0.1, 3.0)),
            q0x=float(rng.uniform(-2.0, 2.0)),
            q0y=float(rng.uniform(-2.0, 2.0)),
            qdotx=float(rng.uniform(-2.0, 2.0)),
            qdoty=float(rng.uniform(-2.0, 2.0)),
        )
        omega = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 4.0))
        wv = WaveVector(float(rng.uniform(0.0, 3.0)), float(rng.uniform(0.0, 2.0 * math.pi)))
        draws.append((seg, omega, wv))
    return draws


def pair_loop(periods: float, omega: float, speed: float = 1.0, phase: float = math.pi / 6.0,
              wave_number: Optional[float] = None) -> Tuple[Trajectory, WaveVector]:
    """Resonant out-and-back loop whose return leg ends ``periods`` response periods after t_s.

    The leg length puts k u T at an integer multiple of pi plus ``phase`` so the
    finite-duration cross term has a known sign.
    """
    k = omega / speed if wave_number is None else wave_number
    c = k * speed
    turns = max(1, int(round(periods)))
    leg = (math.pi * turns + phase) / c
    return Trajectory.rectilinear_loop(speed, leg), WaveVector(k)
