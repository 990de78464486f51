import math

import numpy as np
import pytest

from src.errors import DomainError, LoopViolationError
from src.physics import oracle
from src.physics.oracle import (
    cross_term_residual,
    delta_limit_ratio,
    dissipation_brute,
    pair_loop,
    qhat_brute,
    random_segments,
    segment_qhat_brute,
    sinc_window_closed_form,
    sinc_window_integral,
    spectral_pair_dissipation,
)
from src.physics.response import ThermalState
from src.physics.trajectory import Segment, Trajectory, WaveVector, delta_qhat, segmentize


def test_sinc_window():
    x_max = 1e3
    value = sinc_window_integral(x_max)
    assert abs(value - math.pi) <= 2.0 / x_max
    assert value == pytest.approx(sinc_window_closed_form(x_max), rel=1e-10)
    with pytest.raises(DomainError):
        sinc_window_integral(0.0)


def test_single_resonance_ratio():
    seg = Segment(t0=0.0, tau=1e3, q0x=0.0, q0y=0.0, qdotx=2.0, qdoty=0.0)
    error = abs(delta_limit_ratio(seg, 1.0, WaveVector(1.0)) - 1.0)
    assert error <= 2.0 / 1e3
    with pytest.raises(DomainError):
        delta_limit_ratio(seg, 3.0, WaveVector(1.0))


def test_random_segments_are_seeded():
    first = random_segments(np.random.default_rng(3), 5)
    again = random_segments(np.random.default_rng(3), 5)
    assert len(first) == 5
    assert first == again


def test_segment_factor_against_quadrature():
    for seg, omega, wv in random_segments(np.random.default_rng(2024), 20):
        assert abs(segment_qhat_brute(seg, omega, wv) - delta_qhat(seg, omega, wv)) <= 1e-6


def test_loop_factor_is_sum_of_segments():
    loop = Trajectory.from_nodes([(0, 0, 0), (1.5, 1.0, 0.3), (2.5, 0.2, 1.1), (4.0, 0, 0)])
    for omega, wv in ((0.7, WaveVector(1.3, 0.4)), (-2.1, WaveVector(0.6, 2.0))):
        summed = sum(delta_qhat(seg, omega, wv) for seg in segmentize(loop, max_velocity_change=0.0))
        assert abs(qhat_brute(loop, omega, wv) - summed) <= 1e-6


def test_qhat_brute_needs_closed_loop():
    open_path = Trajectory([0.0, 1.0], [0.0, 1.0], [0.0, 0.0])
    with pytest.raises(LoopViolationError):
        qhat_brute(open_path, 1.0, WaveVector(1.0))


def test_pair_loop_geometry():
    traj, wv = pair_loop(10, omega=3.0, speed=1.0)
    leg = (10 * math.pi + math.pi / 6) / 3.0
    assert wv.k == pytest.approx(3.0)
    assert traj.duration == pytest.approx(2 * leg)
    assert traj.is_closed


def test_exact_spectral_weight_reproduces_brute_force(resonant_pair):
    traj, wv = pair_loop(4, resonant_pair.omega_plus)
    state = ThermalState.zero()
    brute = dissipation_brute(resonant_pair, traj, wv.k, state, wv)
    exact = spectral_pair_dissipation(resonant_pair, traj, wv.k, state, wv, exact=True)
    assert brute > 0.0
    assert exact == pytest.approx(brute, rel=1e-5)


def test_short_loops_keep_cross_terms(resonant_pair):
    traj, wv = pair_loop(2, resonant_pair.omega_plus)
    state = ThermalState.zero()
    brute = dissipation_brute(resonant_pair, traj, wv.k, state, wv)
    diagonal = spectral_pair_dissipation(resonant_pair, traj, wv.k, state, wv, max_velocity_change=0.0)
    assert abs(diagonal - brute) / brute > 0.05


def test_pre_history_enters_through_phi_tail(resonant_pair, monkeypatch):
    traj, wv = pair_loop(2, resonant_pair.omega_plus)
    state = ThermalState.zero()
    brute = dissipation_brute(resonant_pair, traj, wv.k, state, wv)
    monkeypatch.setattr(oracle, "phi_tail", lambda s, pair, state, coeffs=None: 0.0)
    without_history = dissipation_brute(resonant_pair, traj, wv.k, state, wv)
    assert abs(without_history - brute) > 1e-6 * abs(brute)


@pytest.mark.slow
def test_pair_error_halves_with_duration(resonant_pair):
    state = ThermalState.zero()
    errors = []
    for periods in (200, 400):
        traj, wv = pair_loop(periods, resonant_pair.omega_plus)
        brute = dissipation_brute(resonant_pair, traj, wv.k, state, wv)
        spectral = spectral_pair_dissipation(resonant_pair, traj, wv.k, state, wv, max_velocity_change=0.0)
        errors.append(abs(spectral - brute) / brute)
    assert errors[0] <= 0.05
    assert 1.5 <= errors[0] / errors[1] <= 2.5


@pytest.mark.slow
def test_separation_suppresses_cross_terms():
    loop = Trajectory.rectilinear_loop(1.0, 20.0)
    wv = WaveVector(1.0)
    joined = cross_term_residual(loop, (1.0, 0.1), wv, 0.0)
    separated = cross_term_residual(loop, (1.0, 0.1), wv, 200.0)
    assert separated < joined
    assert separated < 1e-3


def test_cross_term_window_validation():
    loop = Trajectory.rectilinear_loop(1.0, 2.0)
    with pytest.raises(DomainError):
        cross_term_residual(loop, (0.3, 0.1), WaveVector(1.0), 0.0)
    with pytest.raises(DomainError):
        cross_term_residual(loop, (1.0, 0.0), WaveVector(1.0), 0.0)
