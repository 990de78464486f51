import math

import numpy as np
import pytest

from src.errors import DegenerateMatchingError, DomainError, LoopViolationError
from src.physics.trajectory import (
    DeltaComb,
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
    speed_histogram,
)


def _segment(**overrides) -> Segment:
    values = dict(t0=1.3, tau=2.0, q0x=0.4, q0y=-0.2, qdotx=0.8, qdoty=0.3)
    values.update(overrides)
    return Segment(**values)


def _gaussian(center: float, width: float):
    return lambda w: math.exp(-0.5 * ((w - center) / width) ** 2)


def test_trajectory_validation():
    with pytest.raises(DomainError):
        Trajectory([0.0, 1.0, 1.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0])
    with pytest.raises(DomainError):
        Trajectory([0.0], [0.0], [0.0])
    with pytest.raises(DomainError):
        Trajectory([0.0, 1.0], [0.0, math.nan], [0.0, 0.0])
    traj = Trajectory.rectilinear_loop(1.0, 2.0)
    with pytest.raises(ValueError):
        traj.t[0] = 5.0


def test_closure():
    loop = Trajectory.rectilinear_loop(2.0, 3.0, angle=0.4, dwell=1.0)
    assert loop.is_closed
    assert loop.duration == pytest.approx(7.0)
    assert loop.path_length == pytest.approx(12.0)

    open_path = Trajectory([0.0, 1.0, 2.0], [0.0, 1.0, 1.5], [0.0, 0.0, 0.0])
    assert not open_path.is_closed
    with pytest.raises(LoopViolationError):
        open_path.require_closed()
    with pytest.raises(LoopViolationError):
        spectral_I(1.0, open_path, WaveVector(1.0))


def test_builders():
    square = Trajectory.polygon_loop([(0, 0), (2, 0), (2, 2), (0, 2)], speed=0.5)
    assert square.is_closed
    assert square.duration == pytest.approx(16.0)
    circle = Trajectory.circle(radius=3.0, angular_speed=0.5, n_nodes=90)
    assert circle.is_closed
    assert circle.n_nodes == 91
    assert circle.duration == pytest.approx(4.0 * math.pi)
    assert circle.reversed().is_closed
    assert circle.scaled_speed(2.0).duration == pytest.approx(2.0 * math.pi)


def test_with_dwell_inserts_rest():
    loop = Trajectory.rectilinear_loop(1.0, 4.0)
    rested = loop.with_dwell(loop.turning_index(), 3.0)
    assert rested.n_nodes == loop.n_nodes + 1
    assert rested.duration == pytest.approx(11.0)
    assert rested.path_length == pytest.approx(loop.path_length)


def test_q_factor():
    loop = Trajectory.rectilinear_loop(1.0, 2.0)
    wv = WaveVector(1.5)
    assert q_factor(0.0, loop, wv) == 0
    assert q_factor(1.0, loop, wv) == pytest.approx(complex(math.cos(1.5), -math.sin(1.5)) - 1.0)
    assert abs(q_factor(loop.t_end, loop, wv)) < 1e-15
    with pytest.raises(DomainError):
        q_factor(5.0, loop, wv)


def test_matched_interval():
    seg = _segment()
    wv = WaveVector(1.2, 0.3)
    omega = 2.0
    t0p, taup = matched_interval(seg, omega, wv)
    assert omega * taup == pytest.approx((omega - wv.doppler(seg)) * seg.tau)
    assert omega * t0p == pytest.approx(omega * seg.t0 - wv.phase(seg))
    with pytest.raises(DegenerateMatchingError):
        matched_interval(seg, 0.0, wv)
    with pytest.raises(DegenerateMatchingError):
        delta_qhat(seg, 0.0, wv)


def test_delta_qhat_is_continuous_at_resonance():
    seg = _segment()
    wv = WaveVector(1.1, 0.2)
    c = wv.doppler(seg)
    at = delta_qhat(seg, c, wv)
    assert abs(at) == pytest.approx(2.0 * seg.tau, rel=1e-12)
    for eps in (1e-9, -1e-9, 5e-8):
        assert abs(delta_qhat(seg, c + eps, wv) - at) < 1e-6


def test_delta_I_matches_squared_factors():
    rng = np.random.default_rng(11)
    for _ in range(20):
        seg = _segment(t0=float(rng.uniform(-3, 3)), tau=float(rng.uniform(0.2, 4)),
                       qdotx=float(rng.uniform(-2, 2)), qdoty=float(rng.uniform(-2, 2)))
        wv = WaveVector(float(rng.uniform(0.1, 2)), float(rng.uniform(0, 2 * math.pi)))
        omega = float(rng.uniform(0.1, 3))
        squares = abs(delta_qhat(seg, omega, wv)) ** 2 + abs(delta_qhat(seg, omega, wv.negated())) ** 2
        assert delta_I(seg, omega, wv) == pytest.approx(0.25 * omega * squares, rel=1e-12)


def test_delta_limit_comb():
    seg = _segment(qdotx=1.0, qdoty=0.0)
    comb = delta_I_limit(seg, WaveVector(2.0))
    assert comb.amplitude == pytest.approx(math.pi * seg.tau * 4.0)
    assert comb.centers == (2.0, -2.0)
    assert comb.weight(2.0) == pytest.approx(math.pi * seg.tau * 2.0)
    assert delta_I_limit(_segment(qdotx=0.0, qdoty=0.0), WaveVector(2.0)) == DeltaComb(0.0, ())


def test_spectral_I_delta_mode():
    loop = Trajectory.rectilinear_loop(1.0, 6.0)
    terms = spectral_I(None, loop, WaveVector(0.5), SpectralMode.DELTA)
    assert len(terms) == 4
    positive = sorted(t.weight for t in terms if t.center > 0)
    # two legs of half-duration 3 at Doppler frequency 0.5
    assert positive == pytest.approx([math.pi * 3.0 * 0.5] * 2)
    with pytest.raises(DegenerateMatchingError):
        spectral_I(0.0, loop, WaveVector(0.5))


def test_segments_tile_the_loop():
    circle = Trajectory.circle(radius=2.0, angular_speed=1.0, n_nodes=360)
    fine = segmentize(circle, max_velocity_change=0.0)
    coarse = segmentize(circle, max_velocity_change=0.05)
    assert len(fine) == 360
    assert len(coarse) < len(fine)
    for segments in (fine, coarse):
        assert math.fsum(s.duration for s in segments) == pytest.approx(circle.duration)
        for a, b in zip(segments[:-1], segments[1:]):
            assert a.t_end == pytest.approx(b.t_start)
    with pytest.raises(DomainError):
        segmentize(circle, -0.1)


def test_collinear_legs_merge():
    traj = Trajectory([0.0, 1.0, 2.0, 4.0], [0.0, 1.0, 2.0, 0.0], [0.0, 0.0, 0.0, 0.0])
    segments = segmentize(traj)
    assert len(segments) == 2
    assert segments[0].qdotx == pytest.approx(1.0)
    assert segments[0].tau == pytest.approx(1.0)


def test_speed_histogram():
    square = Trajectory.polygon_loop([(0, 0), (1, 0), (1, 1), (0, 1)], speed=0.5)
    histogram = speed_histogram(segmentize(square))
    assert list(histogram) == [0.5]
    assert histogram[0.5] == pytest.approx(square.duration)


def test_rotational_invariance():
    traj = Trajectory.from_nodes([(0, 0, 0), (1, 1, 0.5), (2.5, 0.2, 1.4), (4, 0, 0)])
    wv = WaveVector(0.9, 0.4)
    angle = 1.1
    for omega in (0.3, 1.0, 2.2):
        base = spectral_I(omega, traj, wv)
        turned = spectral_I(omega, traj.rotated(angle), wv.rotated(angle))
        assert turned == pytest.approx(base, rel=1e-9)


def test_smeared_weight_approaches_delta_limit():
    window = _gaussian(1.0, 0.15)
    wv = WaveVector(1.0)
    errors = []
    for tau in (100.0, 200.0):
        traj = Trajectory.rectilinear_loop(1.0, 2.0 * tau)
        finite = smeared_I(traj, wv, window, 0.1, 1.9, SpectralMode.FINITE)
        limit = smeared_I(traj, wv, window, 0.1, 1.9, SpectralMode.DELTA)
        errors.append(abs(finite - limit) / limit)
    assert errors[0] < 0.05
    assert 1.6 <= errors[0] / errors[1] <= 2.4


def test_smeared_window_validation():
    traj = Trajectory.rectilinear_loop(1.0, 2.0)
    with pytest.raises(DomainError):
        smeared_I(traj, WaveVector(1.0), lambda w: 1.0, 0.0, 1.0)
