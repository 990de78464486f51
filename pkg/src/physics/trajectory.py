"""Closed-loop trajectories and their spectral factors.

A trajectory is a piecewise-linear path r(t) in the plate plane. Displacements
are measured from the starting node, so ``k . (r(t) - r(t_s))`` is the phase
that enters every spectral factor. ``speed_scale`` is the velocity unit v that
turns physical displacements into the dimensionless q(t) = (r - r_s) / v.
"""

import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DegenerateMatchingError, DomainError, LoopViolationError
from .quadrature import panel_quad

CLOSURE_TOLERANCE = 1e-12
SERIES_THRESHOLD = 1e-6


class SpectralMode(Enum):
    FINITE = "finite"
    DELTA = "delta"


@dataclass(frozen=True)
class Segment:
    t0: float
    tau: float
    q0x: float
    q0y: float
    qdotx: float
    qdoty: float
    speed_scale: float = 1.0

    def __post_init__(self):
        if not self.tau > 0:
            raise DomainError(f"segment half-length must be positive, got {self.tau}")
        if not math.isfinite(self.qdotx * self.qdotx + self.qdoty * self.qdoty):
            raise DomainError("segment velocity must be finite")

    @property
    def t_start(self) -> float:
        return self.t0 - self.tau

    @property
    def t_end(self) -> float:
        return self.t0 + self.tau

    @property
    def duration(self) -> float:
        return 2.0 * self.tau

    @property
    def speed(self) -> float:
        return self.speed_scale * math.hypot(self.qdotx, self.qdoty)


@dataclass(frozen=True)
class WaveVector:
    k: float
    phi_k: float = 0.0

    def __post_init__(self):
        if not self.k >= 0:
            raise DomainError(f"wave number must be non-negative, got {self.k}")

    @property
    def kx(self) -> float:
        return self.k * math.cos(self.phi_k)

    @property
    def ky(self) -> float:
        return self.k * math.sin(self.phi_k)

    def doppler(self, seg: Segment) -> float:
        """k . u for the segment's physical velocity u = v q'."""
        return seg.speed_scale * (self.kx * seg.qdotx + self.ky * seg.qdoty)

    def phase(self, seg: Segment) -> float:
        """k . (r(t0) - r_s)."""
        return seg.speed_scale * (self.kx * seg.q0x + self.ky * seg.q0y)

    def negated(self) -> "WaveVector":
        return WaveVector(self.k, self.phi_k + math.pi)

    def rotated(self, angle: float) -> "WaveVector":
        return WaveVector(self.k, self.phi_k + angle)


@dataclass(frozen=True)
class DeltaTerm:
    center: float
    weight: float


@dataclass(frozen=True)
class DeltaComb:
    """amplitude * [delta(w - c) + delta(w + c)] / w, evaluated as weights at the centres."""

    amplitude: float
    centers: Tuple[float, ...]

    def weight(self, center: float) -> float:
        return self.amplitude / center

    def terms(self) -> Tuple[DeltaTerm, ...]:
        return tuple(DeltaTerm(c, self.weight(c)) for c in self.centers)


class Trajectory:
    """Piecewise-linear path through nodes (t_i, x_i, y_i)."""

    def __init__(self, t: Sequence[float], x: Sequence[float], y: Sequence[float], speed_scale: float = 1.0):
        t = np.array(t, dtype=float)
        x = np.array(x, dtype=float)
        y = np.array(y, dtype=float)
        if t.ndim != 1 or t.shape != x.shape or t.shape != y.shape:
            raise DomainError("trajectory columns must be one-dimensional and of equal length")
        if t.size < 2:
            raise DomainError("a trajectory needs at least two nodes")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise DomainError("trajectory nodes must be finite")
        if np.any(np.diff(t) <= 0):
            raise DomainError("trajectory times must be strictly increasing")
        if not speed_scale > 0:
            raise DomainError("speed_scale must be positive")
        for arr in (t, x, y):
            arr.setflags(write=False)
        self.t, self.x, self.y = t, x, y
        self.speed_scale = float(speed_scale)

    def __repr__(self) -> str:
        return (f"Trajectory(n_nodes={self.n_nodes}, span=[{self.t_start:.6g}, {self.t_end:.6g}], "
                f"speed_scale={self.speed_scale:.6g})")

    @classmethod
    def from_nodes(cls, nodes: Sequence[Tuple[float, float, float]], speed_scale: float = 1.0) -> "Trajectory":
        arr = np.asarray(nodes, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 3:
            raise DomainError("nodes must be (t, x, y) triples")
        return cls(arr[:, 0], arr[:, 1], arr[:, 2], speed_scale)

    @classmethod
    def rectilinear_loop(cls, speed: float, leg_duration: float, angle: float = 0.0,
                         dwell: float = 0.0, speed_scale: float = 1.0) -> "Trajectory":
        """Out and back along a straight line, with an optional rest at the far end."""
        if not leg_duration > 0 or dwell < 0:
            raise DomainError("leg_duration must be positive and dwell non-negative")
        far = speed * leg_duration
        fx, fy = far * math.cos(angle), far * math.sin(angle)
        nodes = [(0.0, 0.0, 0.0), (leg_duration, fx, fy)]
        if dwell > 0:
            nodes.append((leg_duration + dwell, fx, fy))
        nodes.append((2.0 * leg_duration + dwell, 0.0, 0.0))
        return cls.from_nodes(nodes, speed_scale)

    @classmethod
    def polygon_loop(cls, vertices: Sequence[Tuple[float, float]], speed: float,
                     speed_scale: float = 1.0) -> "Trajectory":
        """Visit the vertices at constant speed and return to the first one."""
        if not speed > 0:
            raise DomainError("speed must be positive")
        pts = [tuple(map(float, v)) for v in vertices]
        if len(pts) < 2:
            raise DomainError("a polygon loop needs at least two vertices")
        pts.append(pts[0])
        times = [0.0]
        for (xa, ya), (xb, yb) in zip(pts[:-1], pts[1:]):
            times.append(times[-1] + math.hypot(xb - xa, yb - ya) / speed)
        return cls(times, [p[0] for p in pts], [p[1] for p in pts], speed_scale)

    @classmethod
    def circle(cls, radius: float, angular_speed: float, n_nodes: int = 360,
               speed_scale: float = 1.0) -> "Trajectory":
        """One turn around a circle through the origin, discretised into n_nodes legs."""
        if not (radius > 0 and angular_speed > 0) or n_nodes < 3:
            raise DomainError("circle needs positive radius, angular speed and at least 3 legs")
        theta = np.linspace(0.0, 2.0 * math.pi, n_nodes + 1)
        x = radius * (np.cos(theta) - 1.0)
        y = radius * np.sin(theta)
        x[-1], y[-1] = 0.0, 0.0
        return cls(theta / angular_speed, x, y, speed_scale)

    @property
    def n_nodes(self) -> int:
        return int(self.t.size)

    @property
    def t_start(self) -> float:
        return float(self.t[0])

    @property
    def t_end(self) -> float:
        return float(self.t[-1])

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start

    @property
    def diameter(self) -> float:
        # bounding-box diagonal, an upper bound within sqrt(2) of the point-set diameter
        return float(math.hypot(np.ptp(self.x), np.ptp(self.y)))

    @property
    def closure_gap(self) -> float:
        return float(math.hypot(self.x[-1] - self.x[0], self.y[-1] - self.y[0]))

    @property
    def is_closed(self) -> bool:
        return self.closure_gap <= CLOSURE_TOLERANCE * self.diameter

    def require_closed(self) -> None:
        if not self.is_closed:
            raise LoopViolationError(
                f"trajectory does not return to its start: gap {self.closure_gap:.3e} "
                f"exceeds {CLOSURE_TOLERANCE:.0e} x diameter {self.diameter:.3e}"
            )

    @property
    def path_length(self) -> float:
        return float(math.fsum(np.hypot(np.diff(self.x), np.diff(self.y))))

    def leg_velocities(self) -> Tuple[np.ndarray, np.ndarray]:
        dt = np.diff(self.t)
        return np.diff(self.x) / dt, np.diff(self.y) / dt

    def displacement(self, t):
        """r(t) - r(t_s) by linear interpolation."""
        return (np.interp(t, self.t, self.x) - self.x[0],
                np.interp(t, self.t, self.y) - self.y[0])

    def turning_index(self) -> int:
        """Index of the node farthest from the start."""
        dist = np.hypot(self.x - self.x[0], self.y - self.y[0])
        return int(np.argmax(dist))

    def rotated(self, angle: float) -> "Trajectory":
        c, s = math.cos(angle), math.sin(angle)
        dx, dy = self.x - self.x[0], self.y - self.y[0]
        return Trajectory(self.t, self.x[0] + c * dx - s * dy, self.y[0] + s * dx + c * dy, self.speed_scale)

    def reversed(self) -> "Trajectory":
        t = self.t_start + (self.t_end - self.t[::-1])
        return Trajectory(t, self.x[::-1], self.y[::-1], self.speed_scale)

    def with_dwell(self, index: int, duration: float) -> "Trajectory":
        """Rest for ``duration`` at node ``index``; later nodes shift in time."""
        if duration < 0:
            raise DomainError("dwell duration must be non-negative")
        if duration == 0:
            return self
        if not 0 <= index < self.n_nodes:
            raise DomainError(f"node index {index} out of range")
        t = np.concatenate([self.t[:index + 1], self.t[index:] + duration])
        x = np.concatenate([self.x[:index + 1], self.x[index:]])
        y = np.concatenate([self.y[:index + 1], self.y[index:]])
        return Trajectory(t, x, y, self.speed_scale)

    def scaled_speed(self, factor: float) -> "Trajectory":
        """Same path traversed ``factor`` times faster."""
        if not factor > 0:
            raise DomainError("speed factor must be positive")
        return Trajectory(self.t_start + (self.t - self.t_start) / factor, self.x, self.y, self.speed_scale)


def q_factor(t, traj: Trajectory, wv: WaveVector):
    """exp(-i k . (r(t) - r_s)) - 1."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < traj.t_start) or np.any(t_arr > traj.t_end):
        raise DomainError(f"time outside trajectory span [{traj.t_start}, {traj.t_end}]")
    dx, dy = traj.displacement(t_arr)
    value = np.expm1(-1j * (wv.kx * dx + wv.ky * dy))
    return value if value.ndim else complex(value)


def segmentize(traj: Trajectory, max_velocity_change: float = 0.01) -> List[Segment]:
    """Group consecutive legs whose velocity stays within the relative threshold.

    A merged group is replaced by its chord, so neighbouring segments still
    share their end points.
    """
    if max_velocity_change < 0:
        raise DomainError("max_velocity_change must be non-negative")
    ux, uy = traj.leg_velocities()
    groups: List[Tuple[int, int]] = []
    start = 0
    for i in range(1, ux.size):
        diff = math.hypot(ux[i] - ux[start], uy[i] - uy[start])
        scale = max(math.hypot(ux[start], uy[start]), math.hypot(ux[i], uy[i]))
        if diff < max_velocity_change * scale or (max_velocity_change > 0 and diff == 0.0):
            continue
        groups.append((start, i))
        start = i
    groups.append((start, ux.size))

    v = traj.speed_scale
    x0, y0 = traj.x[0], traj.y[0]
    segments = []
    for a, b in groups:
        ta, tb = traj.t[a], traj.t[b]
        span = tb - ta
        segments.append(Segment(
            t0=0.5 * (ta + tb),
            tau=0.5 * span,
            q0x=(0.5 * (traj.x[a] + traj.x[b]) - x0) / v,
            q0y=(0.5 * (traj.y[a] + traj.y[b]) - y0) / v,
            qdotx=(traj.x[b] - traj.x[a]) / span / v,
            qdoty=(traj.y[b] - traj.y[a]) / span / v,
            speed_scale=v,
        ))
    return segments


def speed_histogram(segments: Sequence[Segment]) -> Dict[float, float]:
    """Total time spent at each speed (12 significant digits)."""
    buckets: Dict[float, List[float]] = defaultdict(list)
    for seg in segments:
        buckets[float(f"{seg.speed:.12g}")].append(seg.duration)
    return {speed: math.fsum(buckets[speed]) for speed in sorted(buckets)}


def matched_interval(seg: Segment, omega: float, wv: WaveVector) -> Tuple[float, float]:
    if omega == 0:
        raise DegenerateMatchingError("interval matching is undefined at omega = 0")
    c = wv.doppler(seg)
    tau_prime = (omega - c) * seg.tau / omega
    t0_prime = seg.t0 - wv.phase(seg) / omega
    return t0_prime, tau_prime


def _sin_ratio(delta: float, tau: float) -> float:
    """sin(delta tau) / delta with its series near delta = 0."""
    x = delta * tau
    if abs(x) < SERIES_THRESHOLD:
        return tau * (1.0 - x * x / 6.0)
    return math.sin(x) / delta


def delta_qhat(seg: Segment, omega: float, wv: WaveVector) -> complex:
    if omega == 0:
        raise DegenerateMatchingError("delta_qhat is undefined at omega = 0")
    c = wv.doppler(seg)
    phase = complex(math.cos(omega * seg.t0 - wv.phase(seg)), -math.sin(omega * seg.t0 - wv.phase(seg)))
    return 2.0 * phase * c * _sin_ratio(omega - c, seg.tau) / omega


def delta_I(seg: Segment, omega: float, wv: WaveVector, branches: Sequence[int] = (1, -1)) -> float:
    """Finite-duration kernel, summed over the requested Doppler branches n."""
    if omega == 0:
        raise DegenerateMatchingError("delta_I is undefined at omega = 0")
    c = wv.doppler(seg)
    if c == 0:
        return 0.0
    return math.fsum(c * c / omega * _sin_ratio(omega - n * c, seg.tau) ** 2 for n in branches)


def delta_I_limit(seg: Segment, wv: WaveVector) -> DeltaComb:
    c = wv.doppler(seg)
    if c == 0:
        return DeltaComb(0.0, ())
    return DeltaComb(math.pi * seg.tau * c * c, (c, -c))


def spectral_I(omega: Optional[float], traj: Trajectory, wv: WaveVector,
               mode: SpectralMode = SpectralMode.FINITE, max_velocity_change: float = 0.01):
    """Accumulated spectral weight of a closed loop, cross terms dropped.

    FINITE mode returns I(omega) as a float. DELTA mode ignores ``omega`` and
    returns the tuple of delta terms; only positive centres are physical.
    """
    traj.require_closed()
    segments = segmentize(traj, max_velocity_change)
    if mode is SpectralMode.DELTA:
        terms: List[DeltaTerm] = []
        for seg in segments:
            terms.extend(delta_I_limit(seg, wv).terms())
        return tuple(terms)
    if omega is None or omega == 0:
        raise DegenerateMatchingError("finite-duration spectral weight needs omega != 0")
    return math.fsum(delta_I(seg, omega, wv) for seg in segments)


def smeared_I(traj: Trajectory, wv: WaveVector, test_fn: Callable[[float], float], lo: float, hi: float,
              mode: SpectralMode = SpectralMode.FINITE, max_velocity_change: float = 0.01,
              rel_tol: float = 1e-11) -> float:
    """Integral of test_fn(omega) * I(omega) over [lo, hi], 0 < lo < hi."""
    if not 0 < lo < hi:
        raise DomainError("smearing window must satisfy 0 < lo < hi")
    traj.require_closed()
    segments = segmentize(traj, max_velocity_change)
    if mode is SpectralMode.DELTA:
        values = []
        for seg in segments:
            for term in delta_I_limit(seg, wv).terms():
                if lo <= term.center <= hi:
                    values.append(term.weight * test_fn(term.center))
        return math.fsum(values)

    tau_max = max(seg.tau for seg in segments)
    n_panels = max(1, int(math.ceil((hi - lo) * tau_max / math.pi)))
    edges = set(np.linspace(lo, hi, n_panels + 1).tolist())
    edges.update(abs(wv.doppler(seg)) for seg in segments if lo < abs(wv.doppler(seg)) < hi)
    edges = sorted(edges)

    def integrand(omega: float) -> float:
        return test_fn(omega) * math.fsum(delta_I(seg, omega, wv) for seg in segments)

    return panel_quad(integrand, edges, rel_tol, label="smeared spectral weight")
