import math
from typing import Any, Dict, List, Tuple

import numpy as np

from ..physics.dissipation import QuadratureSpec
from ..physics.oracle import qhat_brute, random_segments, segment_qhat_brute
from ..physics.trajectory import Segment, Trajectory, WaveVector, delta_qhat, segmentize
from .base import BaseCheck, CheckSettings, Subtask

DRAWS = 100
BATCH = 10
LOOPS = 5


def _segment_batch(draws: List[Tuple[Segment, float, WaveVector]], spec: QuadratureSpec) -> float:
    return max(abs(segment_qhat_brute(seg, omega, wv, spec) - delta_qhat(seg, omega, wv))
               for seg, omega, wv in draws)


def _random_loops(seed: int, count: int, spec: QuadratureSpec) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        n_vertices = int(rng.integers(3, 7))
        vertices = rng.uniform(-2.0, 2.0, size=(n_vertices, 2)).tolist()
        traj = Trajectory.polygon_loop(vertices, speed=float(rng.uniform(0.5, 2.0)))
        omega = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 4.0))
        wv = WaveVector(float(rng.uniform(0.1, 3.0)), float(rng.uniform(0.0, 2.0 * math.pi)))
        summed = sum(delta_qhat(seg, omega, wv) for seg in segmentize(traj, max_velocity_change=0.0))
        worst = max(worst, abs(qhat_brute(traj, omega, wv, spec) - summed))
    return worst


class QhatCheck(BaseCheck):
    name = "qhat"
    check_name = "Segment Fourier Factors vs Brute Force"
    default_tolerance = 1e-6
    accepts_override = True

    async def run(self, settings: CheckSettings) -> Dict[str, Any]:
        tolerance = self.tolerance(settings)
        draws = random_segments(np.random.default_rng(settings.seed), DRAWS)
        subtasks = [
            Subtask(f"segments_{i // BATCH}", _segment_batch, (draws[i:i + BATCH], settings.quadrature))
            for i in range(0, DRAWS, BATCH)
        ]
        subtasks.append(Subtask("loops", _random_loops, (settings.seed + 1, LOOPS, settings.quadrature)))
        partials = await self.gather(subtasks, settings.threads)
        errors = self.failures(partials)
        if errors:
            return self.error(errors, tolerance)
        achieved = max(partials.values())
        detail = {"draws": DRAWS, "loops": LOOPS, "seed": settings.seed, "max_abs_error": partials}
        return self.result(achieved <= tolerance, achieved, tolerance, detail)
