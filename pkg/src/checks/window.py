import math
from typing import Any, Dict

from ..physics.oracle import delta_limit_ratio, sinc_window_integral
from ..physics.trajectory import Segment, WaveVector
from .base import BaseCheck, CheckSettings, Subtask

WINDOW_HALF_WIDTH = 1e3
RESONANCE_TAU = 1e3
RESONANCE_WINDOW = 1.0


def _sinc_error() -> float:
    return abs(sinc_window_integral(WINDOW_HALF_WIDTH) - math.pi)


def _resonance_error() -> float:
    seg = Segment(t0=0.0, tau=RESONANCE_TAU, q0x=0.0, q0y=0.0, qdotx=2.0, qdoty=0.0)
    return abs(delta_limit_ratio(seg, RESONANCE_WINDOW, WaveVector(1.0)) - 1.0)


class SincWindowCheck(BaseCheck):
    """Finite windows of the sinc^2 nascent delta against their 1/X bounds."""

    name = "sinc_window"
    check_name = "Sinc Window Convergence"
    default_tolerance = 1.0

    async def run(self, settings: CheckSettings) -> Dict[str, Any]:
        bounds = {
            "sinc_integral": 2.0 / WINDOW_HALF_WIDTH,
            "resonance_ratio": 2.0 / (RESONANCE_WINDOW * RESONANCE_TAU),
        }
        partials = await self.gather([
            Subtask("sinc_integral", _sinc_error),
            Subtask("resonance_ratio", _resonance_error),
        ], settings.threads)
        errors = self.failures(partials)
        if errors:
            return self.error(errors, self.default_tolerance)
        # achieved is the worst error in units of its bound
        achieved = max(partials[k] / bounds[k] for k in bounds)
        detail = {k: {"error": partials[k], "bound": bounds[k]} for k in bounds}
        return self.result(achieved <= self.default_tolerance, achieved, self.default_tolerance, detail)
