import math
from typing import Any, Dict

from ..physics.trajectory import SpectralMode, Trajectory, WaveVector, smeared_I
from .base import BaseCheck, CheckSettings, Subtask

TAUS = (100.0, 200.0, 400.0)
WINDOW = (1.0, 0.15)
BAND = (0.1, 1.9)


def _window(omega: float) -> float:
    center, width = WINDOW
    return math.exp(-0.5 * ((omega - center) / width) ** 2)


def _relative_error(tau: float) -> float:
    # each leg is one segment of half-duration tau
    traj = Trajectory.rectilinear_loop(1.0, 2.0 * tau)
    wv = WaveVector(1.0)
    finite = smeared_I(traj, wv, _window, *BAND, mode=SpectralMode.FINITE)
    limit = smeared_I(traj, wv, _window, *BAND, mode=SpectralMode.DELTA)
    return abs(finite - limit) / abs(limit)


class DeltaLimitCheck(BaseCheck):
    """Smeared spectral weight approaches its delta limit as 1/tau."""

    name = "delta_limit"
    check_name = "Delta-Limit Convergence"
    default_tolerance = 0.2

    async def run(self, settings: CheckSettings) -> Dict[str, Any]:
        subtasks = [Subtask(f"tau_{tau:g}", _relative_error, (tau,)) for tau in TAUS]
        partials = await self.gather(subtasks, settings.threads)
        errors = self.failures(partials)
        if errors:
            return self.error(errors, self.default_tolerance)
        errs = [partials[s.name] for s in subtasks]
        ratios = [a / b if b > 0 else math.inf for a, b in zip(errs[:-1], errs[1:])]
        achieved = max(abs(r - 2.0) / 2.0 for r in ratios)
        detail = {"relative_errors": dict(zip([s.name for s in subtasks], errs)), "halving_ratios": ratios}
        return self.result(achieved <= self.default_tolerance, achieved, self.default_tolerance, detail)
