import math
from typing import Any, Dict

from ..physics.dissipation import QuadratureSpec
from ..physics.oracle import dissipation_brute, pair_loop, spectral_pair_dissipation
from ..physics.response import OscillatorPair, ThermalState
from .base import BaseCheck, CheckSettings, Subtask

PAIR = OscillatorPair(alpha1=1.0, alpha2=1.0, omega1=1.0, omega2=2.0)
HALVING_TOLERANCE = 0.25


def _relative_error(periods: float, spec: QuadratureSpec) -> Dict[str, float]:
    omega = PAIR.omega_plus
    traj, wv = pair_loop(periods, omega, speed=1.0, wave_number=omega)
    state = ThermalState.zero()
    brute = dissipation_brute(PAIR, traj, wv.k, state, wv, spec)
    spectral = spectral_pair_dissipation(PAIR, traj, wv.k, state, wv, spec=spec, max_velocity_change=0.0)
    return {"brute": brute, "spectral": spectral, "relative_error": abs(spectral - brute) / abs(brute)}


class PairCheck(BaseCheck):
    """Single resonant pair: brute-force dissipation against the cross-term-free spectral sum."""

    name = "pair"
    check_name = "Single Pair Dissipation"
    default_tolerance = 0.05

    async def run(self, settings: CheckSettings) -> Dict[str, Any]:
        periods = settings.pair_periods
        subtasks = [
            Subtask("base", _relative_error, (periods, settings.quadrature)),
            Subtask("doubled", _relative_error, (2.0 * periods, settings.quadrature)),
        ]
        partials = await self.gather(subtasks, settings.threads)
        errors = self.failures(partials)
        if errors:
            return self.error(errors, self.default_tolerance)
        base = partials["base"]["relative_error"]
        doubled = partials["doubled"]["relative_error"]
        ratio = base / doubled if doubled > 0 else math.inf
        halving_ok = abs(ratio - 2.0) <= HALVING_TOLERANCE * 2.0
        detail = {"periods": periods, "runs": partials, "halving_ratio": ratio}
        return self.result(base <= self.default_tolerance and halving_ok, base, self.default_tolerance, detail)
