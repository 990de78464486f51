import math
from typing import Any, Dict

from ..physics.dissipation import PlateConfig
from ..physics.friction import (
    DiscSpec,
    FrictionLaw,
    LawKind,
    coefficient_T0,
    coefficient_finiteT,
    frictional_power,
    torque_finiteT,
    torque_numeric,
    torque_T0,
)
from ..physics.response import DrudeMetal, ThermalState
from .base import BaseCheck, CheckSettings, Subtask


def _rel(value: float, expected: float) -> float:
    return abs(value - expected) / abs(expected)


def _closed_forms() -> float:
    metal = DrudeMetal(plasma_frequency=1.0, relaxation=1.0, density=1.0)
    disc = DiscSpec(1.0, 1.0)
    cold = PlateConfig(1.0, 1.0, 1.0, ThermalState.zero())
    warm = PlateConfig(1.0, 1.0, 1.0, ThermalState(1.0))
    return max(
        _rel(torque_T0(disc, 1.0), -math.pi / 3.0),
        _rel(torque_finiteT(disc, 1.0), -math.pi / 2.0),
        _rel(coefficient_T0(metal, cold, dissipation_constant=1.0), 15.0 * math.pi ** 2 / 64.0),
        _rel(coefficient_finiteT(metal, warm, dissipation_constant=1.0), math.pi ** 4 / 4.0),
    )


def _numeric(kind: LawKind, expected: float) -> float:
    return _rel(torque_numeric(DiscSpec(1.0, 1.0), FrictionLaw(kind, 1.0)).value, expected)


def _power_balance() -> float:
    disc = DiscSpec(0.8, 1.7)
    worst = 0.0
    for law in (FrictionLaw(LawKind.T0_CUBIC, 2.5), FrictionLaw(LawKind.FINITE_T_LINEAR, 0.4)):
        torque = torque_numeric(disc, law).value
        worst = max(worst, _rel(-torque * disc.omega, frictional_power(disc, law)))
    return worst


class TorqueCheck(BaseCheck):
    name = "torque"
    check_name = "Disc Torque Closed Forms"
    default_tolerance = 1e-9
    accepts_override = True

    async def run(self, settings: CheckSettings) -> Dict[str, Any]:
        tolerance = self.tolerance(settings)
        subtasks = [
            Subtask("closed_forms", _closed_forms),
            Subtask("numeric_T0", _numeric, (LawKind.T0_CUBIC, -math.pi / 3.0)),
            Subtask("numeric_finiteT", _numeric, (LawKind.FINITE_T_LINEAR, -math.pi / 2.0)),
            Subtask("power_balance", _power_balance),
        ]
        partials = await self.gather(subtasks, settings.threads)
        errors = self.failures(partials)
        if errors:
            return self.error(errors, tolerance)
        achieved = max(partials.values())
        return self.result(achieved <= tolerance, achieved, tolerance, partials)
