import math
from typing import Any, Dict

from ..physics.dissipation import PlateConfig, QuadratureSpec, band_integrate, effective_dissipation_constant
from ..physics.friction import law_for
from ..physics.response import DrudeMetal, ThermalState, alpha_imag_density
from ..physics.trajectory import Trajectory
from .base import BaseCheck, CheckSettings, Subtask

METAL = DrudeMetal(plasma_frequency=1.0, relaxation=1.0, density=1.0)
SLOPE_TOLERANCE = 1e-2
# (regime, beta, velocities, expected slope)
CASES = (
    ("T0", math.inf, (1e-3, 2e-3), 3.0),
    ("finiteT", 1.0, (1e-3, 2e-3), 1.0),
)
# spectral variable well below the relaxation rate
SMALL_M = 1e-4


def _forces(beta: float, velocities: tuple, spec: QuadratureSpec) -> Dict[str, Any]:
    thermal = ThermalState(beta)
    config = PlateConfig.for_metal(METAL, 1.0, thermal)
    if not thermal.is_zero:
        spec = QuadratureSpec(rel_tol=spec.rel_tol, k_max_factor=spec.k_max_factor,
                              m_max=spec.thermal_cutoff / beta, max_subdivisions=spec.max_subdivisions,
                              m_panel_nodes=spec.m_panel_nodes, thermal_cutoff=spec.thermal_cutoff)
    law = law_for(METAL, config)
    pipeline, closed = [], []
    for v in velocities:
        result = band_integrate(Trajectory.rectilinear_loop(v, 1.0), config, METAL, spec)
        pipeline.append(result.mean_force)
        closed.append(abs(law.force(v)))
    errors = [abs(p - c) / c for p, c in zip(pipeline, closed)]
    slope = math.log(pipeline[1] / pipeline[0]) / math.log(velocities[1] / velocities[0])
    return {"pipeline": pipeline, "closed_form": closed, "relative_errors": errors, "slope": slope}


def drude_density(m: float) -> Dict[str, Any]:
    """Linear small-m density against Im[(eps - 1)/(eps + 1)] of the Drude permittivity."""
    expected = alpha_imag_density(m, METAL).value / m
    recovered = effective_dissipation_constant(METAL, m)
    return {"recovered": recovered, "expected": expected,
            "relative_errors": [abs(recovered - expected) / expected]}


class PipelineCheck(BaseCheck):
    name = "pipeline"
    check_name = "Band Integration vs Friction Coefficients"
    default_tolerance = 1e-2

    async def run(self, settings: CheckSettings) -> Dict[str, Any]:
        subtasks = [Subtask(regime, _forces, (beta, velocities, settings.quadrature))
                    for regime, beta, velocities, _ in CASES]
        subtasks.append(Subtask("drude_density", drude_density, (SMALL_M,)))
        partials = await self.gather(subtasks, settings.threads)
        errors = self.failures(partials)
        if errors:
            return self.error(errors, self.default_tolerance)
        achieved = max(max(p["relative_errors"]) for p in partials.values())
        slopes_ok = all(abs(partials[regime]["slope"] - expected) <= SLOPE_TOLERANCE
                        for regime, _, _, expected in CASES)
        return self.result(achieved <= self.default_tolerance and slopes_ok, achieved,
                           self.default_tolerance, partials)
