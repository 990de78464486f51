#!/usr/bin/env python3
"""
Example usage of casimir-friction as a library.

This demonstrates how to call the physics modules and the batch runner
programmatically rather than through the CLI.
"""

import asyncio
import json

from src.batch import FrictionBatch
from src.config import load_run_config
from src.physics import (
    DiscSpec,
    DrudeMetal,
    PlateConfig,
    ThermalState,
    Trajectory,
    band_integrate,
    coefficient_T0,
    law_for,
    torque_numeric,
    torque_T0,
)


def example_friction_law():
    """Zero-temperature friction coefficient and the disc torque."""
    print("=" * 80)
    print("Example 1: Friction Law and Disc Torque")
    print("=" * 80 + "\n")

    metal = DrudeMetal(plasma_frequency=1.0, relaxation=1.0, density=1.0)
    plates = PlateConfig.for_metal(metal, d=1.0, thermal=ThermalState.zero())
    c_p = coefficient_T0(metal, plates)
    disc = DiscSpec(radius=1.0, omega=1e-3)

    print(f"C_P = {c_p:.6e}")
    print(f"closed-form torque = {torque_T0(disc, c_p):.6e}")
    print(f"numeric torque     = {torque_numeric(disc, law_for(metal, plates)).value:.6e}")


def example_band_integration():
    """Energy dissipated over a rectilinear loop, compared with the friction law."""
    print("\n" + "=" * 80)
    print("Example 2: Band Integration")
    print("=" * 80 + "\n")

    metal = DrudeMetal(plasma_frequency=1.0, relaxation=1.0, density=1.0)
    plates = PlateConfig.for_metal(metal, d=1.0, thermal=ThermalState.zero())
    v = 1e-3
    result = band_integrate(Trajectory.rectilinear_loop(v, 10.0), plates, metal)
    closed = abs(law_for(metal, plates).force(v))

    print(f"energy per area  = {result.energy:.6e}")
    print(f"mean force       = {result.mean_force:.6e}")
    print(f"friction law     = {closed:.6e}")
    print(f"relative error   = {abs(result.mean_force - closed) / closed:.2e}")


async def example_batch():
    """Force table and two acceptance checks through the batch runner."""
    print("\n" + "=" * 80)
    print("Example 3: Batch Runner")
    print("=" * 80 + "\n")

    batch = FrictionBatch(load_run_config("configs/gold.ini"), threads=2, verbose=False)
    forces = await batch.run_force()
    for row in forces["rows"][:3]:
        print(row)

    report = await batch.run_verify(["torque", "sinc_window"])
    print(json.dumps({r["check"]: r["status"] for r in report["checks"]}, indent=2))


if __name__ == "__main__":
    example_friction_law()
    example_band_integration()
    asyncio.run(example_batch())
