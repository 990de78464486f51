import asyncio
import math
from datetime import datetime
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

from .checks import CHECKS, CheckSettings
from .config import RunConfig
from .errors import FrictionError
from .physics.dissipation import band_integrate
from .physics.friction import (
    DiscSpec,
    FrictionLaw,
    LawKind,
    coefficient_T0,
    coefficient_finiteT,
    law_for,
    regime_ok,
    torque_finiteT,
    torque_numeric,
    torque_T0,
)
from .physics.trajectory import Trajectory
from .units import SI_LABELS
from .utils.logger import logger
from .utils.table_io import read_trajectory, units_line

NAN = float("nan")


def _flags(*names: Optional[str]) -> str:
    kept = [n for n in names if n]
    return ";".join(kept) if kept else "ok"


class FrictionBatch:
    """Runs table rows and verification checks for one run configuration."""

    def __init__(self, run_config: RunConfig, threads: int = 1, tolerance: Optional[float] = None,
                 verbose: bool = True):
        self.run_config = run_config
        self.threads = max(1, int(threads))
        self.tolerance = tolerance
        self.verbose = verbose

    # -- shared plumbing ---------------------------------------------------

    async def _map(self, fn: Callable[[Any], List[Any]], items: Sequence[Any]) -> List[Any]:
        gate = asyncio.Semaphore(self.threads)

        async def one(item):
            async with gate:
                return await asyncio.to_thread(fn, item)

        return await asyncio.gather(*[one(item) for item in items], return_exceptions=True)

    def _out(self, value: float, dimension: str) -> float:
        if self.run_config.natural_output or value is None or not math.isfinite(value):
            return value
        return self.run_config.units.from_natural(value, dimension)

    def _header(self, dimensions: Dict[str, str]) -> List[str]:
        if self.run_config.natural_output:
            labels = {column: "nat" for column in dimensions}
        else:
            labels = {column: SI_LABELS[dim] for column, dim in dimensions.items()}
        return [units_line(labels), f"config_sha256: {self.run_config.sha256}"]

    def _collect(self, results: Iterable[Any], keys: Sequence[float], width: int, dimension: str) -> List[List[Any]]:
        rows = []
        for key, result in zip(keys, results):
            if isinstance(result, BaseException):
                logger.error(f"row at {key:.6g} failed: {result}")
                rows.append([self._out(key, dimension)] + [NAN] * (width - 2) + [f"error:{type(result).__name__}"])
            else:
                rows.append(result)
        return rows

    def _report(self, command: str, columns: List[str], rows: List[List[Any]], header: List[str],
                start_time: datetime, series: tuple, accuracy_flag: Optional[str] = None) -> Dict[str, Any]:
        errors = sum(1 for row in rows if str(row[-1]).startswith("error"))
        inaccurate = accuracy_flag is not None and any(accuracy_flag in str(row[-1]).split(";") for row in rows)
        if errors:
            status = "error"
        elif inaccurate:
            status = "failure"
        else:
            status = "success"
        duration = (datetime.now() - start_time).total_seconds()
        if self.verbose:
            logger.info(f"{command}: {len(rows)} row(s) in {duration:.2f} seconds")
        return {
            "status": status,
            "command": command,
            "timestamp": start_time.isoformat(),
            "duration_seconds": duration,
            "header": header,
            "columns": columns,
            "rows": rows,
            "series": series,
        }

    # -- subcommands -------------------------------------------------------

    async def run_force(self) -> Dict[str, Any]:
        start_time = datetime.now()
        rc = self.run_config
        plates, metal = rc.plates, rc.metal
        velocities = list(rc.run.velocities)
        cold = FrictionLaw(LawKind.T0_CUBIC, coefficient_T0(metal, plates, rc.dissipation_constant))
        warm = None
        if not plates.thermal.is_zero:
            warm = FrictionLaw(LawKind.FINITE_T_LINEAR, coefficient_finiteT(
                metal, plates, rc.dissipation_constant, velocities, rc.run.regime_ratio))
        m_cap = rc.quadrature.m_max if rc.quadrature.m_max is not None else metal.m_max

        def row(v: float) -> List[Any]:
            flags = _flags(
                "T0_only" if warm is None else None,
                None if regime_ok(plates, v, rc.run.regime_ratio) else "regime",
                "small_m" if abs(v) / plates.d > m_cap else None,
            )
            return [
                self._out(v, "velocity"),
                self._out(cold.force(v), "pressure"),
                self._out(warm.force(v), "pressure") if warm is not None else NAN,
                flags,
            ]

        if self.verbose:
            logger.info(f"Evaluating friction laws at {len(velocities)} velocities...")
        rows = self._collect(await self._map(row, velocities), velocities, 4, "velocity")
        columns = ["v", "F_T0", "F_finiteT", "regime_flags"]
        header = self._header({"v": "velocity", "F_T0": "pressure", "F_finiteT": "pressure"})
        return self._report("force", columns, rows, header, start_time, (0, 2 if warm else 1))

    async def run_torque(self) -> Dict[str, Any]:
        start_time = datetime.now()
        rc = self.run_config
        plates, metal = rc.plates, rc.metal
        tolerance = self.tolerance if self.tolerance is not None else rc.run.tolerance
        c_p = coefficient_T0(metal, plates, rc.dissipation_constant)
        c_lin = None if plates.thermal.is_zero else coefficient_finiteT(metal, plates, rc.dissipation_constant)
        law = law_for(metal, plates, rc.dissipation_constant)
        omegas = list(rc.run.angular_velocities)

        def row(omega: float) -> List[Any]:
            disc = DiscSpec(rc.radius, omega)
            closed_T0 = torque_T0(disc, c_p)
            closed_lin = torque_finiteT(disc, c_lin) if c_lin is not None else NAN
            reference = closed_T0 if c_lin is None else closed_lin
            numeric = torque_numeric(disc, law, rc.run.n_annuli).value
            rel_err = abs(numeric - reference) / abs(reference) if reference != 0 else abs(numeric)
            flags = _flags(
                "T0_only" if c_lin is None else None,
                None if regime_ok(plates, disc.rim_speed, rc.run.regime_ratio) else "regime",
                "coarse" if rel_err > tolerance else None,
            )
            return [
                self._out(omega, "frequency"),
                self._out(closed_T0, "torque"),
                self._out(closed_lin, "torque"),
                self._out(numeric, "torque"),
                rel_err,
                flags,
            ]

        if self.verbose:
            logger.info(f"Integrating disc torque at {len(omegas)} angular velocities...")
        rows = self._collect(await self._map(row, omegas), omegas, 6, "frequency")
        columns = ["Omega", "tau_T0", "tau_finiteT", "tau_numeric", "rel_err", "flags"]
        header = self._header({"Omega": "frequency", "tau_T0": "torque", "tau_finiteT": "torque",
                               "tau_numeric": "torque", "rel_err": "dimensionless"})
        return self._report("torque", columns, rows, header, start_time, (0, 3), accuracy_flag="coarse")

    def _trajectory_for(self, v: float) -> Trajectory:
        settings = self.run_config.trajectory
        if settings.shape == "rectilinear":
            return Trajectory.rectilinear_loop(v, settings.leg_duration, angle=settings.angle)
        if settings.shape == "square":
            side = v * settings.leg_duration
            c, s = math.cos(settings.angle), math.sin(settings.angle)
            corners = [(0.0, 0.0), (side, 0.0), (side, side), (0.0, side)]
            return Trajectory.polygon_loop([(c * x - s * y, s * x + c * y) for x, y in corners], v)
        if settings.shape == "circle":
            return Trajectory.circle(settings.radius, v / settings.radius, settings.nodes)
        raise FrictionError(f"shape {settings.shape!r} is not built from a velocity grid")

    async def run_dissipation(self, trajectory_file: Optional[str] = None) -> Dict[str, Any]:
        start_time = datetime.now()
        rc = self.run_config
        path = trajectory_file or (rc.trajectory.file if rc.trajectory.shape == "file" else None)
        law = law_for(rc.metal, rc.plates, rc.dissipation_constant)

        def row(traj: Trajectory) -> List[Any]:
            result = band_integrate(traj, rc.plates, rc.metal, rc.quadrature,
                                    dissipation_constant=rc.dissipation_constant)
            mean_speed = traj.path_length / traj.duration
            closed = abs(law.force(mean_speed))
            rel_err = abs(result.mean_force - closed) / closed if closed > 0 else NAN
            return [
                self._out(mean_speed, "velocity"),
                result.mode.value,
                self._out(result.energy, "energy_per_area"),
                self._out(result.duration, "time"),
                self._out(result.power, "power_per_area"),
                self._out(result.mean_force, "pressure"),
                self._out(closed, "pressure"),
                rel_err,
            ]

        if path is not None:
            trajectories = [read_trajectory(path, rc.units)]
            keys = [0.0]
        else:
            keys = [v for v in rc.run.velocities if v > 0]
            trajectories = [self._trajectory_for(v) for v in keys]

        if self.verbose:
            logger.info(f"Band integration over {len(trajectories)} trajectory(ies)...")
        columns = ["v", "mode", "energy", "duration", "power", "mean_force", "closed_form_force", "rel_err"]
        rows = self._collect(await self._map(row, trajectories), keys, len(columns), "velocity")
        header = self._header({"v": "velocity", "energy": "energy_per_area", "duration": "time",
                               "power": "power_per_area", "mean_force": "pressure",
                               "closed_form_force": "pressure", "rel_err": "dimensionless"})
        return self._report("dissipation", columns, rows, header, start_time, (0, 5))

    async def run_verify(self, names: Optional[Sequence[str]] = None) -> Dict[str, Any]:
        start_time = datetime.now()
        rc = self.run_config
        names = list(rc.run.checks if names is None else names)
        settings = CheckSettings(
            tolerance=self.tolerance,
            seed=rc.run.seed,
            pair_periods=rc.run.pair_periods,
            threads=self.threads,
            quadrature=rc.quadrature,
        )

        results: List[Dict[str, Any]] = []
        for i, name in enumerate(names, start=1):
            check = CHECKS[name]()
            if self.verbose:
                logger.info(f"[{i}/{len(names)}] {check.check_name} starting...")
            try:
                result = await check.run(settings)
            except Exception as e:
                logger.error(f"Error in {name} check: {str(e)}")
                result = {
                    "check": name,
                    "check_name": check.check_name,
                    "status": "error",
                    "achieved": NAN,
                    "tolerance": check.tolerance(settings),
                    "detail": str(e),
                }
            if self.verbose:
                mark = "O" if result["status"] == "passed" else "X"
                logger.info(f"[{i}/{len(names)}] {check.check_name} complete {mark}\n")
            results.append(result)

        duration = (datetime.now() - start_time).total_seconds()
        failed = [r["check"] for r in results if r["status"] != "passed"]
        return {
            "status": "success" if not failed else "failure",
            "command": "verify",
            "timestamp": start_time.isoformat(),
            "duration_seconds": duration,
            "config_sha256": rc.sha256,
            "passed": len(results) - len(failed),
            "failed": failed,
            "checks": results,
        }


async def run_command(command: str, run_config: RunConfig, threads: int = 1, tolerance: Optional[float] = None,
                      verbose: bool = True, **kwargs) -> Dict[str, Any]:
    batch = FrictionBatch(run_config, threads, tolerance, verbose)
    runners = {
        "force": batch.run_force,
        "torque": batch.run_torque,
        "dissipation": batch.run_dissipation,
        "verify": batch.run_verify,
    }
    return await runners[command](**kwargs)
