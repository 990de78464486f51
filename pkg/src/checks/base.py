import asyncio
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from ..physics.dissipation import QuadratureSpec
from ..utils.logger import logger


@dataclass
class Subtask:
    name: str
    fn: Callable[..., Any]
    args: tuple = ()
    timeout_s: float = 1800.0


@dataclass(frozen=True)
class CheckSettings:
    tolerance: Optional[float] = None
    seed: int = 1234
    pair_periods: float = 200.0
    threads: int = 1
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)


class BaseCheck:
    """One acceptance check: parallel subtasks reduced to a pass/fail verdict."""

    name = "base"
    check_name = "Base Check"
    default_tolerance = 0.0
    # whether a global --tolerance replaces default_tolerance
    accepts_override = False

    def tolerance(self, settings: CheckSettings) -> float:
        if self.accepts_override and settings.tolerance is not None:
            return settings.tolerance
        return self.default_tolerance

    async def gather(self, subtasks: List[Subtask], threads: int = 1) -> Dict[str, Any]:
        gate = asyncio.Semaphore(max(1, threads))

        async def run_subtask(subtask: Subtask):
            async with gate:
                logger.debug(f"{self.name}: {subtask.name} starting")
                return await asyncio.wait_for(asyncio.to_thread(subtask.fn, *subtask.args),
                                              timeout=subtask.timeout_s)

        results = await asyncio.gather(*[run_subtask(s) for s in subtasks], return_exceptions=True)
        return {s.name: r for s, r in zip(subtasks, results)}

    def failures(self, partials: Dict[str, Any]) -> Dict[str, str]:
        return {name: f"{type(r).__name__}: {r}" for name, r in partials.items() if isinstance(r, BaseException)}

    def result(self, passed: bool, achieved: float, tolerance: float, detail: Any) -> Dict[str, Any]:
        return {
            "check": self.name,
            "check_name": self.check_name,
            "status": "passed" if passed else "failed",
            "achieved": achieved,
            "tolerance": tolerance,
            "detail": detail,
        }

    def error(self, errors: Dict[str, str], tolerance: float) -> Dict[str, Any]:
        return {
            "check": self.name,
            "check_name": self.check_name,
            "status": "error",
            "achieved": float("nan"),
            "tolerance": tolerance,
            "detail": errors,
        }

    async def run(self, settings: CheckSettings) -> Dict[str, Any]:
        raise NotImplementedError
