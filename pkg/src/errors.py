"""Exception hierarchy for casimir-friction."""

from typing import Optional


class FrictionError(Exception):
    """Base class for every error raised by the library."""


class DomainError(FrictionError, ValueError):
    """An argument lies outside the domain of the operation."""


class NumericRangeError(FrictionError, ArithmeticError):
    """A result could not be represented as a finite float."""


class DegenerateMatchingError(DomainError):
    """Interval matching was requested at zero frequency."""


class SingularKernelError(DomainError):
    """A kernel was evaluated at its singular point."""


class SingularMappingError(DomainError):
    """The half-space substitution was evaluated on its pole."""


class LoopViolationError(FrictionError):
    """A trajectory does not return to its starting position."""


class AccuracyError(FrictionError):
    """A quadrature did not reach the requested accuracy."""

    def __init__(self, message: str, estimate: float = float("nan"), bound: float = float("nan")):
        super().__init__(f"{message} (estimate={estimate:.6e}, error bound={bound:.3e})")
        self.estimate = estimate
        self.bound = bound


class ConfigParseError(FrictionError):
    """A run configuration or trajectory file could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        where = ""
        if source:
            where = f"{source}:"
        if line is not None:
            where = f"{where}{line}: " if where else f"line {line}: "
        elif where:
            where = f"{where} "
        super().__init__(f"{where}{message}")
        self.line = line
        self.source = source
