"""Exception hierarchy shared by every module.

Entry points translate these into exit codes (CLI) or JSON error bodies
(service); library code only raises.
"""
from __future__ import annotations

from typing import Any


class SeaDynError(Exception):
    """Base class for every error raised by sea-dyn."""


class OperatorError(SeaDynError, ValueError):
    pass


class NonHermitianError(OperatorError):
    def __init__(self, violation: float, scale: float):
        self.violation = violation
        self.scale = scale
        super().__init__(
            f"matrix is not Hermitian: max|M - M^dagger| = {violation:.3e} "
            f"exceeds tolerance for max|M| = {scale:.3e}"
        )


class DimensionMismatchError(OperatorError):
    def __init__(self, left: tuple, right: tuple):
        self.left = left
        self.right = right
        super().__init__(f"operand shapes differ: {left} vs {right}")


class InvariantViolation(SeaDynError):
    def __init__(self, message: str, value: float | None = None):
        self.value = value
        super().__init__(message)


class DegenerateSpectrumError(SeaDynError):
    def __init__(self, t: float, gap: float):
        self.t = t
        self.gap = gap
        super().__init__(f"degenerate spectrum at t={t:g}: smallest gap {gap:.3e}")


class DomainError(SeaDynError, ValueError):
    pass


class OracleRefusal(SeaDynError):
    """The Gram-determinant construction is undefined for this state."""

    def __init__(self, message: str, rank: int | None = None, dim: int | None = None):
        self.rank = rank
        self.dim = dim
        super().__init__(message)


class ThermoError(SeaDynError, ValueError):
    pass


class IntegrationAbort(SeaDynError):
    """Raised by the evolution engine; carries enough context to diagnose the run."""

    def __init__(self, reason: str, t: float, step_history: list[dict[str, Any]], monitor: Any = None):
        self.reason = reason
        self.t = t
        self.step_history = step_history
        self.monitor = monitor
        super().__init__(f"integration aborted at t={t:.6g}: {reason}")


class ConfigError(SeaDynError, ValueError):
    def __init__(self, diagnostics: list[str]):
        self.diagnostics = list(diagnostics)
        super().__init__("invalid scenario config: " + "; ".join(self.diagnostics))
