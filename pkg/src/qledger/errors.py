"""Exception types shared across the package."""

from __future__ import annotations


class QledgerError(Exception):
    """Base class for all package-specific failures."""


class NotHermitian(QledgerError, ValueError):
    """Matrix deviates from its conjugate transpose beyond tolerance."""


class NoConvergence(QledgerError, RuntimeError):
    """Iterative eigensolver hit its sweep cap before the target residual.

    The leftover off-diagonal mass is kept on the ``residual`` attribute.
    """

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class DimMismatch(QledgerError, ValueError):
    """Operands have incompatible dimensions."""


class NonPositiveTemperature(QledgerError, ValueError):
    """Thermal quantities need a strictly positive temperature."""


class ProbabilityOutOfRange(QledgerError, ValueError):
    """A probability parameter fell outside [0, 1]."""


class NegativeTime(QledgerError, ValueError):
    """Evolution times must be non-negative."""


class InvalidSpec(QledgerError, ValueError):
    """A scenario specification is incomplete or inconsistent."""


class TrackingFailure(QledgerError, RuntimeError):
    """Branch continuity between consecutive samples is ambiguous.

    Raised instead of silently relabeling when a matched eigenpair overlaps
    its predecessor too weakly while its eigenvalue is well separated from
    every other branch.  ``step_index`` is the interval where it happened.
    """

    def __init__(self, message: str, step_index: int = -1):
        super().__init__(message)
        self.step_index = step_index


class TrajectoryFormatError(QledgerError, ValueError):
    """A trajectory file is structurally invalid; message names the record."""
