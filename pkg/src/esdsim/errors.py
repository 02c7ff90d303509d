"""Exception types shared across the package.

Validation errors carry the measured defect so callers (and the CLI) can
report how far an input was from satisfying the contract, not just that
it failed.
"""

from __future__ import annotations


class ValidationError(ValueError):
    """Base for checks that measure a numeric defect."""

    def __init__(self, message: str, defect: float = float("nan")):
        super().__init__(message)
        self.defect = defect


class NotHermitian(ValidationError):
    """Matrix differs from its conjugate transpose beyond tolerance."""


class TraceDefect(ValidationError):
    """Trace differs from the required value beyond tolerance."""


class NotPositive(ValidationError):
    """Smallest eigenvalue (or Bell weight) is below the allowed floor."""


class NotCP(ValidationError):
    """Choi matrix has a negative eigenvalue beyond tolerance."""


class ChannelNotTP(ValidationError):
    """Operator sum is not trace preserving at the required gate."""


class NumericalDomain(ValidationError):
    """A radicand or similar intermediate left its valid domain."""


class OutOfRange(ValueError):
    """Scalar parameter outside its documented interval."""


class DimensionMismatch(ValueError):
    """Operator shape does not match the declared mode."""


class EmptySeries(ValueError):
    """A time series argument contained no samples."""


class IntegratorFailure(RuntimeError):
    """Step refinement hit its floor without meeting the tolerance."""
