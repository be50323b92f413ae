"""Exception hierarchy.

Every error raised on bad input derives from :class:`ValidationError`, which the
command line maps to exit status 2.  Numerical trouble during simulation derives
from :class:`Unstable` / :class:`StepRejected`.
"""

from __future__ import annotations


class DQFormError(Exception):
    """Base class for all package errors."""


class ValidationError(DQFormError, ValueError):
    """Input violates an operation's precondition."""


class NonAppreciableDivisor(ValidationError, ZeroDivisionError):
    pass


class NonAppreciable(ValidationError, ZeroDivisionError):
    pass


class ZeroDivisor(ValidationError, ZeroDivisionError):
    pass


class DomainError(ValidationError):
    pass


class BadAxis(ValidationError):
    pass


class NotUnit(ValidationError):
    pass


class NotImaginary(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class SizeMismatch(DimensionMismatch):
    pass


class Singular(ValidationError):
    pass


class NotHermitian(ValidationError):
    pass


class MissingTwists(ValidationError):
    pass


class NotACycle(ValidationError):
    pass


class Disconnected(ValidationError):
    pass


class AdjacencyInvalid(ValidationError):
    pass


class NoTarget(ValidationError):
    pass


class ConvergenceFailure(DQFormError, ArithmeticError):
    """Jacobi iteration hit its sweep cap."""


class StepRejected(DQFormError, ArithmeticError):
    """An integration step drifted too far off the unit-pose manifold."""


class Unstable(DQFormError, ArithmeticError):
    """Simulated state grew beyond the instability threshold."""
