"""Error taxonomy shared by all modules.

Every failure mode callers are expected to branch on gets its own class so
that tests and the CLI can distinguish bad input from genuine degeneracy from
a resource guard tripping.
"""

from __future__ import annotations


class StripComplexError(Exception):
    """Base class for everything this package raises on purpose."""


class InvalidInputError(StripComplexError, ValueError):
    """Input violates a documented precondition."""


class OrderingError(InvalidInputError):
    """Vertex coordinates are not in the required strict order."""


class ArityError(InvalidInputError):
    """Wrong number of coordinates or decorations for the given kind."""


class DecorationOverlapError(InvalidInputError):
    """Decorating horoballs overlap (tangency is allowed, overlap is not)."""


class NoCommonPerpendicularError(StripComplexError):
    """The two geodesics cross or are asymptotic, so no common
    perpendicular exists."""


class DegenerateConfigurationError(StripComplexError):
    """A construction hit a genuinely degenerate configuration, e.g. a
    gauge system whose condition number exceeds the safe bound."""

    def __init__(self, message: str, condition_number: float | None = None):
        if condition_number is not None:
            message = f"{message} (condition number {condition_number:.3e})"
        super().__init__(message)
        self.condition_number = condition_number


class UnsupportedOperationError(StripComplexError):
    """Operation is well defined for some kinds but not this one."""


class ResourceGuardError(StripComplexError):
    """Requested enumeration exceeds the built-in size guards."""


class WrongCodimensionError(InvalidInputError):
    """Simplex pair or simplex does not have the codimension the
    operation requires."""


class RankDeficiencyError(StripComplexError):
    """A matrix that should have full rank (or corank one) does not."""
