class DomainError(ValueError):
    """Argument outside the domain of an operation."""


class ConvergenceError(RuntimeError):
    """An iteration stopped before meeting its tolerance."""

    def __init__(self, message, last=None, residual=None):
        super().__init__(f"{message} (last={last!r}, residual={residual!r})")
        self.last = last
        self.residual = residual


class CurveProximityError(ValueError):
    """The point is too close to the range curve for a winding number."""


class SingularSystemError(RuntimeError):
    """An extrapolation system is singular or numerically rank deficient."""


class IncompleteTableError(ValueError):
    """A coefficient table is missing values needed for interpolation."""


class UntrackedIndexError(IndexError):
    """An extreme eigenvalue index outside the precomputed window."""
