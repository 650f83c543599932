"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`NehariShapeError`, so callers (the CLI in particular) can separate
numerical precondition failures from programming errors.
"""


class NehariShapeError(Exception):
    """Base class for all library errors."""


class DimensionError(NehariShapeError, ValueError):
    """Array or matrix has the wrong shape."""


class DomainError(NehariShapeError, ValueError):
    """Parameter outside its admissible range (e.g. a <= 0, p < 2)."""


class ModeIndexError(NehariShapeError, ValueError):
    """Eigenmode index below 1."""


class EvaluationError(NehariShapeError, ArithmeticError):
    """An integrand produced a non-finite value at a quadrature node."""


class PreconditionError(NehariShapeError):
    """A mathematical precondition of a formula does not hold."""


class InvariantViolation(NehariShapeError):
    """A quantity that must satisfy an identity or sign condition does not."""


class SingularityError(NehariShapeError, ArithmeticError):
    """A closed-form expression is evaluated too close to a pole."""


class UnsupportedFieldError(NehariShapeError, TypeError):
    """The operation needs a field structure the caller did not supply."""


class DegenerateTrajectoryError(NehariShapeError):
    """Nehari rescaling is undefined along the trajectory."""


class FoldError(NehariShapeError):
    """The deformation is not orientation preserving on the grid."""


class ConvergenceError(NehariShapeError):
    """An iterative method stopped without meeting its tolerance."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history or [])


class SolverError(NehariShapeError):
    """Nonlinear solver divergence."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


class ConfigError(NehariShapeError, ValueError):
    """Scenario configuration could not be parsed or validated."""

    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field
