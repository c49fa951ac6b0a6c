"""Exception hierarchy shared across the package."""


class PseudoformError(Exception):
    """Base class for all errors raised by this package."""


class EvaluationDomainError(PseudoformError):
    """A field or expression was evaluated outside its domain, or the
    result was non-finite."""


class FormSyntaxError(PseudoformError):
    """A parse error in the expression DSL, with a 1-based column."""

    def __init__(self, message, column, component=None):
        self.column = column
        self.component = component
        prefix = "" if component is None else f"component {component}: "
        super().__init__(f"{prefix}{message} (column {column})")


class DegeneratePfaffianError(PseudoformError):
    """The Pfaffian vanishes (or nearly so) at a point where it must not."""


class DegenerateNormalizationError(PseudoformError):
    """The active metric cannot normalize the given Pfaffian."""


class DegenerateMetricError(PseudoformError):
    """The first fundamental form is singular, so g^ab does not exist."""


class FrameSingularityError(PseudoformError):
    """The frame matrix is singular (or became singular along a path)."""


class FramePfaffianMismatchError(PseudoformError):
    """The frame's normal coframe leg does not match the given Pfaffian."""


class ConstraintViolationError(PseudoformError):
    """A curve or state does not satisfy the Pfaffian constraint."""

    def __init__(self, message, residual):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class StraightLineError(PseudoformError):
    """Curvature is numerically zero, so the Frenet normal is undefined."""


class DegenerateWindowError(PseudoformError):
    """A precession window is too isotropic to define an oscillation plane."""


class ValidationError(PseudoformError):
    """Invalid argument or configuration value."""
