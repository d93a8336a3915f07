"""Exception types raised across the package."""


class WMetricError(Exception):
    """Base class for all package errors."""


class InvalidInputError(WMetricError, ValueError):
    pass


class PreconditionError(WMetricError, ValueError):
    pass


class DomainViolationError(PreconditionError):
    """A point (or a curve sample) lies outside the domain."""


class DegenerateMajorantError(WMetricError, ValueError):
    pass


class ResolutionError(WMetricError, RuntimeError):
    """The grid at the requested spacing does not connect the endpoints."""


class ConvergenceError(WMetricError, RuntimeError):
    """Adaptive refinement stopped at its depth limit without converging.

    The last two iterates are kept on the exception so callers can decide
    whether the result is usable anyway.
    """

    def __init__(self, message, previous, last):
        super().__init__(f"{message} (previous={previous!r}, last={last!r})")
        self.previous = previous
        self.last = last


class ConfigError(WMetricError, ValueError):
    pass
