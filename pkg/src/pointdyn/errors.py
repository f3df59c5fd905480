"""Exception hierarchy shared by every module."""


class DynamicsError(Exception):
    """Base class for all errors raised by pointdyn."""


class PreconditionError(DynamicsError, ValueError):
    pass


class NegativeIterateOnNonInvertible(DynamicsError):
    pass


class NonInvertible(DynamicsError):
    pass


# two-sided windows need an inverse; same failure mode
NonInvertibleTwoSided = NonInvertible


class DomainViolation(DynamicsError, ValueError):
    pass


class MixedSystemPoints(DynamicsError, TypeError):
    pass


class CapabilityMissing(DynamicsError):
    pass


class EmptyRegion(DynamicsError, ValueError):
    pass


class NotPeriodic(DynamicsError):
    pass


class PeriodNotPrime(DynamicsError):
    pass


class NotACover(DynamicsError):
    pass


class MeasureSystemMismatch(DynamicsError):
    pass


class GapTooSmall(DynamicsError):
    pass


class ConnectorNotFound(DynamicsError):
    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class WindowOverlap(DynamicsError):
    pass


class BudgetExceeded(DynamicsError):
    pass


class SeparationFailure(DynamicsError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class TracerUnavailable(DynamicsError):
    pass


class NoPeriodicInNeighborhood(DynamicsError):
    pass


class NoTransitiveVisit(DynamicsError):
    pass


class ConfigError(DynamicsError, ValueError):
    """Raised for schema violations; ``path`` names the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
