"""Exception types shared across the package."""


class RwreError(Exception):
    """Base class for all library errors."""


class ParameterError(RwreError, ValueError):
    """An argument is outside its documented domain."""


class NumericsError(RwreError):
    """A numerical routine could not reach its accuracy target."""


class NoFiniteKappaError(RwreError):
    """The moment equation E[rho^s] = 1 has no root below the search cap."""


class RegimeError(RwreError):
    """The requested quantity is undefined for the walk's regime."""


class TruncatedTrajectoryError(RwreError):
    """A step-count conversion was asked for a walk that never reached its target."""


class DegenerateDataError(RwreError):
    """The observed data cannot support the requested computation."""


class DataGenerationError(RwreError):
    """No usable replication could be produced."""


class StabilityError(RwreError):
    """The computation would be dominated by floating-point cancellation."""


class ConfigError(RwreError, ValueError):
    """A configuration document is malformed or has unknown fields."""
