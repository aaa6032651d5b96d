"""Exception types shared across the library.

Every error raised deliberately by this package derives from
:class:`BeamOutageError`, so callers can catch the whole family with one
clause while still distinguishing the specific failure modes below.
"""

__all__ = [
    "BeamOutageError",
    "InvalidModelError",
    "NotPositiveDefiniteError",
    "DegenerateNormalError",
    "UndefinedDirectionError",
    "WrongRegimeError",
    "BeamWraparoundError",
    "ToleranceNotMetError",
    "ConfigError",
]


class BeamOutageError(Exception):
    """Base class for all errors raised by this package."""


class InvalidModelError(BeamOutageError, ValueError):
    """Positioning-error model parameters violate their constraints."""


class NotPositiveDefiniteError(BeamOutageError, ValueError):
    """A covariance matrix is not symmetric positive definite."""


class DegenerateNormalError(BeamOutageError, ValueError):
    """A half-plane boundary normal is the zero vector."""


class UndefinedDirectionError(BeamOutageError, ValueError):
    """A pointing direction was requested for the zero vector."""


class WrongRegimeError(BeamOutageError, ValueError):
    """An operation that only makes sense in the probabilistic regime was
    invoked on a link that is deterministically covered or in outage."""


class BeamWraparoundError(BeamOutageError, ValueError):
    """The main-lobe coverage half-angle reaches or exceeds pi/2, so the
    wedge-boundary slope is undefined (tangent singularity)."""


class ToleranceNotMetError(BeamOutageError, ArithmeticError):
    """A numerical routine could not certify the requested tolerance."""


class ConfigError(BeamOutageError, ValueError):
    """A scenario configuration file is malformed or inconsistent."""
