"""Exception types shared across the package."""


class CentreFallError(Exception):
    """Base class for all package errors."""


class ValidationError(CentreFallError, ValueError):
    """An input violates a precondition (bad sign, bad shape, bad file)."""


class DomainError(CentreFallError, ValueError):
    """A well-formed input lies outside the domain of the requested quantity.

    Raised for imaginary falling times, couplings below the falling limit,
    degenerate normalizations and unusable propagation grids.
    """


class BelowFallingLimitError(DomainError):
    """The drive is too weak for the particle to fall into the wire.

    Attributes
    ----------
    critical_voltage : float or None
        Voltage (V) at which falling becomes possible, when known.
    """

    def __init__(self, message, critical_voltage=None):
        super().__init__(message)
        self.critical_voltage = critical_voltage


class GridError(DomainError):
    """The radial grid cannot resolve the requested state."""

    def __init__(self, message, suggested=None):
        super().__init__(message)
        self.suggested = suggested


class PropagationError(CentreFallError, RuntimeError):
    """The time stepper produced non-finite amplitudes."""


class SingularIntegralError(DomainError):
    """A moment integral diverges at the origin."""
