"""Exception and warning types raised across the package."""


class BesovLabError(Exception):
    """Base class for all package errors."""


class InvalidFieldError(BesovLabError, ValueError):
    """A field holds non-finite samples or is bound to the wrong grid."""


class AsymmetryError(BesovLabError, ValueError):
    """A spectrum meant to describe a real field is not Hermitian."""


class InvalidParameterError(BesovLabError, ValueError):
    pass


class DomainError(BesovLabError, ValueError):
    """A parameter lies outside the range where a formula is defined."""


class PreconditionError(BesovLabError, ValueError):
    pass


class ResolutionError(BesovLabError):
    """The grid cannot represent the requested object."""


class OutOfBandError(ResolutionError):
    """A frequency or dyadic block lies beyond what the grid supports."""


class TailEnergyError(ResolutionError):
    """A constructed datum has not decayed inside the periodic box."""


class CFLViolationError(BesovLabError):
    pass


class BlowUpError(BesovLabError):
    """The time integration produced NaN or grew past the guard."""

    def __init__(self, message, t_reached=None):
        super().__init__(message)
        self.t_reached = t_reached


class MaxStepsExceededError(BesovLabError):
    pass


class DegenerateInputError(BesovLabError, ValueError):
    pass


class ConfigurationError(BesovLabError, ValueError):
    pass


class ResolutionWarning(UserWarning):
    """Nonlinear products carry energy above the dealiasing cutoff."""


class BandLimitWarning(UserWarning):
    """A field has content beyond the top representable dyadic block."""
