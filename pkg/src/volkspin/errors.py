"""Exception types raised by the volkspin package."""


class VolkspinError(Exception):
    """Base class for all package-specific errors."""


class DegeneratePulse(VolkspinError):
    """The pulse has no field content where one is required (e.g. zero |E| integral)."""


class StepFailure(VolkspinError):
    """An adaptive ODE integration could not meet its error tolerance."""


class OverlapViolation(VolkspinError):
    """The wave packet and the laser pulse overlap where they must not."""


class BoxTooSmall(VolkspinError):
    """The coordinate box could not be widened enough to capture the packet."""


class GridTooCoarse(VolkspinError):
    """A discrete grid fails its adequacy check (norm deviation too large)."""


class GridTooSmall(VolkspinError):
    """Too few grid nodes for the requested finite-difference stencil."""


class RepresentationMismatch(VolkspinError):
    """A wave-function sample is in the wrong representation for the operation."""


class FieldNotConstant(VolkspinError):
    """The vector potential is not constant over the packet support."""


class ZeroMomentum(VolkspinError):
    """An operator is undefined at zero momentum (direction-dependent limit)."""


class ToleranceNotMet(VolkspinError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Carries the best value and error estimate achieved.
    """

    def __init__(self, message, value=None, error_estimate=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class ConfigError(VolkspinError):
    """Invalid experiment configuration; message names the offending field."""
