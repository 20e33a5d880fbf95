"""Exception and warning types shared across the package."""


class SwansonError(Exception):
    """Base class for all domain errors raised by swanson_dgf."""


class DegenerateMapError(SwansonError):
    """omega - alpha - gamma = 0: the oscillator map has no finite mass."""


class BoundaryCaseError(SwansonError):
    """Omega^2 = 0: the parameter point sits on a region boundary."""


class WrongRegionError(SwansonError):
    """Operation requested outside its region of validity."""


class SingularFactorizationError(SwansonError):
    """Normal-ordered factorization does not exist (vanishing (2,2) entry)."""


class PoleAtSinZeroError(SwansonError):
    """Closed form evaluated at a zero of sin(|Omega| beta / 2)."""


class OutOfDomainError(SwansonError):
    """Reduced thermodynamics requested outside 0 < beta*|Omega| < 2*pi."""


class ZeroCrossingError(SwansonError):
    """Logarithmic derivative requested at a zero of the Mathieu solution."""


class NonFiniteError(SwansonError):
    """ODE solution overflowed (unstable Mathieu parameter region)."""


class NonHermitianError(SwansonError):
    """A hermitian matrix was required but the input is not hermitian."""


class StepTooLargeError(SwansonError):
    """Propagation trace drift exceeded its bound; reduce the step size."""


class OverflowSaturationError(SwansonError):
    """Exponential argument beyond float range (exponent > 700)."""


class ResonanceWarning(UserWarning):
    """Printed closed form degenerates at W = 2*Omega; quadrature used."""


class ValidityWarning(UserWarning):
    """Perturbative drive strength outside its soft validity range."""
