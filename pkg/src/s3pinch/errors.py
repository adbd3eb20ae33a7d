"""Exception hierarchy shared across the toolkit."""


class S3PinchError(Exception):
    """Base class for all toolkit errors."""


class DomainError(S3PinchError, ValueError):
    """Input outside the mathematical domain of an operation."""


class DegenerateMetric(S3PinchError):
    """First fundamental form is (numerically) singular: E*G - F^2 too small."""


class BracketFailure(S3PinchError):
    """Monotone root solve could not bracket the target value."""


class GenusDetectionFailure(S3PinchError):
    """Integrated curvature is too far from an even multiple of 2*pi."""


class ChainViolation(S3PinchError):
    """A link of the tube-volume inequality chain failed numerically."""


class NotMinimal(S3PinchError):
    """Operation requires a minimal surface (H == 0)."""


class NoSpectralData(S3PinchError):
    """Surface has no closed-form first Laplace eigenvalue."""


class ImmersionFailure(S3PinchError):
    """Parametrization fails to be an immersion at some probe node."""


class FormatError(S3PinchError):
    """Malformed surface grid file."""


class OffSphere(FormatError):
    """Grid file contains a sample that is not a unit 4-vector."""


class ResolutionTooCoarse(FormatError):
    """Grid file resolution below the finite-difference floor."""
