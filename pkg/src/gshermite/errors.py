"""Exception types shared across the package."""


class GSHermiteError(Exception):
    """Base class for all package errors."""


class SequenceRangeError(GSHermiteError, IndexError):
    """Index outside the range of an explicit weight table."""


class CapError(GSHermiteError, RuntimeError):
    """Adaptive maximizer search exceeded its hard cap."""


class QuadratureError(GSHermiteError, RuntimeError):
    """Eigensolver failure while building a quadrature rule."""


class ShapeError(GSHermiteError, ValueError):
    """Incompatible dimensions or truncation boxes."""


class AlignmentError(GSHermiteError, ValueError):
    """Sampled input does not sit on the quadrature nodes."""


class DataError(GSHermiteError, ValueError):
    """NaN or otherwise unusable numeric input."""


class InsufficientDataError(GSHermiteError, ValueError):
    """Too few usable coefficients for a fit."""


class HeadroomError(GSHermiteError, ValueError):
    """Truncation box too small for the requested operator."""
