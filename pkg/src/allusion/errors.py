"""Exception types shared across the package."""


class AllusionError(Exception):
    """Base class for all package-specific errors."""


class ParseError(AllusionError):
    """A file could not be parsed; the message names the offending line."""


class ValidationError(AllusionError):
    """Input data violates a structural invariant."""


class DegenerateAgreementError(AllusionError):
    """Chance-corrected agreement is undefined (expected overlap equals 1)."""


class UnsupportedModelError(AllusionError):
    """The requested operation is not defined for this retrieval model."""
