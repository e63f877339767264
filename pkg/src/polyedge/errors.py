"""Exception types shared across the package."""


class PolyedgeError(Exception):
    """Base class for all polyedge errors."""


class DegenerateBasisError(PolyedgeError, ValueError):
    """The requested polynomial basis cannot be represented on the grid."""


class ConfigurationError(PolyedgeError, ValueError):
    """Inconsistent or out-of-range configuration values."""


class DivergenceError(PolyedgeError, RuntimeError):
    """The iterative solver produced non-finite values."""


class PnmFormatError(PolyedgeError, ValueError):
    """Malformed or unsupported PGM/PNM content."""
