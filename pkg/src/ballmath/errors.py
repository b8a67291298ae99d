"""Error types raised by the public evaluation entry points."""


class BallmathError(Exception):
    pass


class UnsupportedPrecision(BallmathError):
    """Working precision would exceed 4608 bits (no fallback algorithm)."""


class UnsupportedArgument(BallmathError):
    """Argument exponent outside the range the stored constants cover."""


class DomainError(BallmathError):
    """Argument outside the function's domain (e.g. log of x <= 0)."""


class InvalidInput(BallmathError):
    """NaN or otherwise meaningless input."""
