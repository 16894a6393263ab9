"""Exception types shared across the package."""


class QSeriesError(Exception):
    """Base class for every error raised by qrr."""


class NotAUnit(QSeriesError, ArithmeticError):
    """Lowest coefficient is not +-a^e, so the series cannot be inverted."""


class EmptyOverlap(QSeriesError):
    """Two series have no common guaranteed window."""


class OutOfRange(QSeriesError, IndexError):
    """Requested exponent lies outside the guaranteed window."""


class AExponentOverflow(QSeriesError):
    """An a-exponent exceeded the configured cap."""


class NonTerminating(QSeriesError):
    """An infinite product whose factors never become 1 + O(q^(N+1))."""


class InvalidTheta(QSeriesError, ValueError):
    """Theta arguments whose product is not a positive pure q-power."""


class TailNotCertified(QSeriesError):
    """A summation window cannot be proven to cover the requested order."""


class BadParams(QSeriesError, ValueError):
    """Parameters outside an identity's or theorem's schema."""
