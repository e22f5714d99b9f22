"""Exception hierarchy shared by every padyn module."""


class PadicError(Exception):
    """Base class for all padyn errors."""


class PrecisionExhausted(PadicError):
    """A truncated computation ran out of p-adic digits."""


class AmbiguousValuation(PrecisionExhausted):
    """A valuation was needed but the value is only known to be small."""


class Undecidable(PrecisionExhausted):
    """A membership question cannot be settled at the stored precision."""


class DivisionByZero(PadicError, ZeroDivisionError):
    pass


class DomainError(PadicError, ValueError):
    pass


class NotACriticalPoint(PadicError, ValueError):
    pass


class ParseError(PadicError, ValueError):
    pass
