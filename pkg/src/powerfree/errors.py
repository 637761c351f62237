"""Exception hierarchy shared by all modules."""


class PowerfreeError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PowerfreeError, ValueError):
    """A mathematical precondition is violated (bad degree, j = 0, ...)."""


class UnsupportedRange(DomainError):
    """Parameters fall outside the range the exponent analysis covers."""


class DimensionError(DomainError):
    """Matrix shape does not fit the requested operation."""


class CapacityError(PowerfreeError):
    """An exact computation would exceed the desk-scale budget."""
