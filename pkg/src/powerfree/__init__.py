"""Exact computations around k-free values of x^d + c."""

from .errors import CapacityError, DimensionError, DomainError, PowerfreeError, UnsupportedRange
from .poly import Binomial, ProblemInstance

__version__ = "0.1.0"

__all__ = [
    "Binomial",
    "CapacityError",
    "DimensionError",
    "DomainError",
    "PowerfreeError",
    "ProblemInstance",
    "UnsupportedRange",
]
