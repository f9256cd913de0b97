"""Exception hierarchy for uniqset."""

from __future__ import annotations


class UniqsetError(Exception):
    """Base exception for uniqset errors."""


# Arithmetic


class DivisionByZero(UniqsetError):
    """Division by an exactly zero field element."""


class NonRationalResult(UniqsetError):
    """An exact result expected to be a Gaussian rational is not one."""


class PrecisionInsufficient(UniqsetError):
    """A rigorous enclosure is too wide to decide a discrete quantity."""


class BallTooWide(UniqsetError):
    """A ball input is too wide for exact digit extraction."""


# Rounding and classes


class NegativeInput(UniqsetError):
    """Digit extraction was asked for a negative number."""


class NonTerminatingExpansion(UniqsetError):
    """The number has no finite expansion in the requested base."""


class NegativeComponent(UniqsetError):
    """An encoded class component has a negative real or imaginary part."""


class ClassTooLarge(UniqsetError):
    """A finite class has more members than the enumeration limit allows."""

    def __init__(self, cardinality: int, limit: int) -> None:
        super().__init__(f"Class has {cardinality} members, limit is {limit}")
        self.cardinality = cardinality
        self.limit = limit


# Recovery


class MalformedDigits(UniqsetError):
    """A marker digit is outside {0, 1}; the input is not in the encoded class."""


class SparsityExceeded(UniqsetError):
    """More support markers were found than the sparsity allows."""


class SingularSystem(UniqsetError):
    """A linear system that must be nonsingular turned out singular."""


class InconsistentObservation(UniqsetError):
    """The recovered signal does not reproduce the observation."""


class NoCandidate(UniqsetError):
    """No class member matches the observation."""


class UnsupportedTrace(UniqsetError):
    """The requested trace has no exact form for this class."""


class WindowNotSupported(UniqsetError):
    """The observed frequency set is not a valid recovery window for this length."""


# Uniqueness


class NotPrime(UniqsetError):
    """A prime length was required."""


class ScanTooLarge(UniqsetError):
    """A minor scan has more minors than the enumeration limit allows."""

    def __init__(self, count: int, limit: int) -> None:
        super().__init__(f"Scan needs {count} minors, limit is {limit}")
        self.count = count
        self.limit = limit


# Configuration


class ConfigError(UniqsetError):
    """An experiment config or data file violates its schema."""
