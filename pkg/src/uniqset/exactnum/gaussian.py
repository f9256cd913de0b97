"""Exact rationals and Gaussian rationals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction
"""Exact rational; `Fraction` keeps the denominator positive and the pair reduced."""

RationalLike = Fraction | int | str


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, a Fraction or a "num/den" string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def rational_sqrt_upper(value: Fraction, bits: int = 64) -> Fraction:
    """Return a rational r >= sqrt(value), exact when value is a perfect square.

    The over-estimate is below 2^-bits relative to the denominator scale.
    """
    if value < 0:
        raise ValueError("negative input")
    num, den = value.numerator, value.denominator
    scale = 1 << bits
    # sqrt(n/d) = sqrt(n*d)/d
    radicand = num * den * scale * scale
    root = math.isqrt(radicand)
    if root * root != radicand:
        root += 1
    return Fraction(root, den * scale)


@dataclass(frozen=True, slots=True)
class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", as_rational(self.re))
        object.__setattr__(self, "im", as_rational(self.im))

    @classmethod
    def of(cls, re: RationalLike = 0, im: RationalLike = 0) -> GaussianRational:
        return cls(as_rational(re), as_rational(im))

    def __add__(self, other: object) -> GaussianRational:
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: object) -> GaussianRational:
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> GaussianRational:
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: object) -> GaussianRational:
        if isinstance(other, GaussianRational):
            return GaussianRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if not isinstance(other, Fraction | int):
            return NotImplemented
        return GaussianRational(self.re * other, self.im * other)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> GaussianRational:
        if isinstance(other, GaussianRational):
            norm = other.norm()
            if norm == 0:
                raise ZeroDivisionError("division by zero Gaussian rational")
            return (self * other.conjugate()) / norm
        if not isinstance(other, Fraction | int):
            return NotImplemented
        return GaussianRational(self.re / other, self.im / other)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """Squared modulus |z|^2, exact."""
        return self.re * self.re + self.im * self.im

    def modulus_upper(self) -> Fraction:
        """Rational upper bound on |z|, exact when |z| is rational."""
        return rational_sqrt_upper(self.norm())

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = GaussianRational()
ONE = GaussianRational(Fraction(1))
