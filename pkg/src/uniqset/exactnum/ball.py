"""Rigorous complex ball arithmetic at an explicit binary precision.

Balls keep a dyadic midpoint and an upward-rounded radius as exact
rationals. Arithmetic goes through mpmath's interval kernels
(``mpmath.libmp.libmpi``), which take the working precision as an argument,
so no mpmath context state is read or written here.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING

from mpmath.libmp import (
    from_rational,
    round_ceiling,
    round_floor,
    to_rational,
)
from mpmath.libmp.libmpi import (
    mpci_add,
    mpci_mul,
    mpci_sub,
    mpi_cos_sin,
    mpi_mid,
    mpi_mul,
    mpi_pi,
)

from uniqset.exactnum.gaussian import GaussianRational, rational_sqrt_upper

if TYPE_CHECKING:
    from uniqset.exactnum.cyclotomic import CyclotomicNumber

MIN_PRECISION = 2

# Raw mpmath values: an mpf is a (sign, man, exp, bc) tuple, an interval a pair
# of them, a complex rectangle a pair of intervals.
Mpf = tuple[int, int, int, int]
Mpi = tuple[Mpf, Mpf]
Rect = tuple[Mpi, Mpi]


def _down(value: Fraction, precision: int) -> Mpf:
    return from_rational(value.numerator, value.denominator, precision, round_floor)


def _up(value: Fraction, precision: int) -> Mpf:
    return from_rational(value.numerator, value.denominator, precision, round_ceiling)


def _exact(value: Mpf) -> Fraction:
    p, q = to_rational(value)
    return Fraction(p, q)


def _interval(lo: Fraction, hi: Fraction, precision: int) -> Mpi:
    return _down(lo, precision), _up(hi, precision)


def _check_precision(precision: int) -> None:
    if precision < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} bits, got {precision}")


@dataclass(frozen=True, slots=True)
class RealInterval:
    """Closed interval [lo, hi] with rational endpoints."""

    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, value: object) -> bool:
        if isinstance(value, RealInterval):
            return self.lo <= value.lo and value.hi <= self.hi
        if isinstance(value, Fraction | int):
            return self.lo <= value <= self.hi
        return False

    def scale(self, factor: Fraction) -> RealInterval:
        a, b = self.lo * factor, self.hi * factor
        return RealInterval(min(a, b), max(a, b))

    def shift(self, offset: Fraction) -> RealInterval:
        return RealInterval(self.lo + offset, self.hi + offset)

    def negate(self) -> RealInterval:
        return RealInterval(-self.hi, -self.lo)

    def floor(self) -> int | None:
        """The common floor of every point, or None when the interval straddles an integer."""
        lo, hi = math.floor(self.lo), math.floor(self.hi)
        return lo if lo == hi else None


@dataclass(frozen=True, slots=True)
class BallComplex:
    """Complex ball: every represented value lies within radius of the midpoint."""

    mid_re: Fraction
    mid_im: Fraction
    radius: Fraction
    precision: int

    @classmethod
    def from_rect(cls, rect: Rect, precision: int) -> BallComplex:
        re_iv, im_iv = rect
        mid_re = _exact(mpi_mid(re_iv, precision))
        mid_im = _exact(mpi_mid(im_iv, precision))
        rad_re = max(mid_re - _exact(re_iv[0]), _exact(re_iv[1]) - mid_re)
        rad_im = max(mid_im - _exact(im_iv[0]), _exact(im_iv[1]) - mid_im)
        radius = _exact(_up(rational_sqrt_upper(rad_re * rad_re + rad_im * rad_im), precision))
        return cls(mid_re, mid_im, radius, precision)

    @classmethod
    def from_gaussian(cls, z: GaussianRational, precision: int) -> BallComplex:
        """Tightest ball at this precision around an exact point."""
        return cls.from_rect(
            (_interval(z.re, z.re, precision), _interval(z.im, z.im, precision)), precision
        )

    @classmethod
    def zero(cls, precision: int) -> BallComplex:
        return cls(Fraction(0), Fraction(0), Fraction(0), precision)

    def rect(self, precision: int | None = None) -> Rect:
        precision = precision or self.precision
        r = self.radius
        return (
            _interval(self.mid_re - r, self.mid_re + r, precision),
            _interval(self.mid_im - r, self.mid_im + r, precision),
        )

    def _binary(
        self, other: BallComplex | GaussianRational, kernel: Callable[[Rect, Rect, int], Rect]
    ) -> BallComplex:
        if isinstance(other, GaussianRational):
            other = BallComplex.from_gaussian(other, self.precision)
        precision = min(self.precision, other.precision)
        return BallComplex.from_rect(
            kernel(self.rect(precision), other.rect(precision), precision), precision
        )

    def __add__(self, other: BallComplex | GaussianRational) -> BallComplex:
        return self._binary(other, mpci_add)

    def __sub__(self, other: BallComplex | GaussianRational) -> BallComplex:
        return self._binary(other, mpci_sub)

    def __mul__(self, other: BallComplex | GaussianRational) -> BallComplex:
        return self._binary(other, mpci_mul)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self) -> BallComplex:
        return BallComplex(-self.mid_re, -self.mid_im, self.radius, self.precision)

    def conjugate(self) -> BallComplex:
        return BallComplex(self.mid_re, -self.mid_im, self.radius, self.precision)

    def _mid_norm(self) -> Fraction:
        return self.mid_re * self.mid_re + self.mid_im * self.mid_im

    def contains_zero(self) -> bool:
        return self._mid_norm() <= self.radius * self.radius

    def excludes_zero(self) -> bool:
        return not self.contains_zero()

    def contains_point(self, z: GaussianRational) -> bool:
        dx, dy = z.re - self.mid_re, z.im - self.mid_im
        return dx * dx + dy * dy <= self.radius * self.radius

    def contains_ball(self, other: BallComplex) -> bool:
        """True when other lies inside self."""
        if other.radius > self.radius:
            return False
        dx, dy = other.mid_re - self.mid_re, other.mid_im - self.mid_im
        slack = self.radius - other.radius
        return dx * dx + dy * dy <= slack * slack

    def overlaps(self, other: BallComplex) -> bool:
        dx, dy = other.mid_re - self.mid_re, other.mid_im - self.mid_im
        reach = self.radius + other.radius
        return dx * dx + dy * dy <= reach * reach

    def __str__(self) -> str:
        return f"({float(self.mid_re):.6g}{float(self.mid_im):+.6g}i ± {float(self.radius):.2e})"


def ball_sum(terms: Iterable[BallComplex], precision: int) -> BallComplex:
    """Sum balls in rectangle form, converting back to a ball once."""
    acc: Rect | None = None
    for term in terms:
        rect = term.rect(precision)
        acc = rect if acc is None else mpci_add(acc, rect, precision)
    if acc is None:
        return BallComplex.zero(precision)
    return BallComplex.from_rect(acc, precision)


def pi_enclosure(precision: int) -> RealInterval:
    """Rigorous enclosure of π; width at most 2^(2-precision)."""
    _check_precision(precision)
    lo, hi = mpi_pi(precision)
    return RealInterval(_exact(lo), _exact(hi))


def _cos_sin_rect(angle: Mpi, precision: int) -> Rect:
    cos_iv, sin_iv = mpi_cos_sin(angle, precision)
    return cos_iv, sin_iv


@lru_cache(maxsize=8192)
def exp_i_rational(q: Fraction, precision: int) -> BallComplex:
    """Enclosure of e^{iq} for an exact rational angle q (radians)."""
    _check_precision(precision)
    q = Fraction(q)
    working = precision + 16
    return BallComplex.from_rect(_cos_sin_rect(_interval(q, q, working), working), precision)


def exp_i_interval(angle: RealInterval, precision: int) -> BallComplex:
    """Enclosure of e^{iθ} for every θ in the angle interval."""
    _check_precision(precision)
    working = precision + 16
    return BallComplex.from_rect(
        _cos_sin_rect(_interval(angle.lo, angle.hi, working), working), precision
    )


@lru_cache(maxsize=8192)
def _root_rect(order: int, j: int, precision: int) -> Rect:
    """Rectangle around e^{-2πij/order}."""
    factor = Fraction(-2 * j, order)
    factor_iv = _interval(factor, factor, precision)
    angle = mpi_mul(mpi_pi(precision), factor_iv, precision)
    return _cos_sin_rect(angle, precision)


def cyclo_to_ball(a: CyclotomicNumber, precision: int) -> BallComplex:
    """Enclosure of the complex embedding ζ_L -> e^{-2πi/L}."""
    _check_precision(precision)
    magnitude = sum(abs(n) for n in a.nums)
    extra = max(0, magnitude.bit_length() - a.den.bit_length()) + a.degree.bit_length()
    working = precision + 16 + extra
    acc: Rect | None = None
    for j, n in enumerate(a.nums):
        if not n:
            continue
        coeff = Fraction(n, a.den)
        zero = _interval(Fraction(0), Fraction(0), working)
        coeff_rect = (_interval(coeff, coeff, working), zero)
        term = mpci_mul(_root_rect(a.order, j, working), coeff_rect, working)
        acc = term if acc is None else mpci_add(acc, term, working)
    if acc is None:
        return BallComplex.zero(precision)
    return BallComplex.from_rect(acc, precision)
