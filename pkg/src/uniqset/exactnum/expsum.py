"""Exact exponential sums ∑ c_j e^{i a_j} with rational a_j and cyclotomic c_j.

Every trace handled by the library has this shape. Because e^{ia} for
distinct rational (hence algebraic) a are linearly independent over the
algebraic numbers (Lindemann–Weierstrass), such a sum is zero exactly when
each coefficient vanishes after grouping equal exponents. Terms are grouped
on construction, so `is_zero` is a structural test. Ball enclosures give
the computable nonzero certificate.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from uniqset.exactnum.ball import BallComplex, ball_sum, exp_i_rational
from uniqset.exactnum.cyclotomic import CyclotomicNumber
from uniqset.exactnum.gaussian import GaussianRational

Coefficient = CyclotomicNumber | GaussianRational | Fraction | int


def _as_cyclotomic(value: Coefficient) -> CyclotomicNumber:
    if isinstance(value, CyclotomicNumber):
        return value
    if isinstance(value, GaussianRational):
        return CyclotomicNumber.from_gaussian(value)
    return CyclotomicNumber.rational(value)


@dataclass(frozen=True, slots=True)
class ExpSum:
    """Grouped exponential sum; exponents ascending, no zero coefficients."""

    terms: tuple[tuple[Fraction, CyclotomicNumber], ...] = ()

    @classmethod
    def build(cls, pairs: Iterable[tuple[Fraction | int, Coefficient]]) -> ExpSum:
        grouped: dict[Fraction, CyclotomicNumber] = {}
        for exponent, coeff in pairs:
            key = Fraction(exponent)
            value = _as_cyclotomic(coeff)
            grouped[key] = grouped[key] + value if key in grouped else value
        kept = [(a, c) for a, c in grouped.items() if not c.is_zero()]
        return cls(tuple(sorted(kept, key=lambda t: t[0])))

    @classmethod
    def constant(cls, value: Coefficient) -> ExpSum:
        return cls.build([(0, value)])

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: ExpSum) -> ExpSum:
        return ExpSum.build([*self.terms, *other.terms])

    def __neg__(self) -> ExpSum:
        return ExpSum(tuple((a, -c) for a, c in self.terms))

    def __sub__(self, other: ExpSum) -> ExpSum:
        return self + (-other)

    def exact_value(self) -> CyclotomicNumber | None:
        """The value as a cyclotomic number when only the exponent 0 occurs."""
        if not self.terms:
            return CyclotomicNumber.rational(0)
        if len(self.terms) == 1 and self.terms[0][0] == 0:
            return self.terms[0][1]
        return None

    def enclose(self, precision: int) -> BallComplex:
        """Rigorous enclosure of the complex value."""
        return ball_sum(
            (
                c.to_ball(precision)
                if a == 0
                else c.to_ball(precision) * exp_i_rational(a, precision)
                for a, c in self.terms
            ),
            precision,
        )
