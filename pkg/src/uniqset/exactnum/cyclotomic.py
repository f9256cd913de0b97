"""Exact arithmetic in cyclotomic fields Q(ζ_L), ζ_L = e^{-2πi/L}.

Elements are kept in the power basis 1, ζ, ..., ζ^{φ(L)-1} modulo the L-th
cyclotomic polynomial, as integer numerators over one positive common
denominator. Numerators and denominator are coprime after every operation,
so two elements of the same order are equal iff their fields are equal.
Arithmetic results are returned in the smallest field holding them, which
makes equal values share one representation.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING

from sympy import QQ, Poly, Symbol, cyclotomic_poly, primefactors, totient
from sympy.polys.polyerrors import NotInvertible

from uniqset.errors import DivisionByZero
from uniqset.exactnum.gaussian import GaussianRational

if TYPE_CHECKING:
    from uniqset.exactnum.ball import BallComplex

_X = Symbol("x")


@lru_cache(maxsize=256)
def _phi(order: int) -> int:
    return int(totient(order))


@lru_cache(maxsize=256)
def _modulus(order: int) -> tuple[int, ...]:
    """Coefficients of the order-th cyclotomic polynomial, low degree first."""
    coeffs = cyclotomic_poly(order, _X, polys=True).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


@lru_cache(maxsize=256)
def _power_table(order: int) -> tuple[tuple[int, ...], ...]:
    """Row j holds x^j reduced modulo Φ_order, for every exponent a product can reach."""
    degree = _phi(order)
    modulus = _modulus(order)
    rows = max(order, 2 * degree - 1)
    row = [0] * degree
    row[0] = 1
    table = [tuple(row)]
    for _ in range(1, rows):
        top = row[-1]
        row = [0, *row[:-1]]
        if top:
            for i in range(degree):
                row[i] -= top * modulus[i]
        table.append(tuple(row))
    return tuple(table)


def _reduce(order: int, counts: Iterable[tuple[int, int]]) -> list[int]:
    """Fold (exponent, integer weight) pairs into power-basis numerators."""
    degree = _phi(order)
    table = _power_table(order)
    out = [0] * degree
    for exponent, weight in counts:
        if not weight:
            continue
        row = table[exponent % order] if exponent >= len(table) else table[exponent]
        for i, entry in enumerate(row):
            if entry:
                out[i] += weight * entry
    return out


@dataclass(frozen=True, slots=True, eq=False)
class CyclotomicNumber:
    """Element of Q(ζ_order) as numerators over a common denominator."""

    order: int
    nums: tuple[int, ...]
    den: int = 1

    @classmethod
    def build(cls, order: int, nums: Iterable[int], den: int = 1) -> CyclotomicNumber:
        """Normalise numerators and denominator into canonical form."""
        nums = tuple(nums)
        if den == 0:
            raise DivisionByZero("zero denominator")
        if den < 0:
            nums = tuple(-n for n in nums)
            den = -den
        g = math.gcd(den, *nums)
        if g > 1:
            nums = tuple(n // g for n in nums)
            den //= g
        return cls(order, nums, den)

    @classmethod
    def from_exponents(
        cls, order: int, counts: Iterable[tuple[int, int]], den: int = 1
    ) -> CyclotomicNumber:
        """Build ∑ weight·ζ^exponent / den from integer weights."""
        return cls.build(order, _reduce(order, counts), den)

    @classmethod
    def rational(cls, value: Fraction | int, order: int = 1) -> CyclotomicNumber:
        value = Fraction(value)
        nums = [0] * _phi(order)
        nums[0] = value.numerator
        return cls.build(order, nums, value.denominator)

    @classmethod
    def from_gaussian(cls, z: GaussianRational, order: int = 4) -> CyclotomicNumber:
        """Embed a Gaussian rational; i = ζ_L^{3L/4} needs 4 | order unless Im z = 0."""
        if not z.im:
            return cls.rational(z.re, order)
        if order % 4:
            order = math.lcm(order, 4)
        den = math.lcm(z.re.denominator, z.im.denominator)
        re_num = z.re.numerator * (den // z.re.denominator)
        im_num = z.im.numerator * (den // z.im.denominator)
        return cls.from_exponents(order, [(0, re_num), (3 * order // 4, im_num)], den)

    @property
    def degree(self) -> int:
        return len(self.nums)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """Power-basis coordinates as exact rationals."""
        return tuple(Fraction(n, self.den) for n in self.nums)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def __bool__(self) -> bool:
        return any(self.nums)

    # -- order changes -------------------------------------------------

    def lift(self, order: int) -> CyclotomicNumber:
        """Re-express in Q(ζ_order); order must be a multiple of self.order."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot lift order {self.order} to {order}")
        step = order // self.order
        return CyclotomicNumber.from_exponents(
            order, ((j * step, n) for j, n in enumerate(self.nums)), self.den
        )

    def _trace_down(self, prime: int) -> CyclotomicNumber:
        """Relative trace to Q(ζ_{order/prime}) divided by the relative degree."""
        order = self.order
        sub = order // prime
        if sub % prime == 0:
            counts = [(j // prime, n) for j, n in enumerate(self.nums) if j % prime == 0]
            return CyclotomicNumber.from_exponents(sub, counts, self.den)
        # ζ_L = ζ_p^u ζ_sub^v with u·sub + v·prime = 1
        v = pow(prime, -1, sub) if sub > 1 else 0
        u = (1 - v * prime) // sub
        counts = []
        for j, n in enumerate(self.nums):
            if n:
                weight = prime - 1 if (u * j) % prime == 0 else -1
                counts.append(((v * j) % sub if sub > 1 else 0, weight * n))
        return CyclotomicNumber.from_exponents(sub, counts, self.den * (prime - 1))

    def canonical(self) -> CyclotomicNumber:
        """Same value expressed in the smallest cyclotomic field containing it."""
        current = self
        reduced = True
        while reduced and current.order > 1:
            reduced = False
            for prime in primefactors(current.order):
                candidate = current._trace_down(int(prime))
                if candidate.lift(current.order)._same_fields(current):
                    current = candidate
                    reduced = True
                    break
        return current

    def _same_fields(self, other: CyclotomicNumber) -> bool:
        return self.order == other.order and self.den == other.den and self.nums == other.nums

    def _common(self, other: CyclotomicNumber) -> tuple[CyclotomicNumber, CyclotomicNumber]:
        if self.order == other.order:
            return self, other
        order = math.lcm(self.order, other.order)
        return self.lift(order), other.lift(order)

    # -- field operations ----------------------------------------------

    def __add__(self, other: object) -> CyclotomicNumber:
        b = _coerce(other, self.order)
        if b is None:
            return NotImplemented
        a, b = self._common(b)
        nums = (x * b.den + y * a.den for x, y in zip(a.nums, b.nums, strict=True))
        return CyclotomicNumber.build(a.order, nums, a.den * b.den).canonical()

    __radd__ = __add__

    def __neg__(self) -> CyclotomicNumber:
        return CyclotomicNumber(self.order, tuple(-n for n in self.nums), self.den)

    def __sub__(self, other: object) -> CyclotomicNumber:
        b = _coerce(other, self.order)
        if b is None:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other: object) -> CyclotomicNumber:
        return (-self) + other

    def __mul__(self, other: object) -> CyclotomicNumber:
        b = _coerce(other, self.order)
        if b is None:
            return NotImplemented
        a, b = self._common(b)
        product = [0] * (2 * a.degree - 1)
        for i, x in enumerate(a.nums):
            if x:
                for j, y in enumerate(b.nums):
                    if y:
                        product[i + j] += x * y
        product_value = CyclotomicNumber.from_exponents(a.order, enumerate(product), a.den * b.den)
        return product_value.canonical()

    __rmul__ = __mul__

    def inverse(self) -> CyclotomicNumber:
        """Multiplicative inverse via the extended gcd with Φ_order over QQ."""
        if self.is_zero():
            raise DivisionByZero("division by zero in cyclotomic field")
        if self.degree == 1:
            return CyclotomicNumber.build(self.order, (self.den,), self.nums[0]).canonical()
        f = Poly(list(reversed(self.nums)), _X, domain=QQ)
        g = Poly(list(reversed(_modulus(self.order))), _X, domain=QQ)
        try:
            h = f.invert(g)
        except NotInvertible as e:  # pragma: no cover - Φ is irreducible
            raise DivisionByZero("element is not invertible") from e
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(h.all_coeffs())]
        coeffs += [Fraction(0)] * (self.degree - len(coeffs))
        den = math.lcm(*(c.denominator for c in coeffs))
        nums = (c.numerator * (den // c.denominator) * self.den for c in coeffs)
        return CyclotomicNumber.build(self.order, nums, den).canonical()

    def __truediv__(self, other: object) -> CyclotomicNumber:
        b = _coerce(other, self.order)
        if b is None:
            return NotImplemented
        return self * b.inverse()

    def __rtruediv__(self, other: object) -> CyclotomicNumber:
        a = _coerce(other, self.order)
        if a is None:
            return NotImplemented
        return a * self.inverse()

    def galois(self, k: int) -> CyclotomicNumber:
        """Apply the automorphism ζ -> ζ^k (k coprime to the order)."""
        return CyclotomicNumber.from_exponents(
            self.order, (((j * k) % self.order, n) for j, n in enumerate(self.nums)), self.den
        ).canonical()

    def conjugate(self) -> CyclotomicNumber:
        return self.galois(-1)

    def norm_squared(self) -> CyclotomicNumber:
        """a·conj(a); a nonnegative real, rational when a lies in Q(i)."""
        return self * self.conjugate()

    # -- rational views ------------------------------------------------

    def as_rational(self) -> Fraction | None:
        if any(self.nums[1:]):
            return None
        return Fraction(self.nums[0], self.den)

    def as_gaussian(self) -> GaussianRational | None:
        """Demote to a Gaussian rational when the value lies in Q(i)."""
        a = self if self.order % 4 == 0 else self.lift(math.lcm(self.order, 4))
        conj = a.conjugate()
        re = ((a + conj) * Fraction(1, 2)).as_rational()
        if re is None:
            return None
        minus_i = CyclotomicNumber.from_exponents(a.order, [(a.order // 4, 1)])
        im = ((a - conj) * Fraction(1, 2) * minus_i).as_rational()
        if im is None:
            return None
        z = GaussianRational(re, im)
        return z if CyclotomicNumber.from_gaussian(z, a.order) == a else None

    def to_ball(self, precision: int) -> BallComplex:
        from uniqset.exactnum.ball import cyclo_to_ball

        return cyclo_to_ball(self, precision)

    # -- comparison ----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        b = _coerce(other, self.order)
        if b is None:
            return NotImplemented
        a, b = self._common(b)
        return a._same_fields(b)

    def __hash__(self) -> int:
        c = self.canonical()
        return hash((c.order, c.nums, c.den))

    def __repr__(self) -> str:
        return f"CyclotomicNumber(order={self.order}, coeffs={[str(c) for c in self.coeffs]})"


def _coerce(value: object, order: int) -> CyclotomicNumber | None:
    if isinstance(value, CyclotomicNumber):
        return value
    if isinstance(value, int | Fraction):
        return CyclotomicNumber.rational(value, order)
    if isinstance(value, GaussianRational):
        return CyclotomicNumber.from_gaussian(value, order)
    return None


def cyclo_root(order: int, j: int) -> CyclotomicNumber:
    """Return ζ_order^j = e^{-2πij/order} in its smallest field."""
    if order < 1:
        raise ValueError("order must be positive")
    j %= order
    g = math.gcd(j, order)
    reduced_order, reduced_j = order // g, j // g
    return CyclotomicNumber.from_exponents(reduced_order, [(reduced_j, 1)]).canonical()


def cyclo_arith(a: CyclotomicNumber, b: CyclotomicNumber, op: str) -> CyclotomicNumber:
    """Dispatch add/sub/mul/div by name."""
    match op:
        case "add":
            return a + b
        case "sub":
            return a - b
        case "mul":
            return a * b
        case "div":
            return a / b
        case _:
            raise ValueError(f"unknown operation: {op}")


def cyclo_is_zero(a: CyclotomicNumber) -> bool:
    return a.is_zero()
