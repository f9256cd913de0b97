"""Truncation rounding, base-ν digits, the marker encoding and finite classes.

Two kinds of finite class are supported:

* ``plainX``: every real/imaginary part lies on the grid ν^{-μ}ℤ, within
  [0, bound] (or [-bound, bound] when ``signed``).
* ``encodedY``: components are fixed points of the marker encoding
  ``zeta_encode`` with nonnegative parts not exceeding bound; the nonzero
  components carry a single marker digit ν^{-(M+1+k)} that exposes the
  support in the digits of ∑ x_k.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass, replace
from enum import StrEnum
from fractions import Fraction
from typing import TYPE_CHECKING

from uniqset.errors import (
    ClassTooLarge,
    NegativeComponent,
    NegativeInput,
    NonTerminatingExpansion,
)
from uniqset.exactnum import ZERO, GaussianRational
from uniqset.signal import Signal

if TYPE_CHECKING:
    from uniqset.spectral import ModulationSpec

logger = logging.getLogger(__name__)

DEFAULT_LIMIT = 1_000_000


@dataclass(frozen=True, slots=True)
class RoundingSpec:
    """Rounding ρ_{ν,μ}: truncation onto the grid ν^{-μ}ℤ."""

    nu: int
    mu: int

    def __post_init__(self) -> None:
        if self.nu < 2:
            raise ValueError(f"base nu must be >= 2, got {self.nu}")
        if self.mu < 0:
            raise ValueError(f"depth mu must be >= 0, got {self.mu}")

    @property
    def step(self) -> Fraction:
        return Fraction(1, self.nu**self.mu)


@dataclass(frozen=True, slots=True)
class EncodingSpec:
    """Marker encoding with base ν, rounding depth M and sequence length N."""

    nu: int
    big_m: int
    n: int

    def __post_init__(self) -> None:
        if self.nu < 2:
            raise ValueError(f"base nu must be >= 2, got {self.nu}")
        if self.big_m < 0:
            raise ValueError(f"depth M must be >= 0, got {self.big_m}")
        if self.n < 1:
            raise ValueError(f"length N must be >= 1, got {self.n}")

    @property
    def rounding(self) -> RoundingSpec:
        return RoundingSpec(self.nu, self.big_m)

    def marker_position(self, k: int) -> int:
        return self.big_m + 1 + k

    def marker(self, k: int) -> Fraction:
        return Fraction(1, self.nu ** self.marker_position(k))

    @property
    def full_depth(self) -> int:
        """Depth M+N from which rounding leaves every class member unchanged."""
        return self.big_m + self.n


class ClassKind(StrEnum):
    PLAIN = "plainX"
    ENCODED = "encodedY"


@dataclass(frozen=True, slots=True)
class ClassSpec:
    """A finite class of signals: rounding kind, amplitude cap, optional sparsity."""

    kind: ClassKind
    rounding: RoundingSpec | EncodingSpec
    n: int
    bound: Fraction
    sparsity: int | None = None
    signed: bool = False
    real_only: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ClassKind(self.kind))
        object.__setattr__(self, "bound", Fraction(self.bound))
        if self.bound <= 0:
            raise ValueError("bound must be positive")
        if self.sparsity is not None and not 0 <= self.sparsity <= self.n:
            raise ValueError(f"sparsity must lie in [0, {self.n}], got {self.sparsity}")
        if self.kind is ClassKind.PLAIN and not isinstance(self.rounding, RoundingSpec):
            raise ValueError("plainX classes take a RoundingSpec")
        if self.kind is ClassKind.ENCODED:
            if not isinstance(self.rounding, EncodingSpec):
                raise ValueError("encodedY classes take an EncodingSpec")
            if self.rounding.n != self.n:
                raise ValueError("encoding length differs from class length")
            if self.signed:
                raise ValueError("encodedY classes have nonnegative parts")

    @property
    def nu(self) -> int:
        return self.rounding.nu

    @property
    def closed_under_subtraction(self) -> bool:
        """True when every difference of two members lies in difference_class()."""
        return self.kind is ClassKind.PLAIN

    def difference_class(self) -> ClassSpec | None:
        """A class containing every difference of two members, when one is a grid class."""
        if self.kind is not ClassKind.PLAIN:
            return None
        sparsity = None if self.sparsity is None else min(self.n, 2 * self.sparsity)
        bound = 2 * self.bound if self.signed else self.bound
        return replace(self, signed=True, sparsity=sparsity, bound=bound)


# -- rounding ------------------------------------------------------------


def floor_toward_zero(a: Fraction | int) -> int:
    """Floor for a >= 0; for a < 0 the k with a in (k-1, k], i.e. truncation toward zero."""
    return math.floor(a) if a >= 0 else math.ceil(a)


def round_real(spec: RoundingSpec, a: Fraction) -> Fraction:
    scale = spec.nu**spec.mu
    return Fraction(floor_toward_zero(a * scale), scale)


def round_trunc(spec: RoundingSpec, z: GaussianRational) -> GaussianRational:
    """ρ_{ν,μ}(z) = ρ_{ν,μ}(Re z) + iρ_{ν,μ}(Im z)."""
    return GaussianRational(round_real(spec, z.re), round_real(spec, z.im))


def round_signal(spec: RoundingSpec, x: Signal) -> Signal:
    return Signal(tuple(round_trunc(spec, z) for z in x))


def _is_terminating(nu: int, a: Fraction) -> bool:
    den = a.denominator
    g = math.gcd(den, nu)
    while g > 1:
        while den % g == 0:
            den //= g
        g = math.gcd(den, nu)
    return den == 1


def digit(nu: int, k: int, a: Fraction | int) -> int:
    """The coefficient of ν^{-k} in the terminating base-ν expansion of a >= 0.

    Raises:
        NegativeInput: if a < 0
        NonTerminatingExpansion: if a has no finite base-ν expansion
    """
    a = Fraction(a)
    if a < 0:
        raise NegativeInput(f"digit extraction needs a >= 0, got {a}")
    if not _is_terminating(nu, a):
        raise NonTerminatingExpansion(f"{a} has no finite base-{nu} expansion")
    return math.floor(a * Fraction(nu) ** k) % nu


def zeta_encode(enc: EncodingSpec, k: int, z: GaussianRational) -> GaussianRational:
    """ρ_{ν,M}(z) plus the marker ν^{-(M+1+k)} when z != 0.

    The marker always goes to the real part; the imaginary part receives one
    too when Im z != 0, so that a zero rounded imaginary part stays
    distinguishable from a vanishing one.

    Raises:
        NegativeComponent: if Re z < 0 or Im z < 0
    """
    if z.re < 0 or z.im < 0:
        raise NegativeComponent(f"encoded components need Re, Im >= 0, got {z}")
    rounded = round_trunc(enc.rounding, z)
    if not z:
        return ZERO
    marker = enc.marker(k)
    return GaussianRational(rounded.re + marker, rounded.im + (marker if z.im else 0))


def encode_signal(enc: EncodingSpec, x: Signal) -> Signal:
    return Signal(tuple(zeta_encode(enc, k, z) for k, z in enumerate(x)))


# -- class membership ----------------------------------------------------


def _part_in_range(part: Fraction, spec: ClassSpec) -> bool:
    if spec.signed:
        return -spec.bound <= part <= spec.bound
    return 0 <= part <= spec.bound


def component_in_class(spec: ClassSpec, k: int, z: GaussianRational) -> bool:
    if spec.real_only and z.im:
        return False
    if not (_part_in_range(z.re, spec) and _part_in_range(z.im, spec)):
        return False
    if spec.kind is ClassKind.PLAIN:
        assert isinstance(spec.rounding, RoundingSpec)
        return round_trunc(spec.rounding, z) == z
    assert isinstance(spec.rounding, EncodingSpec)
    return zeta_encode(spec.rounding, k, z) == z


def is_member(spec: ClassSpec, x: Signal) -> bool:
    """Exact membership test; the length must match the class."""
    if x.n != spec.n:
        raise ValueError(f"signal length {x.n} differs from class length {spec.n}")
    if spec.sparsity is not None and len(x.support()) > spec.sparsity:
        return False
    return all(component_in_class(spec, k, z) for k, z in enumerate(x))


def conforms_to_encoding(enc: EncodingSpec, x: Signal) -> bool:
    """Fixed point of the encoding, with no amplitude cap."""
    try:
        return all(zeta_encode(enc, k, z) == z for k, z in enumerate(x))
    except NegativeComponent:
        return False


# -- enumeration ---------------------------------------------------------


def _grid(step: Fraction, lo: Fraction, hi: Fraction) -> list[Fraction]:
    first = math.ceil(lo / step)
    last = math.floor(hi / step)
    return [i * step for i in range(first, last + 1)]


def component_choices(spec: ClassSpec, k: int) -> list[GaussianRational]:
    """Admissible values of component k in grid-index lexicographic order."""
    if spec.kind is ClassKind.PLAIN:
        assert isinstance(spec.rounding, RoundingSpec)
        lo = -spec.bound if spec.signed else Fraction(0)
        parts = _grid(spec.rounding.step, lo, spec.bound)
        ims = [Fraction(0)] if spec.real_only else parts
        return [GaussianRational(re, im) for re in parts for im in ims]
    assert isinstance(spec.rounding, EncodingSpec)
    enc = spec.rounding
    marker = enc.marker(k)
    rounded = _grid(enc.rounding.step, Fraction(0), spec.bound - marker)
    ims = [Fraction(0)]
    if not spec.real_only:
        ims += [s + marker for s in rounded]
    return [ZERO] + [GaussianRational(r + marker, im) for r in rounded for im in ims]


def class_cardinality(spec: ClassSpec) -> int:
    """Exact member count, honouring the sparsity cap."""
    budget = spec.n if spec.sparsity is None else spec.sparsity
    # ways[j]: assignments of the components seen so far with j nonzeros
    ways = [1] + [0] * budget
    for k in range(spec.n):
        choices = component_choices(spec, k)
        nonzero = sum(1 for z in choices if z)
        zero = len(choices) - nonzero
        nxt = [0] * (budget + 1)
        for j, count in enumerate(ways):
            if not count:
                continue
            nxt[j] += count * zero
            if j < budget:
                nxt[j + 1] += count * nonzero
        ways = nxt
    return sum(ways)


def enumerate_class(spec: ClassSpec, limit: int = DEFAULT_LIMIT) -> Iterator[Signal]:
    """Yield every member once, lexicographically over component grid indices.

    Raises:
        ClassTooLarge: if the class has more than limit members
    """
    cardinality = class_cardinality(spec)
    if cardinality > limit:
        raise ClassTooLarge(cardinality, limit)
    logger.debug("enumerating %s class of %d members", spec.kind, cardinality)
    choices = [component_choices(spec, k) for k in range(spec.n)]
    budget = spec.n if spec.sparsity is None else spec.sparsity
    return _walk(choices, budget)


def _walk(choices: list[list[GaussianRational]], budget: int) -> Iterator[Signal]:
    n = len(choices)
    prefix: list[GaussianRational] = []

    def step(k: int, remaining: int) -> Iterator[Signal]:
        if k == n:
            yield Signal(tuple(prefix))
            return
        for z in choices[k]:
            if z and not remaining:
                continue
            prefix.append(z)
            yield from step(k + 1, remaining - 1 if z else remaining)
            prefix.pop()

    return step(0, budget)


# -- approximation -------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ClassApproximation:
    """A class member standing in for a signal, with a bound on how far it moved.

    With a modulation the member is the grid part of a modulated class member;
    the factors have unit modulus, so the distance bound carries over unchanged.
    """

    member: Signal
    distance: Fraction
    modulation: ModulationSpec | None = None


def approximate_into_class(
    spec: ClassSpec, x: Signal, mod: ModulationSpec | None = None
) -> ClassApproximation:
    """Nearest-below class member of x and a rational bound on the componentwise distance.

    Parts are clipped into the class range and then rounded; sparsity is not
    enforced.

    Raises:
        NegativeComponent: for encoded classes with negative parts
        ValueError: if x or the modulation does not have the class length
    """
    if x.n != spec.n:
        raise ValueError(f"signal length {x.n} differs from class length {spec.n}")
    if mod is not None and mod.n != spec.n:
        raise ValueError(f"modulation length {mod.n} differs from class length {spec.n}")
    lo = -spec.bound if spec.signed else Fraction(0)

    def clip(part: Fraction) -> Fraction:
        return min(max(part, lo), spec.bound)

    out: list[GaussianRational] = []
    for k, z in enumerate(x):
        if spec.kind is ClassKind.ENCODED and (z.re < 0 or z.im < 0):
            raise NegativeComponent(f"encoded components need Re, Im >= 0, got {z}")
        clipped = GaussianRational(clip(z.re), Fraction(0) if spec.real_only else clip(z.im))
        if spec.kind is ClassKind.PLAIN:
            assert isinstance(spec.rounding, RoundingSpec)
            out.append(round_trunc(spec.rounding, clipped))
            continue
        assert isinstance(spec.rounding, EncodingSpec)
        enc = spec.rounding
        step = enc.rounding.step
        ceiling = spec.bound - enc.marker(k)

        def fit(part: Fraction, step: Fraction = step, ceiling: Fraction = ceiling) -> Fraction:
            return min(part, math.floor(ceiling / step) * step)

        out.append(GaussianRational(fit(clipped.re), fit(clipped.im)))
    member = Signal(tuple(out))
    if isinstance(spec.rounding, EncodingSpec):
        member = encode_signal(spec.rounding, member)
    distance = max(
        ((a - b).modulus_upper() for a, b in zip(member, x, strict=True)), default=Fraction(0)
    )
    return ClassApproximation(member, distance, mod)
