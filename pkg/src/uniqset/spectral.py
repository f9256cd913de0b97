"""Exact and rigorous transforms, the ω_k angle grid and modulated classes.

Conventions:

* ``ζ_N = e^{-2πi/N}``; the exact spectrum keeps the unnormalized sums
  ``sums[ω] = ∑_k x_k ζ_N^{ωk}`` and the true transform is ``sums / √N``.
* A modulation either multiplies the spectrum (``time-observed``: Y = ξX,
  the class is observed through its time samples) or the time signal
  (``frequency-observed``: y = ζx, observed through its spectrum).
* Every trace of a (modulated) grid member is an exact ``ExpSum``. Values
  whose true form carries a 1/√N factor are stored multiplied by √N and
  tagged ``Scale.SQRT_N``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from functools import lru_cache

from uniqset.errors import NonRationalResult, PrecisionInsufficient, UnsupportedTrace
from uniqset.exactnum import (
    BallComplex,
    CyclotomicNumber,
    ExpSum,
    GaussianRational,
    ball_sum,
    cyclo_root,
    cyclo_to_ball,
    exp_i_interval,
    exp_i_rational,
    pi_enclosure,
)
from uniqset.rounding import RoundingSpec
from uniqset.signal import BallSignal, Signal

logger = logging.getLogger(__name__)

DEFAULT_START_PRECISION = 64
DEFAULT_PRECISION_CAP = 2**14


class Domain(StrEnum):
    TIME = "time"
    FOURIER = "fourier"
    ZTRANSFORM = "ztransform"


class Side(StrEnum):
    TIME_OBSERVED = "time-observed"
    FREQUENCY_OBSERVED = "frequency-observed"


class Scale(StrEnum):
    """How stored values relate to the true ones."""

    UNIT = "unit"
    SQRT_N = "sqrt_n"  # stored = √N · true


@dataclass(frozen=True, slots=True)
class PrecisionPolicy:
    """Binary precision schedule: start, doubling, stop at cap."""

    start: int = DEFAULT_START_PRECISION
    cap: int = DEFAULT_PRECISION_CAP

    def __post_init__(self) -> None:
        if self.start < 2:
            raise ValueError(f"start precision must be >= 2, got {self.start}")
        if self.cap < self.start:
            raise ValueError(f"precision cap {self.cap} is below start {self.start}")

    def steps(self) -> Iterator[int]:
        p = self.start
        while p < self.cap:
            yield p
            p *= 2
        yield self.cap


def escalate[T](compute: Callable[[int], T], policy: PrecisionPolicy | None = None) -> T:
    """Run compute at doubling precision until it stops raising PrecisionInsufficient."""
    policy = policy or PrecisionPolicy()
    last: PrecisionInsufficient | None = None
    for p in policy.steps():
        try:
            return compute(p)
        except PrecisionInsufficient as e:
            logger.debug("precision %d insufficient: %s", p, e)
            last = e
    raise PrecisionInsufficient(f"undecided at precision cap {policy.cap}") from last


# -- exact spectra -------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ExactSpectrum:
    """Unnormalized DFT sums; the transform value is sums[ω] / √N."""

    sums: tuple[CyclotomicNumber, ...]

    @property
    def n(self) -> int:
        return len(self.sums)

    @property
    def scale(self) -> Scale:
        return Scale.SQRT_N

    def __getitem__(self, omega: int) -> CyclotomicNumber:
        return self.sums[omega]

    def __len__(self) -> int:
        return len(self.sums)


def field_order(x: Signal) -> int:
    """Order of the cyclotomic field holding the spectrum of x."""
    return math.lcm(4, x.n) if any(z.im for z in x) else x.n


def times_root(a: CyclotomicNumber, n: int, j: int) -> CyclotomicNumber:
    """a·ζ_n^j, computed as an exponent shift."""
    order = math.lcm(a.order, n)
    shift = (j % n) * (order // n)
    step = order // a.order
    return CyclotomicNumber.from_exponents(
        order, (((i * step + shift) % order, v) for i, v in enumerate(a.nums) if v), a.den
    ).canonical()


def rooted(z: GaussianRational, n: int, j: int) -> CyclotomicNumber:
    """The exact value z·ζ_n^j."""
    order = math.lcm(4, n) if z.im else n
    return times_root(CyclotomicNumber.from_gaussian(z, order), n, j)


def dft_exact(x: Signal) -> ExactSpectrum:
    n = x.n
    order = field_order(x)
    step = order // n
    quarter = 3 * order // 4
    den = math.lcm(*(z.re.denominator for z in x), *(z.im.denominator for z in x))
    re = [z.re.numerator * (den // z.re.denominator) for z in x]
    im = [z.im.numerator * (den // z.im.denominator) for z in x]
    sums = []
    for omega in range(n):
        counts: list[tuple[int, int]] = []
        for k in range(n):
            e = (omega * k % n) * step
            if re[k]:
                counts.append((e, re[k]))
            if im[k]:
                counts.append(((e + quarter) % order, im[k]))
        sums.append(CyclotomicNumber.from_exponents(order, counts, den).canonical())
    return ExactSpectrum(tuple(sums))


def idft_exact(spectrum: ExactSpectrum) -> Signal:
    """Inverse of dft_exact.

    Raises:
        NonRationalResult: if some component is not a Gaussian rational
    """
    n = spectrum.n
    out = []
    for t in range(n):
        acc = CyclotomicNumber.rational(0, n)
        for omega, s in enumerate(spectrum.sums):
            if s:
                acc = acc + times_root(s, n, -omega * t)
        z = (acc * Fraction(1, n)).as_gaussian()
        if z is None:
            raise NonRationalResult(f"component {t} is not a Gaussian rational")
        out.append(z)
    return Signal(tuple(out))


def parseval_holds(x: Signal, spectrum: ExactSpectrum | None = None) -> bool:
    """N·∑|x_k|² == ∑|sums_ω|², decided exactly."""
    if spectrum is None:
        spectrum = dft_exact(x)
    energy = sum((z.norm() for z in x), Fraction(0)) * x.n
    total = CyclotomicNumber.rational(0)
    for s in spectrum.sums:
        total = total + s.norm_squared()
    return total == energy


def ztransform_eval(y: Signal, omega: Fraction, precision: int) -> BallComplex:
    """Enclosure of ∑_{k<N} e^{-iωk} y_k."""
    return ztransform_expsum(y, Fraction(omega)).enclose(precision)


def ztransform_expsum(y: Signal, omega: Fraction) -> ExpSum:
    return ExpSum.build((-omega * k, z) for k, z in enumerate(y))


# -- modulation ----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ModulationSpec:
    """Modulation e^{±2i(ρ(π)−π)dk/N} with ρ the angle-grid rounding."""

    d: int
    angle_grid: RoundingSpec
    n: int
    side: Side = Side.FREQUENCY_OBSERVED

    def __post_init__(self) -> None:
        object.__setattr__(self, "side", Side(self.side))
        if not 1 <= self.d <= self.n - 1:
            raise ValueError(f"d must lie in [1, {self.n - 1}], got {self.d}")


def rounded_pi(grid: RoundingSpec, precision: int) -> Fraction:
    """ρ_{ν,μ}(π) decided from a π enclosure.

    Raises:
        PrecisionInsufficient: when the enclosure straddles a grid point
    """
    scale = grid.nu**grid.mu
    floor = pi_enclosure(precision).scale(Fraction(scale)).floor()
    if floor is None:
        raise PrecisionInsufficient(f"π enclosure at {precision} bits straddles the grid")
    return Fraction(floor, scale)


@lru_cache(maxsize=256)
def exact_rounded_pi(grid: RoundingSpec) -> Fraction:
    return escalate(lambda p: rounded_pi(grid, p))


def omega_grid(mod: ModulationSpec, precision: int) -> tuple[Fraction, ...]:
    """ω_k = 2ρ(π)dk/N for k in D."""
    rho = rounded_pi(mod.angle_grid, precision)
    return tuple(2 * rho * mod.d * k / mod.n for k in range(mod.n))


def exact_omega_grid(mod: ModulationSpec) -> tuple[Fraction, ...]:
    rho = exact_rounded_pi(mod.angle_grid)
    return tuple(2 * rho * mod.d * k / mod.n for k in range(mod.n))


def modulation_factor(mod: ModulationSpec, k: int, precision: int) -> BallComplex:
    """Enclosure of ξ_k (time-observed) or ζ_k = conj(ξ_k) (frequency-observed)."""
    rho = exact_rounded_pi(mod.angle_grid)
    pi = pi_enclosure(precision + 16)
    angle = pi.negate().shift(rho).scale(Fraction(2 * mod.d * k, mod.n))
    if mod.side is Side.FREQUENCY_OBSERVED:
        angle = angle.negate()
    return exp_i_interval(angle, precision)


def build_class_member(mod: ModulationSpec, x: Signal, precision: int) -> BallSignal:
    """Componentwise product with the modulation factors.

    For the time-observed side the input is the grid spectrum X and the output the
    modulated spectrum Y; for the frequency-observed side input and output are time signals.
    """
    if x.n != mod.n:
        raise ValueError(f"signal length {x.n} differs from modulation length {mod.n}")
    return BallSignal(
        tuple(modulation_factor(mod, k, precision) * z for k, z in enumerate(x))
    )


def modulated_components(mod: ModulationSpec, x: Signal) -> tuple[ExpSum, ...]:
    """Exact components of build_class_member as exponential sums."""
    omegas = exact_omega_grid(mod)
    sign = 1 if mod.side is Side.TIME_OBSERVED else -1
    return tuple(
        ExpSum.build([(sign * omegas[k], rooted(z, mod.n, sign * mod.d * k))])
        for k, z in enumerate(x)
    )


def synthesize_ball(spectrum: BallSignal, precision: int) -> BallSignal:
    """√N times the inverse transform of a ball spectrum: ∑_k Y_k ζ_N^{-tk}."""
    n = spectrum.n
    return BallSignal(
        tuple(
            ball_sum(
                (
                    cyclo_to_ball(cyclo_root(n, -t * k), precision) * y
                    for k, y in enumerate(spectrum)
                ),
                precision,
            )
            for t in range(n)
        )
    )


# -- traces --------------------------------------------------------------


def trace_scale(domain: Domain, mod: ModulationSpec | None) -> Scale:
    spectral_class = mod is not None and mod.side is Side.TIME_OBSERVED
    if domain is Domain.FOURIER:
        return Scale.UNIT if spectral_class else Scale.SQRT_N
    return Scale.SQRT_N if spectral_class else Scale.UNIT


def _index(point: int | Fraction, n: int) -> int:
    if isinstance(point, Fraction) and point.denominator != 1:
        raise UnsupportedTrace(f"index trace point {point} is not an integer")
    t = int(point)
    if not 0 <= t < n:
        raise UnsupportedTrace(f"trace point {t} outside D = [0, {n - 1}]")
    return t


def trace_expsum(
    x: Signal, domain: Domain, point: int | Fraction, mod: ModulationSpec | None = None
) -> ExpSum:
    """Exact value of one trace of the class member generated from x.

    Without modulation x is the observed signal itself. With a frequency-observed
    modulation the member is y = ζx; with a time-observed one x is the grid
    spectrum X and the member's spectrum is Y = ξX. Values follow trace_scale.
    """
    n = x.n
    domain = Domain(domain)
    if mod is not None and mod.n != n:
        raise ValueError(f"signal length {n} differs from modulation length {mod.n}")
    omegas = exact_omega_grid(mod) if mod is not None else (Fraction(0),) * n
    omega = Fraction(point) if domain is Domain.ZTRANSFORM else Fraction(0)
    t = 0 if domain is Domain.ZTRANSFORM else _index(point, n)

    if mod is None or mod.side is Side.FREQUENCY_OBSERVED:
        d = mod.d if mod is not None else 0
        match domain:
            case Domain.TIME:
                return ExpSum.build([(-omegas[t], rooted(x[t], n, -d * t))])
            case Domain.FOURIER:
                return ExpSum.build(
                    (-omegas[k], rooted(z, n, (t - d) * k)) for k, z in enumerate(x)
                )
            case Domain.ZTRANSFORM:
                return ExpSum.build(
                    (-(omega * k + omegas[k]), rooted(z, n, -d * k)) for k, z in enumerate(x)
                )

    d = mod.d
    match domain:
        case Domain.FOURIER:
            return ExpSum.build([(omegas[t], rooted(x[t], n, d * t))])
        case Domain.TIME:
            return ExpSum.build((omegas[k], rooted(z, n, (d - t) * k)) for k, z in enumerate(x))
        case Domain.ZTRANSFORM:
            return ExpSum.build(
                (omegas[k] - omega * s, rooted(z, n, (d - s) * k))
                for s in range(n)
                for k, z in enumerate(x)
            )
    raise UnsupportedTrace(f"unknown domain {domain}")  # pragma: no cover


# -- observations --------------------------------------------------------

ObservedValue = GaussianRational | CyclotomicNumber | ExpSum | BallComplex


@dataclass(frozen=True, slots=True)
class SpectrumObservation:
    """Trace of a signal: values at points of D (time, fourier) or at angles (ztransform)."""

    domain: Domain
    points: tuple[int | Fraction, ...]
    values: tuple[ObservedValue, ...]
    scale: Scale = Scale.UNIT
    n: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "domain", Domain(self.domain))
        object.__setattr__(self, "scale", Scale(self.scale))
        if len(self.points) != len(self.values):
            raise ValueError("points and values differ in length")
        if len(set(self.points)) != len(self.points):
            raise ValueError("observation points must be distinct")

    @property
    def is_exact(self) -> bool:
        return not any(isinstance(v, BallComplex) for v in self.values)

    def __len__(self) -> int:
        return len(self.points)


def as_expsum(value: ObservedValue) -> ExpSum:
    """Exact observed value as an exponential sum."""
    if isinstance(value, ExpSum):
        return value
    if isinstance(value, BallComplex):
        raise TypeError("ball values have no exact form")
    return ExpSum.constant(value)


def enclose_value(value: ObservedValue, precision: int) -> BallComplex:
    if isinstance(value, BallComplex):
        return value
    return as_expsum(value).enclose(precision)


def _simplify(value: ExpSum) -> ObservedValue:
    """Demote an exponent-free sum to a Gaussian rational or cyclotomic number."""
    exact = value.exact_value()
    return value if exact is None else demote(exact)


def demote(value: CyclotomicNumber) -> GaussianRational | CyclotomicNumber:
    z = value.as_gaussian()
    return value if z is None else z


def observe(
    x: Signal,
    domain: Domain,
    points: Sequence[int | Fraction],
    precision: int | None = None,
) -> SpectrumObservation:
    """Trace of an unmodulated rational signal; exact unless a precision is given."""
    domain = Domain(domain)
    if domain is Domain.FOURIER and precision is None and len(points) == x.n:
        spectrum = dft_exact(x)
        values: list[ObservedValue] = [demote(spectrum[_index(t, x.n)]) for t in points]
    else:
        values = [_simplify(trace_expsum(x, domain, t)) for t in points]
    if precision is not None:
        values = [enclose_value(v, precision) for v in values]
    return SpectrumObservation(
        domain, tuple(points), tuple(values), trace_scale(domain, None), x.n
    )


def observe_member(
    mod: ModulationSpec,
    x: Signal,
    domain: Domain,
    points: Sequence[int | Fraction],
    precision: int | None = None,
) -> SpectrumObservation:
    """Trace of the modulated class member generated from x."""
    domain = Domain(domain)
    values: list[ObservedValue] = [_simplify(trace_expsum(x, domain, t, mod)) for t in points]
    if precision is not None:
        values = [enclose_value(v, precision) for v in values]
    return SpectrumObservation(
        domain, tuple(points), tuple(values), trace_scale(domain, mod), x.n
    )


def observe_balls(
    y: BallSignal, domain: Domain, points: Sequence[int | Fraction], precision: int
) -> SpectrumObservation:
    """Trace of a ball signal (e.g. a member built by build_class_member)."""
    domain = Domain(domain)
    n = y.n
    values: list[ObservedValue] = []
    for point in points:
        match domain:
            case Domain.TIME:
                values.append(y[_index(point, n)])
            case Domain.FOURIER:
                t = _index(point, n)
                values.append(
                    ball_sum(
                        (
                            cyclo_to_ball(cyclo_root(n, t * k), precision) * z
                            for k, z in enumerate(y)
                        ),
                        precision,
                    )
                )
            case Domain.ZTRANSFORM:
                omega = Fraction(point)
                values.append(
                    ball_sum(
                        (exp_i_rational(-omega * k, precision) * z for k, z in enumerate(y)),
                        precision,
                    )
                )
    scale = Scale.SQRT_N if domain is Domain.FOURIER else Scale.UNIT
    return SpectrumObservation(domain, tuple(points), tuple(values), scale, n)
