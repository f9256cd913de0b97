"""Signal recovery from traces.

Two procedures are provided. ``recover_sparse`` reads the support of an
encoded sparse signal from the base-ν digits of its zero-frequency sum and
then solves the Vandermonde system on that support exactly.
``recover_bruteforce`` enumerates a finite class and keeps the members whose
trace matches the observation. ``certify_solution`` checks a candidate
against several observations, and ``mu_scan`` measures how recovery degrades
when the time samples are rounded more coarsely.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from functools import partial

from sympy import isprime

from uniqset.errors import (
    BallTooWide,
    InconsistentObservation,
    MalformedDigits,
    NegativeInput,
    NoCandidate,
    NonTerminatingExpansion,
    SparsityExceeded,
    UniqsetError,
    UnsupportedTrace,
    WindowNotSupported,
)
from uniqset.exactnum import BallComplex, CyclotomicNumber, ExpSum, GaussianRational
from uniqset.exactnum.linalg import solve
from uniqset.parallel import map_chunks
from uniqset.rounding import (
    DEFAULT_LIMIT,
    ClassSpec,
    EncodingSpec,
    RoundingSpec,
    conforms_to_encoding,
    digit,
    enumerate_class,
    round_signal,
)
from uniqset.signal import Signal
from uniqset.spectral import (
    Domain,
    ModulationSpec,
    ObservedValue,
    PrecisionPolicy,
    Scale,
    SpectrumObservation,
    as_expsum,
    demote,
    dft_exact,
    rooted,
    trace_expsum,
    trace_scale,
)

logger = logging.getLogger(__name__)


class Certificate(StrEnum):
    EXACT_MATCH = "exact-match"
    BALL_VERIFIED = "ball-verified"
    UNDECIDED = "undecided"
    REJECTED = "rejected"


@dataclass(frozen=True, slots=True)
class Certification:
    certificate: Certificate
    precision: int | None = None


@dataclass(frozen=True, slots=True)
class RecoveryResult:
    """Recovered signal with the strength of its certificate.

    ``survivors`` lists every matching member when the certificate is
    undecided; otherwise it holds the recovered signal alone.
    """

    signal: Signal | None
    certificate: Certificate
    candidates_examined: int
    precision: int | None = None
    survivors: tuple[Signal, ...] = ()
    support: tuple[int, ...] = ()


# -- support and Vandermonde solve ---------------------------------------


SumValue = GaussianRational | CyclotomicNumber | Fraction | int | BallComplex


def _real_part(total: SumValue, enc: EncodingSpec) -> Fraction:
    if isinstance(total, CyclotomicNumber):
        z = total.as_gaussian()
        if z is None:
            raise MalformedDigits("zero-frequency sum is not a Gaussian rational")
        return z.re
    if isinstance(total, BallComplex):
        depth = enc.full_depth
        limit = Fraction(1, 2 * enc.nu ** (depth + 1))
        if total.radius >= limit:
            raise BallTooWide(f"radius {total.radius} not below {limit}")
        # the exact sum lies on the ν^-(M+N) grid, nearest to the midpoint
        scale = enc.nu**depth
        return Fraction(round(total.mid_re * scale), scale)
    if isinstance(total, GaussianRational):
        return total.re
    return Fraction(total)


def support_from_sum(total: SumValue, enc: EncodingSpec, sparsity: int) -> tuple[int, ...]:
    """Support K read from the marker digits of Re ∑_k x_k.

    Raises:
        BallTooWide: if a ball input cannot pin down the digits
        MalformedDigits: if a marker digit is not 0 or 1, or the sum is not an encoded one
        SparsityExceeded: if more than `sparsity` markers are set
    """
    re = _real_part(total, enc)
    if (re * enc.nu**enc.full_depth).denominator != 1:
        raise MalformedDigits(f"{re} has digits beyond position {enc.full_depth}")
    try:
        digits = [digit(enc.nu, enc.marker_position(k), re) for k in range(enc.n)]
    except (NegativeInput, NonTerminatingExpansion) as e:
        raise MalformedDigits(str(e)) from e
    if any(v > 1 for v in digits):
        raise MalformedDigits(f"marker digits {digits} of {re} are not all 0 or 1")
    support = tuple(k for k, v in enumerate(digits) if v)
    if len(support) > sparsity:
        raise SparsityExceeded(f"{len(support)} markers set, sparsity is {sparsity}")
    return support


def _as_field(
    value: GaussianRational | CyclotomicNumber | Fraction | int, n: int
) -> CyclotomicNumber:
    if isinstance(value, CyclotomicNumber):
        return value
    if isinstance(value, GaussianRational):
        return CyclotomicNumber.from_gaussian(value, math.lcm(4, n))
    return CyclotomicNumber.rational(value, n)


def solve_rows(
    n: int,
    rows: Sequence[int],
    support: Sequence[int],
    values: Sequence[GaussianRational | CyclotomicNumber],
) -> tuple[GaussianRational | CyclotomicNumber, ...]:
    """Solve sums_ω = ∑_{t∈T} ζ_N^{ωt} x_t for x on T, ω ranging over rows."""
    if len(rows) != len(support) or len(values) != len(rows):
        raise ValueError("rows, support and values must have equal length")
    if not rows:
        return ()
    one = GaussianRational(Fraction(1))
    matrix = [[rooted(one, n, omega * t) for t in support] for omega in rows]
    rhs = [_as_field(v, n) for v in values]
    return tuple(demote(v) for v in solve(matrix, rhs))


def vandermonde_solve(
    n: int,
    u: int,
    support: Sequence[int],
    values: Sequence[GaussianRational | CyclotomicNumber],
) -> tuple[GaussianRational | CyclotomicNumber, ...]:
    """Solve on the consecutive window {u, ..., u+m-1}.

    Raises:
        SingularSystem: never for distinct support points; signals an internal fault
    """
    m = len(support)
    if u < 0 or u + m > n:
        raise ValueError(f"window [{u}, {u + m - 1}] is not inside D")
    return solve_rows(n, range(u, u + m), support, values)


# -- sparse recovery -----------------------------------------------------


def _exact_sums(obs: SpectrumObservation) -> dict[int, GaussianRational | CyclotomicNumber]:
    if obs.domain is not Domain.FOURIER or obs.scale is not Scale.SQRT_N:
        raise UnsupportedTrace("sparse recovery reads unnormalized fourier sums")
    out: dict[int, GaussianRational | CyclotomicNumber] = {}
    for point, value in zip(obs.points, obs.values, strict=True):
        if isinstance(value, BallComplex):
            raise UnsupportedTrace("sparse recovery needs exact observed sums")
        if isinstance(value, ExpSum):
            exact = value.exact_value()
            if exact is None:
                raise UnsupportedTrace("sparse recovery needs exponent-free sums")
            value = demote(exact)
        out[int(point)] = value
    return out


def _check_window(rows: Sequence[int], n: int) -> None:
    if list(rows) == list(range(len(rows))) or isprime(n):
        return
    raise WindowNotSupported(
        f"rows {list(rows)} are not consecutive and N = {n} is composite"
    )


def recover_sparse(
    obs: SpectrumObservation, enc: EncodingSpec, sparsity: int, *, validate: bool = True
) -> RecoveryResult:
    """Recover an encoded sparse signal from exact fourier sums at U ∋ 0.

    U = {0, ..., S-1} always works; any U of size S containing 0 works for prime N.
    Extra rows beyond |K| are checked exactly.

    Raises:
        WindowNotSupported: if 0 is not observed, too few rows are given, or U
            is non-consecutive for composite N
        InconsistentObservation: if validation fails
    """
    n = enc.n
    sums = _exact_sums(obs)
    if 0 not in sums:
        raise WindowNotSupported("the zero-frequency sum is not observed")
    if len(sums) < sparsity:
        raise WindowNotSupported(f"{len(sums)} rows observed, sparsity {sparsity} needs more")
    rows = sorted(sums)
    _check_window(rows, n)

    support = support_from_sum(sums[0], enc, sparsity)
    used = rows[: len(support)]
    solution = solve_rows(n, used, support, [sums[w] for w in used])

    components = [GaussianRational()] * n
    for t, value in zip(support, solution, strict=True):
        if not isinstance(value, GaussianRational):
            raise InconsistentObservation(f"component {t} is not a Gaussian rational")
        components[t] = value
    signal = Signal(tuple(components))

    if validate:
        spectrum = dft_exact(signal)
        for w in rows[len(support) :]:
            if spectrum[w] != _as_field(sums[w], n):
                raise InconsistentObservation(f"row {w} does not match the recovered support")
        if not conforms_to_encoding(enc, signal) or signal.support() != support:
            raise InconsistentObservation("recovered signal is not a fixed point of the encoding")
    logger.debug("sparse recovery: support %s from rows %s", support, used)
    return RecoveryResult(signal, Certificate.EXACT_MATCH, 1, None, (signal,), support)


# -- brute force ---------------------------------------------------------


def _check_scale(obs: SpectrumObservation, mod: ModulationSpec | None) -> None:
    expected = trace_scale(obs.domain, mod)
    if obs.scale is not expected:
        raise InconsistentObservation(
            f"observation scale {obs.scale} does not match the class trace scale {expected}"
        )


def _traces(
    candidate: Signal, obs: SpectrumObservation, mod: ModulationSpec | None
) -> list[ExpSum]:
    return [trace_expsum(candidate, obs.domain, point, mod) for point in obs.points]


def _exact_matches(
    chunk: Sequence[Signal], obs: SpectrumObservation, mod: ModulationSpec | None
) -> list[Signal]:
    targets = [as_expsum(v) for v in obs.values]
    return [
        c
        for c in chunk
        if all((t - v).is_zero() for t, v in zip(_traces(c, obs, mod), targets, strict=True))
    ]


def _ball_matches(
    chunk: Sequence[Signal], obs: SpectrumObservation, mod: ModulationSpec | None, precision: int
) -> list[Signal]:
    targets = [_observed_ball(v, precision) for v in obs.values]
    return [
        c
        for c in chunk
        if all(
            t.enclose(precision).overlaps(v)
            for t, v in zip(_traces(c, obs, mod), targets, strict=True)
        )
    ]


def _observed_ball(value: ObservedValue, precision: int) -> BallComplex:
    if isinstance(value, BallComplex):
        return value
    return as_expsum(value).enclose(precision)


def recover_bruteforce(
    obs: SpectrumObservation,
    cls: ClassSpec,
    mod: ModulationSpec | None = None,
    policy: PrecisionPolicy | None = None,
    *,
    limit: int = DEFAULT_LIMIT,
    workers: int = 1,
) -> RecoveryResult:
    """Search a finite class for members whose trace matches obs.

    Exact observations are compared exactly. Ball observations keep every
    candidate whose trace enclosure overlaps the observed ball, doubling the
    precision until one survivor is left or the cap is reached.

    Raises:
        ClassTooLarge: if the class exceeds limit
        NoCandidate: if no member matches
    """
    policy = policy or PrecisionPolicy()
    _check_scale(obs, mod)
    candidates = list(enumerate_class(cls, limit))
    examined = len(candidates)

    if obs.is_exact:
        matches = [
            c for part in map_chunks(partial(_exact_matches, obs=obs, mod=mod), candidates, workers)
            for c in part
        ]
        if not matches:
            raise NoCandidate(f"none of {examined} class members reproduces the observation")
        if len(matches) == 1:
            found = matches[0]
            return RecoveryResult(found, Certificate.EXACT_MATCH, examined, None, (found,))
        logger.debug("%d exact survivors", len(matches))
        return RecoveryResult(None, Certificate.UNDECIDED, examined, None, tuple(matches))

    survivors: Sequence[Signal] = candidates
    precision = policy.start
    for precision in policy.steps():
        task = partial(_ball_matches, obs=obs, mod=mod, precision=precision)
        survivors = [c for part in map_chunks(task, survivors, workers) for c in part]
        logger.debug("precision %d: %d survivors", precision, len(survivors))
        if len(survivors) <= 1:
            break
    if not survivors:
        raise NoCandidate(f"none of {examined} class members reproduces the observation")
    if len(survivors) == 1:
        return RecoveryResult(
            survivors[0], Certificate.BALL_VERIFIED, examined, precision, (survivors[0],)
        )
    return RecoveryResult(None, Certificate.UNDECIDED, examined, precision, tuple(survivors))


# -- certification -------------------------------------------------------


def certify_solution(
    candidate: Signal,
    observations: Sequence[SpectrumObservation],
    mod: ModulationSpec | None = None,
    policy: PrecisionPolicy | None = None,
) -> Certification:
    """Check a candidate against a system of observations.

    Exact values must agree exactly. Each observed ball must contain the
    candidate's trace enclosure at some precision up to the cap. A mismatch
    that is proven (exact inequality or disjoint balls) rejects the candidate.
    """
    policy = policy or PrecisionPolicy()
    pending: list[tuple[ExpSum, BallComplex]] = []
    for obs in observations:
        if obs.scale is not trace_scale(obs.domain, mod):
            return Certification(Certificate.REJECTED)
        for point, value in zip(obs.points, obs.values, strict=True):
            try:
                expected = trace_expsum(candidate, obs.domain, point, mod)
            except UnsupportedTrace:
                return Certification(Certificate.REJECTED)
            if isinstance(value, BallComplex):
                pending.append((expected, value))
            elif not (expected - as_expsum(value)).is_zero():
                return Certification(Certificate.REJECTED)
    if not pending:
        return Certification(Certificate.EXACT_MATCH)

    for precision in policy.steps():
        enclosures = [(expected.enclose(precision), ball) for expected, ball in pending]
        if any(not enc.overlaps(ball) for enc, ball in enclosures):
            return Certification(Certificate.REJECTED, precision)
        if all(ball.contains_ball(enc) for enc, ball in enclosures):
            return Certification(Certificate.BALL_VERIFIED, precision)
    return Certification(Certificate.UNDECIDED, policy.cap)


# -- robustness scan -----------------------------------------------------


def max_component_error(a: Signal, b: Signal) -> Fraction:
    """Exact rational upper bound on max_k |a_k - b_k|."""
    return max(((x - y).modulus_upper() for x, y in zip(a, b, strict=True)), default=Fraction(0))


@dataclass(frozen=True, slots=True)
class MuScanRow:
    mu: int
    max_error: Fraction | None
    support_preserved: bool
    recovered_exactly: bool


@dataclass(frozen=True, slots=True)
class MuScanReport:
    """Rows sorted by μ; robust_from is the first μ after which every error is ≤ δ."""

    delta: Fraction
    rows: tuple[MuScanRow, ...] = field(default=())
    robust_from: int | None = None


def _robust_from(rows: Sequence[MuScanRow], delta: Fraction) -> int | None:
    start: int | None = None
    for row in rows:
        if row.max_error is not None and row.max_error <= delta:
            if start is None:
                start = row.mu
        else:
            start = None
    return start


def mu_scan(
    x: Signal, enc: EncodingSpec, sparsity: int, delta: Fraction, mus: Sequence[int]
) -> MuScanReport:
    """Round x at each depth μ, observe the first S sums and recover.

    Failures of a row are recorded, not raised.

    Raises:
        ValueError: if mus is empty, x is outside the encoded sparse class, or some
            component has modulus above 1
    """
    if not mus:
        raise ValueError("mu list is empty")
    if not conforms_to_encoding(enc, x) or len(x.support()) > sparsity:
        raise ValueError("signal is not in the encoded sparse class")
    too_large = [k for k, z in enumerate(x) if z.norm() > 1]
    if too_large:
        raise ValueError(f"mu scan needs |x_k| <= 1, violated at k = {too_large}")
    truth = x.support()
    points = tuple(range(sparsity)) if sparsity else (0,)
    rows: list[MuScanRow] = []
    for mu in sorted(set(mus)):
        rounded = round_signal(RoundingSpec(enc.nu, mu), x)
        spectrum = dft_exact(rounded)
        obs = SpectrumObservation(
            Domain.FOURIER, points, tuple(demote(spectrum[w]) for w in points), Scale.SQRT_N, x.n
        )
        preserved = False
        try:
            preserved = support_from_sum(demote(spectrum[0]), enc, sparsity) == truth
            recovered = recover_sparse(obs, enc, sparsity, validate=False).signal
        except UniqsetError as e:
            logger.debug("mu=%d: recovery failed: %s", mu, e)
            rows.append(MuScanRow(mu, None, preserved, False))
            continue
        assert recovered is not None
        error = max_component_error(recovered, x)
        rows.append(MuScanRow(mu, error, preserved, recovered == x))
        logger.debug("mu=%d: error %s, support preserved %s", mu, error, preserved)
    return MuScanReport(Fraction(delta), tuple(rows), _robust_from(rows, Fraction(delta)))
