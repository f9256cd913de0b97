"""Desk-scale checks that a trace determines every member of a finite class.

Collision searches decide exact zeros structurally (grouped exponential
sums) and certify nonzero values with ball arithmetic. Minor scans compute
exact determinants of transform submatrices over cyclotomic fields.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from functools import partial

from sympy import isprime

from uniqset.errors import NotPrime, ScanTooLarge
from uniqset.exactnum import BallComplex, CyclotomicNumber, ExpSum, GaussianRational
from uniqset.exactnum.linalg import root_matrix_determinant
from uniqset.parallel import map_chunks
from uniqset.rounding import DEFAULT_LIMIT, ClassSpec, enumerate_class, is_member
from uniqset.signal import Signal
from uniqset.spectral import Domain, ModulationSpec, PrecisionPolicy, trace_expsum

logger = logging.getLogger(__name__)


class Status(StrEnum):
    UNIQUE = "unique"
    COLLISION = "collision"
    UNDECIDED = "undecided"


class LwStatus(StrEnum):
    NONZERO = "nonzero"
    UNDECIDED = "undecided"


Pair = tuple[Signal, Signal]


@dataclass(frozen=True, slots=True)
class UniquenessVerdict:
    """Outcome of a collision search; witness is set exactly for collisions."""

    status: Status
    witness: Pair | None = None
    undecided_pairs: tuple[Pair, ...] = ()
    precision: int | None = None
    checked: int = 0
    mode: str = "difference"

    def __post_init__(self) -> None:
        if (self.witness is not None) != (self.status is Status.COLLISION):
            raise ValueError("a witness is present exactly for collisions")


@dataclass(frozen=True, slots=True)
class MinorScanReport:
    n: int
    m: int
    family: str
    checked: int
    zero_witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    @property
    def all_nonzero(self) -> bool:
        return self.zero_witness is None


# -- nonzero certification -----------------------------------------------


def lw_certify_nonzero(
    producer: Callable[[int], BallComplex], policy: PrecisionPolicy | None = None
) -> tuple[LwStatus, int]:
    """Try to exclude zero from the enclosures producer(p) as p doubles.

    Never certifies zero: an exactly vanishing expression stays undecided.
    Returns the status and the last precision tried.
    """
    policy = policy or PrecisionPolicy()
    precision = policy.start
    for precision in policy.steps():
        if producer(precision).excludes_zero():
            return LwStatus.NONZERO, precision
    return LwStatus.UNDECIDED, precision


def _trace_status(
    traces: Sequence[ExpSum], policy: PrecisionPolicy
) -> tuple[Status, int | None]:
    """UNIQUE when some trace is certified nonzero, COLLISION when all are exactly zero."""
    nonzero = [t for t in traces if not t.is_zero()]
    if not nonzero:
        return Status.COLLISION, None
    precision = None
    for trace in nonzero:
        status, precision = lw_certify_nonzero(trace.enclose, policy)
        if status is LwStatus.NONZERO:
            return Status.UNIQUE, precision
    return Status.UNDECIDED, precision


# -- collision search ----------------------------------------------------


@dataclass(frozen=True, slots=True)
class _Trace:
    domain: Domain
    points: tuple[int | Fraction, ...]
    mod: ModulationSpec | None

    def of(self, x: Signal) -> list[ExpSum]:
        return [trace_expsum(x, self.domain, p, self.mod) for p in self.points]


def _split(delta: Signal) -> Pair:
    """(a, b) with a - b = delta, a taking the positive parts and b the negative ones."""

    def pos(v: Fraction) -> Fraction:
        return max(v, Fraction(0))

    a = Signal(tuple(GaussianRational(pos(z.re), pos(z.im)) for z in delta))
    b = Signal(tuple(GaussianRational(pos(-z.re), pos(-z.im)) for z in delta))
    return a, b


def _sweep_differences(
    chunk: Sequence[Signal], trace: _Trace, policy: PrecisionPolicy
) -> list[tuple[Status, Signal, int | None]]:
    out = []
    for delta in chunk:
        if delta.is_zero():
            continue
        status, precision = _trace_status(trace.of(delta), policy)
        if status is not Status.UNIQUE:
            out.append((status, delta, precision))
    return out


def _sweep_pairs(
    chunk: Sequence[int],
    members: Sequence[Signal],
    traces: Sequence[Sequence[ExpSum]],
    policy: PrecisionPolicy,
) -> list[tuple[Status, Pair, int | None]]:
    out = []
    for i in chunk:
        for j in range(i + 1, len(members)):
            diffs = [a - b for a, b in zip(traces[i], traces[j], strict=True)]
            status, precision = _trace_status(diffs, policy)
            if status is not Status.UNIQUE:
                out.append((status, (members[i], members[j]), precision))
    return out


def _witness(cls: ClassSpec, delta: Signal, limit: int) -> Pair | None:
    """Two members whose difference is delta, if any exist."""
    a, b = _split(delta)
    if is_member(cls, a) and is_member(cls, b):
        return a, b
    for b in enumerate_class(cls, limit):
        a = b + delta
        if is_member(cls, a):
            return a, b
    return None


def verify_uniqueness(
    cls: ClassSpec,
    mod: ModulationSpec | None,
    domain: Domain,
    points: Sequence[int | Fraction],
    policy: PrecisionPolicy | None = None,
    *,
    limit: int = DEFAULT_LIMIT,
    workers: int = 1,
) -> UniquenessVerdict:
    """Decide whether the trace (domain, points) separates the members of cls.

    Grid classes are checked through their difference class: every nonzero
    difference must have a nonzero trace. Other classes are checked pairwise.
    Merged outcomes prefer collision over undecided over unique.

    Raises:
        ClassTooLarge: if the swept class exceeds limit
    """
    policy = policy or PrecisionPolicy()
    trace = _Trace(Domain(domain), tuple(points), mod)
    diff_cls = cls.difference_class()

    if diff_cls is not None:
        deltas = list(enumerate_class(diff_cls, limit))
        found = [
            item
            for part in map_chunks(
                partial(_sweep_differences, trace=trace, policy=policy), deltas, workers
            )
            for item in part
        ]
        checked = len(deltas) - 1
        undecided: list[Pair] = []
        precision = None
        for status, delta, p in found:
            if status is Status.COLLISION:
                witness = _witness(cls, delta, limit)
                if witness is not None:
                    return UniquenessVerdict(Status.COLLISION, witness, (), None, checked)
                continue
            undecided.append(_split(delta))
            precision = p
        logger.debug("difference sweep: %d differences, %d undecided", checked, len(undecided))
        return _merge(undecided, precision, checked, "difference")

    members = list(enumerate_class(cls, limit))
    traces = [trace.of(x) for x in members]
    task = partial(_sweep_pairs, members=members, traces=traces, policy=policy)
    found_pairs = [
        item for part in map_chunks(task, list(range(len(members))), workers) for item in part
    ]
    checked = len(members) * (len(members) - 1) // 2
    for status, pair, _ in found_pairs:
        if status is Status.COLLISION:
            return UniquenessVerdict(Status.COLLISION, pair, (), None, checked, "pairwise")
    undecided_pairs = [pair for _, pair, _ in found_pairs]
    precision = found_pairs[-1][2] if found_pairs else None
    logger.debug("pairwise sweep: %d pairs, %d undecided", checked, len(undecided_pairs))
    return _merge(undecided_pairs, precision, checked, "pairwise")


def _merge(
    undecided: Sequence[Pair], precision: int | None, checked: int, mode: str
) -> UniquenessVerdict:
    if undecided:
        return UniquenessVerdict(Status.UNDECIDED, None, tuple(undecided), precision, checked, mode)
    return UniquenessVerdict(Status.UNIQUE, None, (), None, checked, mode)


# -- minor scans ---------------------------------------------------------


def minor_determinant(n: int, rows: Sequence[int], cols: Sequence[int]) -> CyclotomicNumber:
    """Unnormalized determinant of the transform submatrix (ζ_N^{ωt}), ω in rows, t in cols."""
    return root_matrix_determinant([[(w * t) % n for t in cols] for w in rows], n)


def window_determinant(n: int, u: int, support: Sequence[int]) -> CyclotomicNumber:
    m = len(support)
    if u < 0 or u + m > n:
        raise ValueError(f"window [{u}, {u + m - 1}] is not inside D")
    return minor_determinant(n, range(u, u + m), support)


def vandermonde_window_check(n: int, u: int, support: Sequence[int], m: int | None = None) -> bool:
    """True when the consecutive-row minor on support is nonsingular."""
    if m is not None and m != len(support):
        raise ValueError(f"support has {len(support)} points, expected {m}")
    return not window_determinant(n, u, support).is_zero()


def _scan_windows(
    chunk: Sequence[tuple[int, tuple[int, ...]]], n: int
) -> tuple[int, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    for i, (u, support) in enumerate(chunk):
        if not vandermonde_window_check(n, u, support):
            return i + 1, (tuple(range(u, u + len(support))), support)
    return len(chunk), None


def _merge_scans(
    parts: Sequence[tuple[int, tuple[tuple[int, ...], tuple[int, ...]] | None]],
) -> tuple[int, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    checked = 0
    for count, witness in parts:
        checked += count
        if witness is not None:
            return checked, witness
    return checked, None


def window_sweep(
    n: int, m_max: int, *, limit: int = DEFAULT_LIMIT, workers: int = 1
) -> MinorScanReport:
    """Check every consecutive-row window and support set with 1 <= m <= m_max."""
    m_max = min(m_max, n)
    count = sum((n - m + 1) * math.comb(n, m) for m in range(1, m_max + 1))
    if count > limit:
        raise ScanTooLarge(count, limit)
    work = [
        (u, support)
        for m in range(1, m_max + 1)
        for u in range(n - m + 1)
        for support in itertools.combinations(range(n), m)
    ]
    checked, witness = _merge_scans(map_chunks(partial(_scan_windows, n=n), work, workers))
    return MinorScanReport(n, m_max, f"windows m<={m_max}", checked, witness)


def _scan_minors(
    chunk: Sequence[tuple[int, ...]], n: int, m: int
) -> tuple[int, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    checked = 0
    for rows in chunk:
        for cols in itertools.combinations(range(n), m):
            checked += 1
            if minor_determinant(n, rows, cols).is_zero():
                return checked, (rows, cols)
    return checked, None


def prime_minor_scan(
    n: int,
    m: int,
    *,
    allow_composite: bool = False,
    limit: int = DEFAULT_LIMIT,
    workers: int = 1,
) -> MinorScanReport:
    """Exact determinant of every m×m submatrix of the length-n transform.

    Raises:
        NotPrime: if n is composite and allow_composite is not set
        ScanTooLarge: if binom(n, m)^2 exceeds limit
    """
    if not 1 <= m <= n:
        raise ValueError(f"minor size must lie in [1, {n}], got {m}")
    if not isprime(n) and not allow_composite:
        raise NotPrime(f"N = {n} is not prime; pass allow_composite to scan anyway")
    count = math.comb(n, m) ** 2
    if count > limit:
        raise ScanTooLarge(count, limit)
    row_sets = list(itertools.combinations(range(n), m))
    checked, witness = _merge_scans(
        map_chunks(partial(_scan_minors, n=n, m=m), row_sets, workers)
    )
    logger.debug("minor scan n=%d m=%d: %d minors, witness %s", n, m, checked, witness)
    return MinorScanReport(n, m, f"all {m}x{m} minors", checked, witness)
