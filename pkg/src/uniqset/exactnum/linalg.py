"""Exact linear algebra over a field (rationals or cyclotomic numbers)."""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from typing import Protocol, Self

from uniqset.errors import SingularSystem
from uniqset.exactnum.cyclotomic import CyclotomicNumber


class FieldElement(Protocol):
    def __add__(self, other: Self, /) -> Self: ...
    def __sub__(self, other: Self, /) -> Self: ...
    def __mul__(self, other: Self, /) -> Self: ...
    def __truediv__(self, other: Self, /) -> Self: ...
    def __neg__(self) -> Self: ...
    def __bool__(self) -> bool: ...


def solve[F: FieldElement](matrix: Sequence[Sequence[F]], rhs: Sequence[F]) -> list[F]:
    """Solve a square system by Gaussian elimination with exact pivots.

    Raises:
        SingularSystem: if no nonzero pivot exists in some column
    """
    n = len(matrix)
    rows = [[*row, b] for row, b in zip(matrix, rhs, strict=True)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col]), None)
        if pivot is None:
            raise SingularSystem(f"no pivot in column {col}")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        lead = rows[col][col]
        for r in range(col + 1, n):
            factor = rows[r][col]
            if not factor:
                continue
            ratio = factor / lead
            rows[r] = [x - ratio * y for x, y in zip(rows[r], rows[col], strict=True)]
    solution: list[F] = [rows[0][0]] * n
    for r in range(n - 1, -1, -1):
        acc = rows[r][n]
        for c in range(r + 1, n):
            acc = acc - rows[r][c] * solution[c]
        solution[r] = acc / rows[r][r]
    return solution


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def root_matrix_determinant(exponents: Sequence[Sequence[int]], order: int) -> CyclotomicNumber:
    """Determinant of the matrix (ζ_order^{e_ij}) by the Leibniz expansion.

    Each permutation contributes ±ζ^{∑ e_iσ(i)}, so the whole determinant is
    accumulated as integer weights on exponents and reduced once.
    """
    m = len(exponents)
    weights = [0] * order
    for perm in itertools.permutations(range(m)):
        total = sum(exponents[i][perm[i]] for i in range(m)) % order
        weights[total] += _permutation_sign(perm)
    return CyclotomicNumber.from_exponents(order, enumerate(weights)).canonical()
