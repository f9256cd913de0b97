"""Finite complex sequences indexed by D = {0, ..., N-1}."""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from uniqset.exactnum import ZERO, BallComplex, GaussianRational, as_rational


@dataclass(frozen=True, slots=True)
class Signal:
    """Length-N sequence of Gaussian rationals."""

    components: tuple[GaussianRational, ...]

    @classmethod
    def of(cls, values: Iterable[GaussianRational | complex | int | str]) -> Signal:
        """Build from Gaussian rationals, ints or "num/den" strings (real parts)."""
        out = []
        for v in values:
            if isinstance(v, GaussianRational):
                out.append(v)
            elif isinstance(v, complex):
                raise TypeError("floating complex values are not exact; use GaussianRational")
            else:
                out.append(GaussianRational(as_rational(v)))
        return cls(tuple(out))

    @classmethod
    def zeros(cls, n: int) -> Signal:
        return cls((ZERO,) * n)

    @property
    def n(self) -> int:
        return len(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[GaussianRational]:
        return iter(self.components)

    def __getitem__(self, k: int) -> GaussianRational:
        return self.components[k]

    def __sub__(self, other: Signal) -> Signal:
        return Signal(tuple(a - b for a, b in zip(self, other, strict=True)))

    def __add__(self, other: Signal) -> Signal:
        return Signal(tuple(a + b for a, b in zip(self, other, strict=True)))

    def support(self) -> tuple[int, ...]:
        return tuple(k for k, z in enumerate(self.components) if z)

    def is_zero(self) -> bool:
        return not any(self.components)

    def __str__(self) -> str:
        return "(" + ", ".join(str(z) for z in self.components) + ")"


@dataclass(frozen=True, slots=True)
class BallSignal:
    """Length-N sequence of complex balls (a class member with transcendental factors)."""

    components: tuple[BallComplex, ...]

    @property
    def n(self) -> int:
        return len(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[BallComplex]:
        return iter(self.components)

    def __getitem__(self, k: int) -> BallComplex:
        return self.components[k]
