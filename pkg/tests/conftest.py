"""Pytest configuration and fixtures for uniqset tests."""

import json
from collections.abc import Callable
from fractions import Fraction
from pathlib import Path
from typing import Any

import pytest

from uniqset.exactnum import GaussianRational
from uniqset.rounding import ClassKind, ClassSpec, EncodingSpec, RoundingSpec
from uniqset.signal import Signal
from uniqset.spectral import ModulationSpec


@pytest.fixture
def sparse_encoding() -> EncodingSpec:
    """Base 2, depth M = 2, length 4."""
    return EncodingSpec(nu=2, big_m=2, n=4)


@pytest.fixture
def sparse_signal() -> Signal:
    """Encoded 2-sparse signal with support {1, 3}; its zero-frequency sum is 53/64."""
    return Signal.of([0, "9/16", 0, "17/64"])


@pytest.fixture
def binary_class() -> ClassSpec:
    """Real 0/1 sequences of length 2."""
    return ClassSpec(ClassKind.PLAIN, RoundingSpec(2, 0), 2, Fraction(1), real_only=True)


@pytest.fixture
def half_grid_class() -> ClassSpec:
    """Length-2 complex sequences with parts in {0, 1/2}."""
    return ClassSpec(ClassKind.PLAIN, RoundingSpec(2, 1), 2, Fraction(1, 2))


@pytest.fixture
def modulation() -> ModulationSpec:
    """d = 1 with the angle grid 2^-2, so ρ(π) = 3 and ω = (0, 3)."""
    return ModulationSpec(1, RoundingSpec(2, 2), 2)


@pytest.fixture
def gaussian_signal() -> Signal:
    return Signal(
        (
            GaussianRational.of("1/2", "-1/3"),
            GaussianRational.of(2),
            GaussianRational.of(0, "3/4"),
        )
    )


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[[str, Any], Path]:
    """Write a JSON document under tmp_path and return its path."""

    def write(name: str, data: Any) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return path

    return write
