"""Experiment configuration files for the CLI commands.

Each command reads one JSON document. Signals and observations may be given
inline or as a path (relative to the config file) to a JSON file holding
them. Unknown keys are rejected so that typos never silently fall back to
defaults.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, ClassVar, Self

from uniqset.codec import (
    bool_from_json,
    check_keys,
    class_from_json,
    encoding_from_json,
    int_from_json,
    modulation_from_json,
    observation_from_json,
    rational_from_json,
    signal_from_json,
)
from uniqset.errors import ConfigError
from uniqset.rounding import DEFAULT_LIMIT, ClassKind, ClassSpec, EncodingSpec
from uniqset.signal import Signal
from uniqset.spectral import (
    DEFAULT_PRECISION_CAP,
    Domain,
    ModulationSpec,
    SpectrumObservation,
)


def read_json(path: Path) -> Any:
    try:
        return json.loads(path.read_text())
    except FileNotFoundError as e:
        raise ConfigError(f"file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON: {e}") from e


def config_digest(data: Any) -> str:
    """sha256 of the canonical JSON form (sorted keys, no whitespace)."""
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _embedded(value: object, base: Path) -> Any:
    """An inline document, or the contents of the file a string points to."""
    if isinstance(value, str):
        return read_json(base / value)
    return value


def _points(value: object, domain: Domain) -> tuple[int | Fraction, ...]:
    if not isinstance(value, list) or not value:
        raise ConfigError("points: expected a non-empty list")
    if domain is Domain.ZTRANSFORM:
        return tuple(rational_from_json(p, "points") for p in value)
    return tuple(int_from_json(p, "points") for p in value)


def _domain(value: object) -> Domain:
    try:
        return Domain(value)
    except ValueError as e:
        raise ConfigError(f"domain: unknown domain {value!r}") from e


@dataclass(frozen=True)
class ExperimentConfig:
    """Common settings shared by every command."""

    command: ClassVar[str] = ""

    digest: str
    limit: int
    precision_cap: int

    @staticmethod
    def _common(data: dict[str, Any]) -> dict[str, Any]:
        return {
            "digest": config_digest(data),
            "limit": int_from_json(data.get("limit", DEFAULT_LIMIT), "limit"),
            "precision_cap": int_from_json(
                data.get("precision_cap", DEFAULT_PRECISION_CAP), "precision_cap"
            ),
        }

    @classmethod
    def from_json(cls, data: Any, base: Path) -> Self:
        raise NotImplementedError


COMMON_KEYS = ("limit", "precision_cap")


@dataclass(frozen=True)
class EncodeConfig(ExperimentConfig):
    command: ClassVar[str] = "encode"

    signal: Signal
    encoding: EncodingSpec
    class_spec: ClassSpec
    modulation: ModulationSpec | None = None

    @classmethod
    def from_json(cls, data: Any, base: Path) -> EncodeConfig:
        d = check_keys(
            data, "encode config", ["signal", "encoding"], ("bound", "modulation", *COMMON_KEYS)
        )
        signal = signal_from_json(_embedded(d["signal"], base))
        encoding = encoding_from_json(d["encoding"], signal.n)
        bound = rational_from_json(d.get("bound", "1"), "bound")
        try:
            class_spec = ClassSpec(ClassKind.ENCODED, encoding, signal.n, bound)
        except ValueError as e:
            raise ConfigError(f"encode config: {e}") from e
        mod = d.get("modulation")
        return cls(
            **cls._common(dict(d)),
            signal=signal,
            encoding=encoding,
            class_spec=class_spec,
            modulation=None if mod is None else modulation_from_json(mod, signal.n),
        )


@dataclass(frozen=True)
class ObserveConfig(ExperimentConfig):
    command: ClassVar[str] = "observe"

    signal: Signal
    domain: Domain
    points: tuple[int | Fraction, ...]
    precision: int | None
    modulation: ModulationSpec | None

    @classmethod
    def from_json(cls, data: Any, base: Path) -> ObserveConfig:
        d = check_keys(
            data,
            "observe config",
            ["signal", "domain", "points"],
            ("precision", "modulation", *COMMON_KEYS),
        )
        signal = signal_from_json(_embedded(d["signal"], base))
        domain = _domain(d["domain"])
        precision = d.get("precision")
        mod = d.get("modulation")
        return cls(
            **cls._common(dict(d)),
            signal=signal,
            domain=domain,
            points=_points(d["points"], domain),
            precision=None if precision is None else int_from_json(precision, "precision"),
            modulation=None if mod is None else modulation_from_json(mod, signal.n),
        )


@dataclass(frozen=True)
class RecoverConfig(ExperimentConfig):
    command: ClassVar[str] = "recover"

    mode: str
    observation: SpectrumObservation
    encoding: EncodingSpec | None = None
    sparsity: int | None = None
    class_spec: ClassSpec | None = None
    modulation: ModulationSpec | None = None

    @classmethod
    def from_json(cls, data: Any, base: Path) -> RecoverConfig:
        d = check_keys(
            data,
            "recover config",
            ["mode", "observation"],
            ("encoding", "sparsity", "n", "class", "modulation", *COMMON_KEYS),
        )
        observation = observation_from_json(_embedded(d["observation"], base))
        common = cls._common(dict(d))
        match d["mode"]:
            case "sparse":
                for key in ("encoding", "sparsity"):
                    if key not in d:
                        raise ConfigError(f"recover config: sparse mode needs '{key}'")
                n = observation.n if observation.n is not None else d.get("n")
                if n is None:
                    raise ConfigError(
                        "recover config: sparse mode needs 'n' or an observation with n"
                    )
                return cls(
                    **common,
                    mode="sparse",
                    observation=observation,
                    encoding=encoding_from_json(d["encoding"], int_from_json(n, "n")),
                    sparsity=int_from_json(d["sparsity"], "sparsity"),
                )
            case "bruteforce":
                if "class" not in d:
                    raise ConfigError("recover config: bruteforce mode needs 'class'")
                spec = class_from_json(d["class"])
                mod = d.get("modulation")
                return cls(
                    **common,
                    mode="bruteforce",
                    observation=observation,
                    class_spec=spec,
                    modulation=None if mod is None else modulation_from_json(mod, spec.n),
                )
            case other:
                raise ConfigError(f"recover config: unknown mode {other!r}")


@dataclass(frozen=True)
class VerifyConfig(ExperimentConfig):
    command: ClassVar[str] = "verify"

    check: str
    class_spec: ClassSpec | None = None
    modulation: ModulationSpec | None = None
    domain: Domain | None = None
    points: tuple[int | Fraction, ...] = ()
    n: int | None = None
    m: int | None = None
    allow_composite: bool = False

    @classmethod
    def from_json(cls, data: Any, base: Path) -> VerifyConfig:
        d = check_keys(
            data,
            "verify config",
            ["check"],
            ("class", "modulation", "trace", "n", "m", "allow_composite", *COMMON_KEYS),
        )
        common = cls._common(dict(d))
        match d["check"]:
            case "uniqueness":
                for key in ("class", "trace"):
                    if key not in d:
                        raise ConfigError(f"verify config: uniqueness check needs '{key}'")
                spec = class_from_json(d["class"])
                trace = check_keys(d["trace"], "trace", ["domain", "points"])
                domain = _domain(trace["domain"])
                mod = d.get("modulation")
                return cls(
                    **common,
                    check="uniqueness",
                    class_spec=spec,
                    modulation=None if mod is None else modulation_from_json(mod, spec.n),
                    domain=domain,
                    points=_points(trace["points"], domain),
                )
            case "window" | "minors" as check:
                for key in ("n", "m"):
                    if key not in d:
                        raise ConfigError(f"verify config: {check} check needs '{key}'")
                return cls(
                    **common,
                    check=check,
                    n=int_from_json(d["n"], "n"),
                    m=int_from_json(d["m"], "m"),
                    allow_composite=bool_from_json(
                        d.get("allow_composite", False), "allow_composite"
                    ),
                )
            case other:
                raise ConfigError(f"verify config: unknown check {other!r}")


@dataclass(frozen=True)
class MuScanConfig(ExperimentConfig):
    command: ClassVar[str] = "muscan"

    signal: Signal
    encoding: EncodingSpec
    sparsity: int
    delta: Fraction
    mus: tuple[int, ...]

    @classmethod
    def from_json(cls, data: Any, base: Path) -> MuScanConfig:
        d = check_keys(
            data, "muscan config", ["signal", "encoding", "sparsity", "delta", "mus"], COMMON_KEYS
        )
        signal = signal_from_json(_embedded(d["signal"], base))
        mus = d["mus"]
        if not isinstance(mus, list) or not mus:
            raise ConfigError("mus: expected a non-empty list of depths")
        return cls(
            **cls._common(dict(d)),
            signal=signal,
            encoding=encoding_from_json(d["encoding"], signal.n),
            sparsity=int_from_json(d["sparsity"], "sparsity"),
            delta=rational_from_json(d["delta"], "delta"),
            mus=tuple(int_from_json(m, "mus") for m in mus),
        )


@dataclass(frozen=True)
class EnumerateConfig(ExperimentConfig):
    command: ClassVar[str] = "enumerate"

    class_spec: ClassSpec
    count_only: bool = False

    @classmethod
    def from_json(cls, data: Any, base: Path) -> EnumerateConfig:
        d = check_keys(data, "enumerate config", ["class"], ("count_only", *COMMON_KEYS))
        return cls(
            **cls._common(dict(d)),
            class_spec=class_from_json(d["class"]),
            count_only=bool_from_json(d.get("count_only", False), "count_only"),
        )


def load_config[C: ExperimentConfig](path: Path, config_type: type[C]) -> C:
    """Parse and validate the config file for a command.

    Raises:
        ConfigError: on unreadable files, unknown keys or invalid values
    """
    return config_type.from_json(read_json(path), path.parent)
