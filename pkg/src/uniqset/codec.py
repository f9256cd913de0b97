"""JSON and CSV forms of signals, observations, classes and reports.

Numbers are exact: rationals travel as "num/den" strings, never floats.
Malformed documents raise ConfigError naming the offending key.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from uniqset.errors import ConfigError
from uniqset.exactnum import BallComplex, CyclotomicNumber, ExpSum, GaussianRational
from uniqset.recovery import MuScanReport, MuScanRow, RecoveryResult
from uniqset.rounding import ClassKind, ClassSpec, EncodingSpec, RoundingSpec
from uniqset.signal import Signal
from uniqset.spectral import (
    Domain,
    ModulationSpec,
    ObservedValue,
    Scale,
    Side,
    SpectrumObservation,
)
from uniqset.uniqueness import MinorScanReport, UniquenessVerdict

Json = dict[str, Any]

MU_SCAN_COLUMNS = ("mu", "max_error_num", "max_error_den", "support_preserved", "recovered_exactly")


def check_keys(
    data: object, what: str, required: Iterable[str], optional: Iterable[str] = ()
) -> Mapping[str, Any]:
    """Ensure data is an object with all required keys and nothing unknown."""
    if not isinstance(data, Mapping):
        raise ConfigError(f"{what}: expected an object, got {type(data).__name__}")
    required = set(required)
    allowed = required | set(optional)
    missing = sorted(required - data.keys())
    if missing:
        raise ConfigError(f"{what}: missing key '{missing[0]}'")
    unknown = sorted(set(data.keys()) - allowed)
    if unknown:
        raise ConfigError(f"{what}: unknown key '{unknown[0]}'")
    return data


# -- numbers -------------------------------------------------------------


def rational_to_json(value: Fraction | int) -> str:
    return str(Fraction(value))


def rational_from_json(value: object, what: str = "rational") -> Fraction:
    if isinstance(value, bool) or not isinstance(value, int | str):
        raise ConfigError(f"{what}: expected an integer or a 'num/den' string, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"{what}: not a rational: {value!r}") from e


def int_from_json(value: object, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{what}: expected an integer, got {value!r}")
    return value


def bool_from_json(value: object, what: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"{what}: expected true or false, got {value!r}")
    return value


def gaussian_to_json(z: GaussianRational) -> Json:
    return {"re": rational_to_json(z.re), "im": rational_to_json(z.im)}


def gaussian_from_json(data: object) -> GaussianRational:
    d = check_keys(data, "component", ["re"], ["im"])
    re = rational_from_json(d["re"], "re")
    return GaussianRational(re, rational_from_json(d.get("im", 0), "im"))


def cyclotomic_to_json(a: CyclotomicNumber) -> Json:
    a = a.canonical()
    return {"order": a.order, "coeffs": [rational_to_json(c) for c in a.coeffs]}


def cyclotomic_from_json(data: object) -> CyclotomicNumber:
    d = check_keys(data, "cyclotomic", ["order", "coeffs"])
    order = int_from_json(d["order"], "order")
    coeffs = [rational_from_json(c, "coeffs") for c in d["coeffs"]]
    den = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    return CyclotomicNumber.from_exponents(
        order, ((j, int(c * den)) for j, c in enumerate(coeffs)), den
    ).canonical()


def ball_to_json(b: BallComplex) -> Json:
    return {
        "mid_re": rational_to_json(b.mid_re),
        "mid_im": rational_to_json(b.mid_im),
        "radius": rational_to_json(b.radius),
        "precision": b.precision,
    }


def ball_from_json(data: object) -> BallComplex:
    d = check_keys(data, "ball", ["mid_re", "mid_im", "radius", "precision"])
    radius = rational_from_json(d["radius"], "radius")
    if radius < 0:
        raise ConfigError("ball: negative radius")
    return BallComplex(
        rational_from_json(d["mid_re"], "mid_re"),
        rational_from_json(d["mid_im"], "mid_im"),
        radius,
        int_from_json(d["precision"], "precision"),
    )


def expsum_to_json(e: ExpSum) -> Json:
    return {
        "terms": [
            {"exponent": rational_to_json(a), "coeff": cyclotomic_to_json(c)} for a, c in e.terms
        ]
    }


def expsum_from_json(data: object) -> ExpSum:
    d = check_keys(data, "expsum", ["terms"])
    pairs = []
    for term in d["terms"]:
        t = check_keys(term, "expsum term", ["exponent", "coeff"])
        exponent = rational_from_json(t["exponent"], "exponent")
        pairs.append((exponent, cyclotomic_from_json(t["coeff"])))
    return ExpSum.build(pairs)


def value_to_json(value: ObservedValue) -> Json:
    match value:
        case GaussianRational():
            return gaussian_to_json(value)
        case CyclotomicNumber():
            return cyclotomic_to_json(value)
        case ExpSum():
            return expsum_to_json(value)
        case BallComplex():
            return ball_to_json(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def value_from_json(data: object) -> ObservedValue:
    """Dispatch on the keys present: re, order, terms or radius."""
    if not isinstance(data, Mapping):
        raise ConfigError(f"value: expected an object, got {data!r}")
    if "radius" in data:
        return ball_from_json(data)
    if "terms" in data:
        return expsum_from_json(data)
    if "order" in data:
        return cyclotomic_from_json(data)
    return gaussian_from_json(data)


# -- signals and observations --------------------------------------------


def signal_to_json(x: Signal) -> Json:
    return {"n": x.n, "components": [gaussian_to_json(z) for z in x]}


def signal_from_json(data: object) -> Signal:
    d = check_keys(data, "signal", ["n", "components"])
    n = int_from_json(d["n"], "n")
    components = d["components"]
    if not isinstance(components, list) or len(components) != n:
        raise ConfigError(f"signal: expected {n} components")
    return Signal(tuple(gaussian_from_json(c) for c in components))


def observation_to_json(obs: SpectrumObservation) -> Json:
    return {
        "domain": str(obs.domain),
        "n": obs.n,
        "scale": str(obs.scale),
        "points": [
            rational_to_json(p) if obs.domain is Domain.ZTRANSFORM else int(p) for p in obs.points
        ],
        "values": [value_to_json(v) for v in obs.values],
    }


def observation_from_json(data: object) -> SpectrumObservation:
    d = check_keys(data, "observation", ["domain", "points", "values"], ["n", "scale"])
    try:
        domain = Domain(d["domain"])
        scale = Scale(d.get("scale", Scale.UNIT))
    except ValueError as e:
        raise ConfigError(f"observation: {e}") from e
    if domain is Domain.ZTRANSFORM:
        points: list[int | Fraction] = [rational_from_json(p, "points") for p in d["points"]]
    else:
        points = [int_from_json(p, "points") for p in d["points"]]
    values = [value_from_json(v) for v in d["values"]]
    n = d.get("n")
    try:
        return SpectrumObservation(
            domain,
            tuple(points),
            tuple(values),
            scale,
            None if n is None else int_from_json(n, "n"),
        )
    except ValueError as e:
        raise ConfigError(f"observation: {e}") from e


# -- specs ---------------------------------------------------------------


def encoding_from_json(data: object, n: int) -> EncodingSpec:
    d = check_keys(data, "encoding", ["nu", "M"], ["n"])
    if "n" in d and d["n"] != n:
        raise ConfigError(f"encoding: n = {d['n']} differs from the data length {n}")
    try:
        return EncodingSpec(int_from_json(d["nu"], "nu"), int_from_json(d["M"], "M"), n)
    except ValueError as e:
        raise ConfigError(f"encoding: {e}") from e


def encoding_to_json(enc: EncodingSpec) -> Json:
    return {"nu": enc.nu, "M": enc.big_m, "n": enc.n}


def class_to_json(cls: ClassSpec) -> Json:
    out: Json = {
        "kind": str(cls.kind),
        "nu": cls.nu,
        "n": cls.n,
        "bound": rational_to_json(cls.bound),
    }
    if isinstance(cls.rounding, EncodingSpec):
        out["M"] = cls.rounding.big_m
    else:
        out["mu"] = cls.rounding.mu
    out.update(sparsity=cls.sparsity, signed=cls.signed, real_only=cls.real_only)
    return out


def class_from_json(data: object) -> ClassSpec:
    d = check_keys(
        data, "class", ["kind", "nu", "n", "bound"], ["mu", "M", "sparsity", "signed", "real_only"]
    )
    try:
        kind = ClassKind(d["kind"])
        nu = int_from_json(d["nu"], "nu")
        n = int_from_json(d["n"], "n")
        rounding: RoundingSpec | EncodingSpec
        if kind is ClassKind.PLAIN:
            if "mu" not in d:
                raise ConfigError("class: missing key 'mu'")
            rounding = RoundingSpec(nu, int_from_json(d["mu"], "mu"))
        else:
            if "M" not in d:
                raise ConfigError("class: missing key 'M'")
            rounding = EncodingSpec(nu, int_from_json(d["M"], "M"), n)
        sparsity = d.get("sparsity")
        return ClassSpec(
            kind,
            rounding,
            n,
            rational_from_json(d["bound"], "bound"),
            None if sparsity is None else int_from_json(sparsity, "sparsity"),
            bool_from_json(d.get("signed", False), "signed"),
            bool_from_json(d.get("real_only", False), "real_only"),
        )
    except ValueError as e:
        raise ConfigError(f"class: {e}") from e


def modulation_to_json(mod: ModulationSpec) -> Json:
    return {
        "d": mod.d,
        "nu1": mod.angle_grid.nu,
        "mu1": mod.angle_grid.mu,
        "n": mod.n,
        "side": str(mod.side),
    }


def modulation_from_json(data: object, n: int) -> ModulationSpec:
    d = check_keys(data, "modulation", ["d", "nu1", "mu1"], ["n", "side"])
    if "n" in d and d["n"] != n:
        raise ConfigError(f"modulation: n = {d['n']} differs from the class length {n}")
    try:
        grid = RoundingSpec(int_from_json(d["nu1"], "nu1"), int_from_json(d["mu1"], "mu1"))
        return ModulationSpec(
            int_from_json(d["d"], "d"), grid, n, Side(d.get("side", Side.FREQUENCY_OBSERVED))
        )
    except ValueError as e:
        raise ConfigError(f"modulation: {e}") from e


# -- reports -------------------------------------------------------------


def recovery_to_json(result: RecoveryResult) -> Json:
    return {
        "certificate": str(result.certificate),
        "signal": None if result.signal is None else signal_to_json(result.signal),
        "candidates_examined": result.candidates_examined,
        "precision": result.precision,
        "support": list(result.support),
        "survivors": [signal_to_json(s) for s in result.survivors],
    }


def _pair_to_json(pair: tuple[Signal, Signal]) -> list[Json]:
    return [signal_to_json(pair[0]), signal_to_json(pair[1])]


def verdict_to_json(verdict: UniquenessVerdict) -> Json:
    return {
        "status": str(verdict.status),
        "mode": verdict.mode,
        "checked": verdict.checked,
        "witness": None if verdict.witness is None else _pair_to_json(verdict.witness),
        "undecided_pairs": [_pair_to_json(p) for p in verdict.undecided_pairs],
        "precision": verdict.precision,
    }


def minor_report_to_json(report: MinorScanReport) -> Json:
    witness = report.zero_witness
    return {
        "n": report.n,
        "m": report.m,
        "family": report.family,
        "checked": report.checked,
        "all_nonzero": report.all_nonzero,
        "zero_witness": None if witness is None else {"U": list(witness[0]), "T": list(witness[1])},
    }


def mu_scan_to_json(report: MuScanReport) -> Json:
    return {
        "delta": rational_to_json(report.delta),
        "robust_from": report.robust_from,
        "rows": [
            {
                "mu": row.mu,
                "max_error": None if row.max_error is None else rational_to_json(row.max_error),
                "support_preserved": row.support_preserved,
                "recovered_exactly": row.recovered_exactly,
            }
            for row in report.rows
        ],
    }


def mu_scan_to_csv(report: MuScanReport) -> str:
    """CSV with exact error numerators and denominators; a failed row leaves both empty."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(MU_SCAN_COLUMNS)
    for row in report.rows:
        err = row.max_error
        writer.writerow(
            [
                row.mu,
                "" if err is None else err.numerator,
                "" if err is None else err.denominator,
                str(row.support_preserved).lower(),
                str(row.recovered_exactly).lower(),
            ]
        )
    return buffer.getvalue()


def mu_scan_rows_from_csv(text: str) -> list[MuScanRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != MU_SCAN_COLUMNS:
        raise ConfigError(f"mu-scan CSV: expected columns {', '.join(MU_SCAN_COLUMNS)}")
    rows = []
    for record in reader:
        num, den = record["max_error_num"], record["max_error_den"]
        rows.append(
            MuScanRow(
                int(record["mu"]),
                None if num == "" else Fraction(int(num), int(den)),
                record["support_preserved"] == "true",
                record["recovered_exactly"] == "true",
            )
        )
    return rows


@dataclass(frozen=True, slots=True)
class RunReport:
    """Command result; wall-clock data lives in the envelope, outside the payload."""

    command: str
    config_digest: str
    version: str
    payload: Json
    duration: float = 0.0
    timestamp: str = ""

    def report_json(self) -> Json:
        return {
            "command": self.command,
            "config_digest": self.config_digest,
            "version": self.version,
            "payload": self.payload,
        }

    def to_json(self) -> Json:
        return {
            "envelope": {"duration_seconds": round(self.duration, 6), "timestamp": self.timestamp},
            "report": self.report_json(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)
