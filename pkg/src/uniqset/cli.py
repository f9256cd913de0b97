"""Typer CLI application for uniqset."""

from __future__ import annotations

import logging
import time
from collections.abc import Callable
from datetime import UTC, datetime
from functools import partial
from pathlib import Path
from typing import Annotated, Any

import typer
from rich.logging import RichHandler

from uniqset import __version__
from uniqset.codec import (
    RunReport,
    encoding_to_json,
    expsum_to_json,
    minor_report_to_json,
    modulation_to_json,
    mu_scan_to_csv,
    mu_scan_to_json,
    observation_to_json,
    rational_to_json,
    recovery_to_json,
    signal_to_json,
    verdict_to_json,
)
from uniqset.config import (
    EncodeConfig,
    EnumerateConfig,
    MuScanConfig,
    ObserveConfig,
    RecoverConfig,
    VerifyConfig,
    load_config,
)
from uniqset.errors import UniqsetError
from uniqset.output import (
    console,
    err_console,
    print_approximation,
    print_error,
    print_members,
    print_minor_report,
    print_mu_scan,
    print_observation,
    print_recovery,
    print_success,
    print_verdict,
)
from uniqset.recovery import Certificate, mu_scan, recover_bruteforce, recover_sparse
from uniqset.rounding import approximate_into_class, class_cardinality, enumerate_class
from uniqset.spectral import PrecisionPolicy, modulated_components, observe, observe_member
from uniqset.uniqueness import Status, prime_minor_scan, verify_uniqueness, window_sweep

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNDECIDED = 2
EXIT_WITNESS = 3

app = typer.Typer(
    name="uniqset",
    help="Exact recovery and uniqueness-set checks for finite complex sequences.",
    no_args_is_help=True,
)

# Shared options
ConfigOption = Annotated[
    Path,
    typer.Option(
        "--config",
        "-c",
        help="Experiment config (JSON)",
        exists=True,
        dir_okay=False,
    ),
]

OutOption = Annotated[
    Path | None,
    typer.Option(
        "--out",
        "-o",
        help="Write the result JSON to this file",
    ),
]

JsonOption = Annotated[
    bool,
    typer.Option(
        "--json",
        "-j",
        help="Output as JSON",
    ),
]

WorkersOption = Annotated[
    int,
    typer.Option(
        "--workers",
        "-w",
        help="Worker processes for enumeration and scans",
        envvar="UNIQSET_WORKERS",
        min=1,
    ),
]

PrecisionCapOption = Annotated[
    int | None,
    typer.Option(
        "--precision-cap",
        help="Largest binary precision tried when certifying (overrides config)",
        min=2,
    ),
]

LimitOption = Annotated[
    int | None,
    typer.Option(
        "--limit",
        help="Largest class or scan size to enumerate (overrides config)",
        min=1,
    ),
]


@app.callback()
def main(
    verbose: Annotated[
        bool,
        typer.Option("--verbose", "-v", help="Log decisions (precision steps, sweeps) to stderr"),
    ] = False,
) -> None:
    """Exact recovery and uniqueness-set checks for finite complex sequences."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def _policy(cap: int) -> PrecisionPolicy:
    return PrecisionPolicy(start=min(64, cap), cap=cap)


def _finish(
    command: str,
    digest: str,
    payload: dict[str, Any],
    started: float,
    json_output: bool,
    out: Path | None,
    render: Callable[[], None],
) -> None:
    """Print the result (tables or RunReport JSON) and optionally write it to a file."""
    report = RunReport(
        command,
        digest,
        __version__,
        payload,
        time.perf_counter() - started,
        datetime.now(UTC).isoformat(),
    )
    if json_output:
        console.print_json(data=report.to_json())
    else:
        render()
    if out is not None:
        out.write_text(report.dumps() + "\n")
        if not json_output:
            print_success(f"Report written to {out}")


def _fail(e: Exception) -> typer.Exit:
    print_error(str(e))
    return typer.Exit(EXIT_ERROR)


@app.command()
def encode(
    config: ConfigOption,
    out: OutOption = None,
    json_output: JsonOption = False,
) -> None:
    """Apply the marker encoding to a signal, projecting it into the encoded class."""
    started = time.perf_counter()
    try:
        cfg = load_config(config, EncodeConfig)
        approx = approximate_into_class(cfg.class_spec, cfg.signal, cfg.modulation)
        mod = approx.modulation
        components = () if mod is None else modulated_components(mod, approx.member)
    except (UniqsetError, ValueError) as e:
        raise _fail(e) from e
    payload: dict[str, Any] = {
        "encoding": encoding_to_json(cfg.encoding),
        "signal": signal_to_json(approx.member),
        "distance": rational_to_json(approx.distance),
    }
    if mod is not None:
        payload["modulation"] = modulation_to_json(mod)
        payload["components"] = [expsum_to_json(c) for c in components]
    _finish(
        "encode",
        cfg.digest,
        payload,
        started,
        json_output,
        out,
        partial(print_approximation, approx),
    )


@app.command("observe")
def observe_cmd(
    config: ConfigOption,
    out: OutOption = None,
    json_output: JsonOption = False,
) -> None:
    """Compute a trace of a signal or of the modulated class member it generates."""
    started = time.perf_counter()
    try:
        cfg = load_config(config, ObserveConfig)
        if cfg.modulation is None:
            obs = observe(cfg.signal, cfg.domain, cfg.points, cfg.precision)
        else:
            obs = observe_member(cfg.modulation, cfg.signal, cfg.domain, cfg.points, cfg.precision)
    except (UniqsetError, ValueError) as e:
        raise _fail(e) from e
    payload: dict[str, Any] = {"observation": observation_to_json(obs)}
    if cfg.modulation is not None:
        payload["modulation"] = modulation_to_json(cfg.modulation)
    _finish(
        "observe", cfg.digest, payload, started, json_output, out, lambda: print_observation(obs)
    )


@app.command()
def recover(
    config: ConfigOption,
    out: OutOption = None,
    json_output: JsonOption = False,
    workers: WorkersOption = 1,
    precision_cap: PrecisionCapOption = None,
    limit: LimitOption = None,
) -> None:
    """Recover a signal from an observation (sparse digit decoding or brute force).

    Exit codes: 0 certified, 1 error, 2 undecided.
    """
    started = time.perf_counter()
    try:
        cfg = load_config(config, RecoverConfig)
        if cfg.mode == "sparse":
            assert cfg.encoding is not None and cfg.sparsity is not None
            result = recover_sparse(cfg.observation, cfg.encoding, cfg.sparsity)
        else:
            assert cfg.class_spec is not None
            result = recover_bruteforce(
                cfg.observation,
                cfg.class_spec,
                cfg.modulation,
                _policy(precision_cap or cfg.precision_cap),
                limit=limit or cfg.limit,
                workers=workers,
            )
    except (UniqsetError, ValueError) as e:
        raise _fail(e) from e
    payload = {"mode": cfg.mode, "result": recovery_to_json(result)}
    _finish(
        "recover", cfg.digest, payload, started, json_output, out, lambda: print_recovery(result)
    )
    if result.certificate is Certificate.UNDECIDED:
        raise typer.Exit(EXIT_UNDECIDED)


@app.command()
def verify(
    config: ConfigOption,
    out: OutOption = None,
    json_output: JsonOption = False,
    workers: WorkersOption = 1,
    precision_cap: PrecisionCapOption = None,
    limit: LimitOption = None,
    allow_composite: Annotated[
        bool,
        typer.Option("--allow-composite", help="Run minor scans for composite N as well"),
    ] = False,
) -> None:
    """Run a uniqueness check, a window sweep or a prime minor scan.

    Exit codes: 0 unique or all minors nonzero, 1 error, 2 undecided, 3 collision or zero minor.
    """
    started = time.perf_counter()
    try:
        cfg = load_config(config, VerifyConfig)
        scan_limit = limit or cfg.limit
        if cfg.check == "uniqueness":
            assert cfg.class_spec is not None and cfg.domain is not None
            verdict = verify_uniqueness(
                cfg.class_spec,
                cfg.modulation,
                cfg.domain,
                cfg.points,
                _policy(precision_cap or cfg.precision_cap),
                limit=scan_limit,
                workers=workers,
            )
            code = {
                Status.UNIQUE: EXIT_OK,
                Status.UNDECIDED: EXIT_UNDECIDED,
                Status.COLLISION: EXIT_WITNESS,
            }[verdict.status]
            payload = {"check": "uniqueness", "verdict": verdict_to_json(verdict)}
            render: Callable[[], None] = partial(print_verdict, verdict)
        else:
            assert cfg.n is not None and cfg.m is not None
            if cfg.check == "window":
                report = window_sweep(cfg.n, cfg.m, limit=scan_limit, workers=workers)
            else:
                report = prime_minor_scan(
                    cfg.n,
                    cfg.m,
                    allow_composite=allow_composite or cfg.allow_composite,
                    limit=scan_limit,
                    workers=workers,
                )
            code = EXIT_OK if report.all_nonzero else EXIT_WITNESS
            payload = {"check": cfg.check, "report": minor_report_to_json(report)}
            render = partial(print_minor_report, report)
    except (UniqsetError, ValueError) as e:
        raise _fail(e) from e
    _finish("verify", cfg.digest, payload, started, json_output, out, render)
    if code != EXIT_OK:
        raise typer.Exit(code)


@app.command()
def muscan(
    config: ConfigOption,
    out: OutOption = None,
    json_output: JsonOption = False,
    csv_path: Annotated[
        Path | None,
        typer.Option("--csv", help="Write the scan rows as CSV to this file"),
    ] = None,
) -> None:
    """Scan rounding depths μ and record how sparse recovery holds up."""
    started = time.perf_counter()
    try:
        cfg = load_config(config, MuScanConfig)
        report = mu_scan(cfg.signal, cfg.encoding, cfg.sparsity, cfg.delta, cfg.mus)
    except (UniqsetError, ValueError) as e:
        raise _fail(e) from e
    if csv_path is not None:
        csv_path.write_text(mu_scan_to_csv(report))
    payload = {"scan": mu_scan_to_json(report)}
    _finish("muscan", cfg.digest, payload, started, json_output, out, lambda: print_mu_scan(report))


@app.command("enumerate")
def enumerate_cmd(
    config: ConfigOption,
    out: OutOption = None,
    json_output: JsonOption = False,
    limit: LimitOption = None,
    count: Annotated[
        bool,
        typer.Option("--count", help="Only report the number of members"),
    ] = False,
) -> None:
    """List the members of a finite class, or count them."""
    started = time.perf_counter()
    try:
        cfg = load_config(config, EnumerateConfig)
        cardinality = class_cardinality(cfg.class_spec)
        count_only = count or cfg.count_only
        members = [] if count_only else list(enumerate_class(cfg.class_spec, limit or cfg.limit))
    except (UniqsetError, ValueError) as e:
        raise _fail(e) from e
    payload: dict[str, Any] = {"cardinality": cardinality}
    if not count_only:
        payload["members"] = [signal_to_json(x) for x in members]

    def render() -> None:
        if count_only:
            console.print(f"[bold]Cardinality:[/bold] {cardinality}")
        else:
            print_members(members, cardinality)

    _finish("enumerate", cfg.digest, payload, started, json_output, out, render)
