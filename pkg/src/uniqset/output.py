"""Rich output formatting helpers for the uniqset CLI."""

from __future__ import annotations

from collections.abc import Sequence

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from uniqset.exactnum import BallComplex, CyclotomicNumber, ExpSum, GaussianRational
from uniqset.recovery import Certificate, MuScanReport, RecoveryResult
from uniqset.rounding import ClassApproximation
from uniqset.signal import Signal
from uniqset.spectral import ObservedValue, SpectrumObservation
from uniqset.uniqueness import MinorScanReport, Status, UniquenessVerdict

console = Console()
err_console = Console(stderr=True)

_STATUS_STYLE = {
    Status.UNIQUE: "green",
    Status.COLLISION: "red",
    Status.UNDECIDED: "yellow",
}


def format_value(value: ObservedValue) -> str:
    match value:
        case GaussianRational():
            return str(value)
        case CyclotomicNumber():
            z = value.as_gaussian()
            if z is not None:
                return str(z)
            return f"{value.to_ball(64)} [dim](order {value.order})[/dim]"
        case ExpSum():
            if value.is_zero():
                return "0"
            return f"{value.enclose(64)} [dim]({len(value.terms)} terms)[/dim]"
        case BallComplex():
            return str(value)
    return repr(value)


def print_signal(x: Signal, title: str = "Signal") -> None:
    """Print a signal as an index/real/imaginary table."""
    table = Table(title=title, show_header=True, header_style="bold cyan")
    table.add_column("k", justify="right", style="green")
    table.add_column("Re")
    table.add_column("Im")
    for k, z in enumerate(x):
        style = "" if z else "dim"
        table.add_row(str(k), str(z.re), str(z.im), style=style)
    console.print(table)
    console.print(f"\n[dim]N = {x.n}, support = {list(x.support())}[/dim]")


def print_approximation(approx: ClassApproximation) -> None:
    """Print the class member and how far the input moved to reach it."""
    print_signal(approx.member, "Encoded signal")
    console.print(f"[dim]distance <= {approx.distance}[/dim]")
    mod = approx.modulation
    if mod is not None:
        console.print(
            f"[dim]modulation d = {mod.d}, angle grid {mod.angle_grid.nu}^-{mod.angle_grid.mu}, "
            f"{mod.side}[/dim]"
        )


def print_observation(obs: SpectrumObservation) -> None:
    table = Table(
        title=f"Observation ({obs.domain}, scale {obs.scale})",
        show_header=True,
        header_style="bold cyan",
    )
    table.add_column("Point", style="green")
    table.add_column("Value")
    for point, value in zip(obs.points, obs.values, strict=True):
        table.add_row(str(point), format_value(value))
    console.print(table)


def print_recovery(result: RecoveryResult) -> None:
    """Print the recovered signal, or the survivors when undecided."""
    style = "green" if result.certificate is not Certificate.UNDECIDED else "yellow"
    lines = [
        f"[bold]Certificate:[/bold] [{style}]{result.certificate}[/{style}]",
        f"[bold]Candidates examined:[/bold] {result.candidates_examined}",
    ]
    if result.precision is not None:
        lines.append(f"[bold]Precision:[/bold] {result.precision} bits")
    if result.support:
        lines.append(f"[bold]Support:[/bold] {list(result.support)}")
    console.print(Panel("\n".join(lines), title="Recovery", border_style="blue"))
    if result.signal is not None:
        print_signal(result.signal, "Recovered signal")
        return
    for i, survivor in enumerate(result.survivors):
        print_signal(survivor, f"Survivor {i + 1}")


def print_verdict(verdict: UniquenessVerdict) -> None:
    style = _STATUS_STYLE[verdict.status]
    lines = [
        f"[bold]Status:[/bold] [{style}]{verdict.status}[/{style}]",
        f"[bold]Mode:[/bold] {verdict.mode}",
        f"[bold]Checked:[/bold] {verdict.checked}",
    ]
    if verdict.undecided_pairs:
        lines.append(f"[bold]Undecided pairs:[/bold] {len(verdict.undecided_pairs)}")
        lines.append(f"[bold]Final precision:[/bold] {verdict.precision} bits")
    console.print(Panel("\n".join(lines), title="Uniqueness", border_style="blue"))
    if verdict.witness is not None:
        a, b = verdict.witness
        print_signal(a, "Witness a")
        print_signal(b, "Witness b")


def print_minor_report(report: MinorScanReport) -> None:
    style = "green" if report.all_nonzero else "red"
    lines = [
        f"[bold]N:[/bold] {report.n}",
        f"[bold]Family:[/bold] {report.family}",
        f"[bold]Minors checked:[/bold] {report.checked}",
        f"[bold]All nonzero:[/bold] [{style}]{report.all_nonzero}[/{style}]",
    ]
    if report.zero_witness is not None:
        rows, cols = report.zero_witness
        lines.append(f"[bold]Zero minor:[/bold] rows {list(rows)}, columns {list(cols)}")
    console.print(Panel("\n".join(lines), title="Minor scan", border_style="blue"))


def print_mu_scan(report: MuScanReport) -> None:
    """Print the robustness scan, one row per depth."""
    table = Table(
        title=f"μ-scan (δ = {report.delta})", show_header=True, header_style="bold cyan"
    )
    table.add_column("μ", justify="right", style="green")
    table.add_column("Max error")
    table.add_column("Support preserved")
    table.add_column("Recovered exactly")
    for row in report.rows:
        error = "[red]failed[/red]" if row.max_error is None else str(row.max_error)
        table.add_row(
            str(row.mu),
            error,
            "yes" if row.support_preserved else "[dim]no[/dim]",
            "yes" if row.recovered_exactly else "[dim]no[/dim]",
        )
    console.print(table)
    robust = "none in scan" if report.robust_from is None else f"μ ≥ {report.robust_from}"
    console.print(f"\n[dim]Robust from: {robust}[/dim]")


def print_members(members: Sequence[Signal], cardinality: int) -> None:
    if not members:
        console.print("[yellow]Class is empty[/yellow]")
        return
    table = Table(title="Class members", show_header=True, header_style="bold cyan")
    table.add_column("#", justify="right", style="green")
    table.add_column("Components")
    for i, x in enumerate(members):
        table.add_row(str(i), str(x))
    console.print(table)
    console.print(f"\n[dim]Total: {cardinality} member(s)[/dim]")


def print_error(message: str) -> None:
    """Print an error message."""
    console.print(f"[bold red]Error:[/bold red] {message}")


def print_success(message: str) -> None:
    """Print a success message."""
    console.print(f"[bold green]Success:[/bold green] {message}")
