#!/usr/bin/env python3
"""Main CLI interface for the series engine."""

import asyncio
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Any, Dict, List, NoReturn, Optional

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from core.config_manager import ConfigManager  # noqa: E402
from core.errors import EngineError  # noqa: E402
from core.formatting import format_bound, format_series  # noqa: E402
from core.series import Series  # noqa: E402
from core.session_manager import SessionManager, parse_rational_option  # noqa: E402
from models.types import (  # noqa: E402
    DecayReport,
    ErrorPayload,
    OutputMode,
    PcVerification,
    Preset,
    SessionConfig,
    VerifyMode,
)

# Initialize Typer app
app = typer.Typer(
    name="hahn",
    help="Exact truncated Hahn series and transseries engine",
    add_completion=False,
    rich_markup_mode="rich",
)

# Status and errors go to stderr; results go to stdout
console = Console(stderr=True)

config_app = typer.Typer(help="Configuration management")
app.add_typer(config_app, name="config")

logger = logging.getLogger("hahn")

DepthOption = Annotated[
    Optional[int], typer.Option("--depth", "-N", min=1, help="Weight depth (inclusive)")
]


@dataclass
class _Options:
    output: Optional[OutputMode] = None
    preset: Optional[Preset] = None
    config_path: Optional[Path] = None
    session: Optional[SessionManager] = None


def _options(ctx: typer.Context) -> _Options:
    if not isinstance(ctx.obj, _Options):
        ctx.obj = _Options()
    return ctx.obj


def _session(ctx: typer.Context, **overrides: Any) -> SessionManager:
    options = _options(ctx)
    overrides.setdefault("preset", options.preset)
    options.session = asyncio.run(SessionManager.create(options.config_path, overrides))
    return options.session


def _output_mode(ctx: typer.Context) -> OutputMode:
    options = _options(ctx)
    if options.output is not None:
        return options.output
    if options.session is not None:
        return options.session.config.output
    return OutputMode.TEXT


def _fail(ctx: typer.Context, error: Exception) -> NoReturn:
    """Report ``error`` on stderr and exit with its code."""
    logger.debug("command failed", exc_info=error)
    if isinstance(error, EngineError):
        payload = ErrorPayload(**error.to_payload())
        exit_code = error.exit_code
    else:
        payload = ErrorPayload(error="error", message=str(error))
        exit_code = 1

    if _output_mode(ctx) is OutputMode.JSON:
        typer.echo(payload.model_dump_json(exclude_none=True), err=True)
    else:
        where = f" (at column {payload.position[0] + 1})" if payload.position else ""
        console.print(f"[bold red]❌ Error:[/bold red] {escape(payload.message)}{where}")
    raise typer.Exit(exit_code)


def _emit_series(
    ctx: typer.Context,
    command: str,
    y: Series,
    show_bound: bool = False,
    verification: Optional[PcVerification] = None,
    decay: Optional[DecayReport] = None,
) -> None:
    if _output_mode(ctx) is OutputMode.JSON:
        result = SessionManager.result(command, y, verification, decay)
        typer.echo(result.model_dump_json(by_alias=True, exclude_none=True))
        return
    typer.echo(format_series(y))
    if show_bound:
        typer.echo(f"known_below: {format_bound(y)}")
    for line in _verification_lines(verification, decay):
        typer.echo(line)


def _mark(ok: bool) -> str:
    return "ok" if ok else "FAILED"


def _verification_lines(
    verification: Optional[PcVerification], decay: Optional[DecayReport]
) -> List[str]:
    lines = []
    if verification is not None:
        a = verification.a if verification.a is not None else "irrational"
        lines += [
            "verification:",
            f"  leading term: {_mark(verification.leading_term_ok)}",
            f"  P_c(y): {_mark(verification.certificate_zero)}"
            f" (known_below: {verification.certificate_known_below})",
            f"  R_c residual: {_mark(verification.rc_residual_zero)}",
            f"  U(y)' / U(y) - 1: {_mark(verification.u_residual_zero)}",
            f"  a: {a}",
        ]
    if decay is not None:
        lines.append(f"residual decay: {'pass' if decay.passed else 'FAIL'}")
        for entry in decay.entries:
            ratio = "-" if entry.decay_ratio is None else f"{entry.decay_ratio:.3e}"
            lines.append(
                f"  N={entry.depth} t={entry.t:g} residual={entry.residual:.3e} ratio={ratio}"
            )
    return lines


@app.callback()
def main_callback(
    ctx: typer.Context,
    output: Annotated[
        Optional[OutputMode], typer.Option("--output", "-o", help="Output format")
    ] = None,
    preset: Annotated[
        Optional[Preset], typer.Option("--preset", help="Session preset")
    ] = None,
    config: Annotated[
        Optional[Path], typer.Option("--config", help="Configuration file")
    ] = None,
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Debug logging")] = False,
):
    """
    Exact arithmetic on truncated Hahn series and transseries.

    Depths (-N) are inclusive weight bounds.
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )
    ctx.obj = _Options(output=output, preset=preset, config_path=config)


@app.command("eval")
def eval_command(
    ctx: typer.Context,
    expr: Annotated[str, typer.Option("--expr", "-e", help="Expression to evaluate")],
    depth: DepthOption = None,
    c: Annotated[Optional[str], typer.Option("--c", help="transseries(c) parameter")] = None,
):
    """Evaluate an expression to a truncated series."""
    try:
        session = _session(ctx, c=c)
        y = session.eval_expression(expr, depth)
    except Exception as e:
        _fail(ctx, e)
    _emit_series(ctx, "eval", y)


@app.command()
def hensel(
    ctx: typer.Context,
    coeffs: Annotated[
        str, typer.Option("--coeffs", help="Coefficient expressions a_0;a_1;...")
    ],
    depth: DepthOption = None,
):
    """Solve Q(z) = 0 for z ≺ 1, Q = a_0 + a_1 Z + ... (Hensel iteration)."""
    try:
        session = _session(ctx)
        y = session.hensel(coeffs.split(";"), depth)
    except Exception as e:
        _fail(ctx, e)
    _emit_series(ctx, "hensel", y)


@app.command("unit-eq")
def unit_eq(
    ctx: typer.Context,
    c: Annotated[str, typer.Option("--c", help="Exponent c ≠ -1")],
    eps: Annotated[str, typer.Option("--eps", help="Infinitesimal ε")],
    depth: DepthOption = None,
):
    """Solve (1+z)^c (1+ε+z) = 1 for z ≺ 1."""
    try:
        session = _session(ctx)
        y = session.unit_eq(parse_rational_option(c, "c"), eps, depth)
    except Exception as e:
        _fail(ctx, e)
    _emit_series(ctx, "unit-eq", y)


@app.command("solve-pc")
def solve_pc(
    ctx: typer.Context,
    c: Annotated[str, typer.Option("--c", help="Parameter c > 0 of P_c")],
    b: Annotated[str, typer.Option("--b", help="Leading coefficient b ≠ 0")],
    depth: DepthOption = None,
    verify: Annotated[
        VerifyMode, typer.Option("--verify", help="Checks to run on the result")
    ] = VerifyMode.NONE,
    t: Annotated[
        Optional[List[float]], typer.Option("--t", help="Sample point(s) for numeric checks")
    ] = None,
):
    """Zero y ~ b·e^{x/(c+1)} of P_c(Y) = Y'(c(Y+1)+Y) - Y(Y+1)."""
    try:
        c_value = parse_rational_option(c, "c")
        b_value = parse_rational_option(b, "b")
        session = _session(ctx, c=str(c_value))
        n = session.depth(depth)
        y = session.solve_pc(c_value, b_value, n)
        verification, decay = asyncio.run(
            session.verify_pc(y, c_value, b_value, n, verify, t)
        )
    except Exception as e:
        _fail(ctx, e)

    if verification is not None and not verification.certificate_zero:
        logger.warning("P_c(y) did not vanish below its known bound")
    if decay is not None and not decay.passed:
        logger.warning("residual decay check failed; numeric checks are advisory")
    _emit_series(ctx, "solve-pc", y, True, verification, decay)


@app.command("dominance")
def dominance_command(
    ctx: typer.Context,
    f: Annotated[str, typer.Option("-f", help="Left series f")],
    g: Annotated[str, typer.Option("-g", help="Right series g")],
    depth: DepthOption = None,
    c: Annotated[Optional[str], typer.Option("--c", help="transseries(c) parameter")] = None,
):
    """Relations f ≺ g, f ≍ g and f ∼ g (or Inconclusive)."""
    try:
        session = _session(ctx, c=c)
        record = session.dominance(f, g, depth)
    except Exception as e:
        _fail(ctx, e)

    if _output_mode(ctx) is OutputMode.JSON:
        typer.echo(record.model_dump_json())
    else:
        typer.echo(record.model_dump_json(exclude={"preceq"}))


# Configuration commands
@config_app.command("init")
def config_init():
    """Write a default ./.hahnrc."""
    try:
        config_manager = ConfigManager()
        path = asyncio.run(config_manager.init_config())
        if path is None:
            console.print("[yellow]Configuration file already exists[/yellow]")
        else:
            console.print(f"[bold green]✅ Configuration initialized: {path}[/bold green]")
    except Exception as e:
        console.print(f"[bold red]❌ Error:[/bold red] {escape(str(e))}")
        raise typer.Exit(1)


SETTABLE_KEYS = ("preset", "c", "depth", "output", "sample_points", "precision")


@config_app.command("set")
def config_set(
    key: str = typer.Argument(..., help=f"One of: {', '.join(SETTABLE_KEYS)}"),
    value: str = typer.Argument(..., help="Configuration value"),
    global_config: Annotated[bool, typer.Option("--global", "-g", help="Set global config")] = False,
):
    """Set a value in ./.hahnrc (or ~/.hahnrc)."""
    try:
        if key not in SETTABLE_KEYS:
            raise ValueError(f"unknown configuration key {key!r}")

        parsed: Any
        if key in ("depth", "precision"):
            parsed = int(value)
        elif key == "sample_points":
            parsed = [float(v) for v in value.split(",") if v.strip()]
        else:
            parsed = value
        # reject bad values before they reach the file
        SessionConfig(**{key: parsed})

        config_manager = ConfigManager()
        asyncio.run(config_manager.save_config({key: parsed}, global_config))
        console.print(f"[bold green]✅ Configuration updated: {key} = {escape(value)}[/bold green]")
    except ValueError as e:
        console.print(f"[bold red]❌ Error:[/bold red] {escape(str(e))}")
        raise typer.Exit(1)


@config_app.command("show")
def config_show(ctx: typer.Context):
    """Show the effective configuration."""
    try:
        options = _options(ctx)
        config_manager = ConfigManager(options.config_path)
        overrides: Dict[str, Any] = {"preset": options.preset}
        config = asyncio.run(config_manager.load_config(overrides))
        typer.echo(json.dumps(config.model_dump(mode="json"), indent=2))
    except Exception as e:
        console.print(f"[bold red]❌ Error:[/bold red] {escape(str(e))}")
        raise typer.Exit(1)


if __name__ == "__main__":
    app()
