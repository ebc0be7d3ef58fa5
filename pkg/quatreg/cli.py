"""
Command-line front end: quatreg check | identities | derivative

Exit codes: 0 when every point (or identity) passes, 1 when any does not,
2 when the input cannot be read or parsed.
"""

import logging
from enum import Enum
from pathlib import Path
from typing import Optional

import typer

from quatreg import __version__
from quatreg.config import Settings, get_settings
from quatreg.errors import JobError, ParseError
from quatreg.identities import run_identities
from quatreg.jobs import load_job, resolve_job, run_check, run_derivative, special_function
from quatreg.models import Mode
from quatreg.report import render_check, render_derivative, render_identities, to_json
from quatreg.utils import setup_logger

app = typer.Typer(add_completion=False, help="Algebraic regularity checks for quaternion functions")
logger = logging.getLogger(__name__)

INPUT_ERROR = 2


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


def _settings() -> Settings:
    settings = get_settings()
    setup_logger("quatreg", settings.log_level)
    return settings


def _emit(report, text: str, fmt: OutputFormat, out: Optional[Path]) -> None:
    machine = to_json(report)
    typer.echo(machine if fmt is OutputFormat.JSON else text)
    if out is not None:
        out.write_text(machine + "\n", encoding="utf-8")
        logger.info("report written to %s", out)


def _load(job_path: Path):
    try:
        job = load_job(job_path)
        return job, special_function(job, str(job_path))
    except (JobError, ParseError) as e:
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(INPUT_ERROR)


@app.command()
def check(
    job_path: Path = typer.Argument(..., metavar="JOB", help="JSON job file"),
    tol: Optional[float] = typer.Option(None, "--tol", min=0.0, help="PDE tolerance; forms use ten times it"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for random limit directions"),
    fmt: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", help="Output format"),
    mode: Optional[Mode] = typer.Option(None, "--mode", help="Override the job's mode"),
    workers: Optional[int] = typer.Option(None, "--workers", min=1, help="Threads for per-point evaluation"),
    directions: Optional[int] = typer.Option(None, "--directions", min=0, help="Random limit directions"),
    out: Optional[Path] = typer.Option(None, "--out", help="Also write the JSON report here"),
    detail: bool = typer.Option(False, "--detail", help="Include per-direction quotients"),
):
    """Check a special-shape function for algebraic regularity at the job's points"""
    settings = _settings()
    job, F = _load(job_path)
    resolved = resolve_job(job, settings, tol=tol, seed=seed, mode=mode, directions=directions)
    report = run_check(F, resolved, workers=workers or settings.workers, detail=detail)
    _emit(report, render_check(report), fmt, out)
    raise typer.Exit(report.summary.exit_code)


@app.command()
def identities(
    seed: Optional[int] = typer.Option(None, "--seed", help="Suite seed (default: QUATREG_SEED or 0)"),
    samples: int = typer.Option(100, "--samples", min=0, help="Random cases per identity"),
    tol: Optional[float] = typer.Option(None, "--tol", min=0.0, help="Tolerance for the form identities"),
    fmt: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", help="Output format"),
    out: Optional[Path] = typer.Option(None, "--out", help="Also write the JSON report here"),
):
    """Verify the algebra, forms and regularity identities on seeded random data"""
    settings = _settings()
    report = run_identities(seed=settings.seed if seed is None else seed, samples=samples, tol=tol, settings=settings)
    _emit(report, render_identities(report), fmt, out)
    raise typer.Exit(report.exit_code)


@app.command()
def derivative(
    job_path: Path = typer.Argument(..., metavar="JOB", help="JSON job file"),
    tol: Optional[float] = typer.Option(None, "--tol", min=0.0, help="PDE tolerance for the derivative check"),
    fmt: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", help="Output format"),
    workers: Optional[int] = typer.Option(None, "--workers", min=1, help="Threads for per-point evaluation"),
    out: Optional[Path] = typer.Option(None, "--out", help="Also write the JSON report here"),
):
    """Print the quaternion derivative (∂f/∂x1) and check its regularity at the job's points"""
    settings = _settings()
    job, F = _load(job_path)
    resolved = resolve_job(job, settings, tol=tol)
    report = run_derivative(F, resolved, workers=workers or settings.workers)
    _emit(report, render_derivative(report), fmt, out)
    raise typer.Exit(report.check.summary.exit_code)


@app.command()
def version():
    """Print the quatreg version"""
    typer.echo(__version__)


def main() -> None:
    app(prog_name="quatreg")
