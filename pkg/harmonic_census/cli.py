"""
Command-line interface for harmonic_census.

Usage:
    harmonic-census critical-values --n 4
    harmonic-census caustic --n 4 --a 3 --format csv --out caustic.csv
    harmonic-census winding --n 4 --a 1.37
    harmonic-census zeros --n 4 --a 1.1
    harmonic-census count --n 4 --a 1.1
    harmonic-census verify --n 4 --a 1.1
    harmonic-census sweep --n 5 --grid 1.05:30:20,log
    harmonic-census verify-all --n 6

Exit codes: 0 success, 2 invalid input, 3 certification failure.
"""

import functools
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import click
from pydantic import ValidationError

from harmonic_census.config import get_settings
from harmonic_census.exceptions import (
    CertificationError,
    InconsistentCensus,
    InvalidParameterError,
    NearCriticalValue,
)
from harmonic_census.models.CensusModels import CensusOptions
from harmonic_census.models.FamilyModels import FamilyParams
from harmonic_census.models.WindingModels import WindingOptions
from harmonic_census.services.CausticService import CausticService
from harmonic_census.services.CensusService import CensusService
from harmonic_census.services.TheoremService import TheoremService, interval_representatives
from harmonic_census.services.WindingService import WindingService
from harmonic_census.utils import serializers
from harmonic_census.utils.parsers import parse_a_grid, parse_float_list, parse_rect

__all__ = [
    "cli",
]

logger = logging.getLogger(__name__)

EXIT_INVALID = 2
EXIT_UNCERTIFIED = 3

TOLERANCE_FLAGS = (
    "max_turn",
    "max_points",
    "cell_min",
    "critical_exclusion",
    "tol_f",
    "max_iters",
)


def _fail(message: str, code: int) -> None:
    click.echo(f"Error: {message}", err=True)
    sys.exit(code)


def guarded(command: Callable[..., str]) -> Callable[..., None]:
    """
    Run a command body that returns its output text; map errors to exit codes
    and write the text to --out or stdout.
    """

    @functools.wraps(command)
    def wrapper(*args: Any, out: Optional[str] = None, **kwargs: Any) -> None:
        try:
            text = command(*args, **kwargs)
        except (ValidationError, InvalidParameterError) as e:
            _fail(str(e), EXIT_INVALID)
            return
        except InconsistentCensus as e:
            if e.report is not None:
                click.echo(serializers.to_json(serializers.census_document(e.report)), err=True)
            _fail(str(e), EXIT_UNCERTIFIED)
            return
        except CertificationError as e:
            _fail(f"{type(e).__name__}: {e}", EXIT_UNCERTIFIED)
            return
        if out:
            Path(out).write_text(text + "\n")
            logger.info(f"Wrote {out}")
        else:
            click.echo(text)

    return wrapper


def output_options(command: Callable[..., Any]) -> Callable[..., Any]:
    command = click.option(
        "--out", type=click.Path(dir_okay=False), default=None, help="Write to a file"
    )(command)
    return click.option(
        "--format",
        "fmt",
        type=click.Choice(["json", "csv"]),
        default="json",
        help="Output format",
    )(command)


def tolerance_options(command: Callable[..., Any]) -> Callable[..., Any]:
    for name, kind, text in reversed(
        [
            ("--max-turn", float, "Largest argument increment per sample"),
            ("--max-points", int, "Point budget of each winding computation"),
            ("--cell-min", float, "Smallest cell diameter, relative to R_max"),
            ("--critical-exclusion", float, "Census exclusion around critical values"),
            ("--tol-f", float, "Residual tolerance, relative to 1 + |a|"),
            ("--max-iters", int, "Newton iteration budget"),
        ]
    ):
        command = click.option(name, type=kind, default=None, help=text)(command)
    return command


def census_options(overrides: Dict[str, Any]) -> CensusOptions:
    return CensusOptions(
        **{name: overrides[name] for name in TOLERANCE_FLAGS if overrides.get(name) is not None}
    )


def winding_options(overrides: Dict[str, Any]) -> WindingOptions:
    return WindingOptions(
        **{
            name: overrides[name]
            for name in ("max_turn", "max_points")
            if overrides.get(name) is not None
        }
    )


@click.group()
@click.version_option(version="0.1.0", prog_name="harmonic-census")
@click.option("--verbose", is_flag=True, help="Log debug output to stderr")
def cli(verbose: bool) -> None:
    """
    Zero counts of the harmonic family f_a: caustics, winding numbers,
    critical values and certified zero censuses.
    """
    try:
        settings = get_settings()
    except (ValidationError, InvalidParameterError) as e:
        _fail(str(e), EXIT_INVALID)
        return
    logging.basicConfig(
        level=logging.DEBUG if verbose else settings.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


@cli.command()
@click.option("--n", type=int, required=True)
@click.option("--a", type=float, required=True)
@click.option("--max-turn", type=float, default=math.pi / 4, show_default=True)
@click.option("--max-points", type=int, default=100_000, show_default=True)
@output_options
@guarded
def caustic(n: int, a: float, max_turn: float, max_points: int, fmt: str) -> str:
    """
    Sample the caustic f_a(|z| = 1) over phi in [0, 2 n pi].
    """
    curve = CausticService().sample_caustic(
        FamilyParams(n=n, a=a), max_turn=max_turn, max_points=max_points
    )
    if fmt == "csv":
        return serializers.to_csv(curve.to_dataframe())
    return serializers.to_json(serializers.caustic_document(curve))


@cli.command()
@click.option("--n", type=int, required=True)
@click.option("--a", type=float, required=True)
@click.option("--rect", default=None, help="Rectangle x0,x1,y0,y1 instead of the caustic")
@click.option("--max-turn", type=float, default=None)
@click.option("--max-points", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@guarded
def winding(
    n: int, a: float, rect: Optional[str], max_turn: Optional[float], max_points: Optional[int]
) -> str:
    """
    Winding number about 0 of the caustic, or of f_a along a rectangle boundary.
    """
    params = FamilyParams(n=n, a=a)
    options = winding_options({"max_turn": max_turn, "max_points": max_points})
    service = WindingService()
    box = None if rect is None else parse_rect(rect)
    if box is None:
        report = service.caustic_winding(params, options)
    else:
        report = service.box_boundary_winding(params, box, options)
    if not report.certified:
        raise NearCriticalValue(
            f"Curve passes within {report.min_distance:.3e} of the origin; no winding number"
        )
    return serializers.to_json(serializers.winding_document(params, report, box))


@cli.command("critical-values")
@click.option("--n", type=int, required=True)
@click.option("--no-cross-check", is_flag=True, help="Skip the winding-jump bisection")
@output_options
@guarded
def critical_values(n: int, no_cross_check: bool, fmt: str) -> str:
    """
    The critical values a_1 < ... < a_N where the zero count drops.
    """
    table = TheoremService().critical_values(n, cross_check=not no_cross_check)
    if fmt == "csv":
        return serializers.to_csv(serializers.critical_values_dataframe(table))
    return serializers.to_json(serializers.critical_values_document(table))


@cli.command()
@click.option("--n", type=int, required=True)
@click.option("--a", type=float, required=True)
@tolerance_options
@output_options
@guarded
def zeros(n: int, a: float, fmt: str, **overrides: Any) -> str:
    """
    Certified census of the zeros of f_a with their orders.
    """
    params = FamilyParams(n=n, a=a)
    report = CensusService().certify_zeros(params, census_options(overrides))
    if fmt == "csv":
        return serializers.to_csv(report.to_dataframe())
    return serializers.to_json(serializers.census_document(report))


@cli.command()
@click.option("--n", type=int, required=True)
@click.option("--a", type=float, required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@guarded
def count(n: int, a: float) -> str:
    """
    Zero count predicted from the critical values (a > 1).
    """
    params = FamilyParams(n=n, a=a)
    service = TheoremService()
    table = service.critical_values(n)
    predicted = service.predicted_count_theorem(n, a, table)
    return serializers.to_json(
        serializers.count_document(params, predicted, service.regime(params, table))
    )


@cli.command()
@click.option("--n", type=int, required=True)
@click.option("--a", type=float, required=True)
@tolerance_options
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@guarded
def verify(n: int, a: float, **overrides: Any) -> str:
    """
    Theorem, winding and census counts side by side.
    """
    report = TheoremService().verify(FamilyParams(n=n, a=a), census_options(overrides))
    return serializers.to_json(serializers.verification_document(report))


@cli.command()
@click.option("--n", type=int, required=True)
@click.option("--grid", default=None, help="Grid spec start:stop:count,log|lin")
@click.option("--a", "a_list", default=None, help="Comma-separated list of a values")
@click.option("--threads", type=int, default=None, help="Worker threads")
@tolerance_options
@output_options
@guarded
def sweep(
    n: int,
    grid: Optional[str],
    a_list: Optional[str],
    threads: Optional[int],
    fmt: str,
    **overrides: Any,
) -> str:
    """
    verify() over many values of a; failed entries are reported, not fatal.
    """
    if (grid is None) == (a_list is None):
        raise InvalidParameterError("Give exactly one of --grid and --a")
    a_values = parse_a_grid(grid) if grid is not None else parse_float_list(a_list)
    if not a_values:
        raise InvalidParameterError("The sweep has no values of a")
    entries = TheoremService().sweep(n, a_values, census_options(overrides), threads)
    if fmt == "csv":
        return serializers.to_csv(serializers.sweep_dataframe(entries))
    return serializers.to_json(serializers.sweep_document(n, entries))


@cli.command("verify-all")
@click.option("--n", type=int, required=True)
@click.option("--threads", type=int, default=None, help="Worker threads")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@guarded
def verify_all(n: int, threads: Optional[int]) -> str:
    """
    Triple agreement in every interval between consecutive critical values.
    """
    service = TheoremService()
    table = service.critical_values(n)
    entries = service.sweep(n, interval_representatives(table), threads=threads)
    doc = serializers.sweep_document(n, entries)
    doc["critical_values"] = serializers.critical_values_document(table)["values"]
    doc["all_agree"] = all(entry.ok and entry.report.agree for entry in entries)
    text = serializers.to_json(doc)
    if not doc["all_agree"]:
        click.echo(text)
        _fail(f"Counts disagree or failed for n={n}", EXIT_UNCERTIFIED)
    return text


if __name__ == "__main__":
    cli()
