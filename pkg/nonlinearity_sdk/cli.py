#!/usr/bin/env python3
"""
Nonlinearity SDK - Command Line Interface

Runs r-dimensional nonlinearity analyses of Boolean functions and S-boxes,
reproduces the reference tables and searches small function spaces for
optimal functions.

Usage:
    nonlinearity --help
    nonlinearity analyze --mode boolean --anf "x1*x2 + x3" --n 3 --r 1..3 --format md
    nonlinearity analyze --mode vectorial --sbox inverse --k 4 --modulus 0x13 --r 1..7
    nonlinearity analyze --mode boolean --tt 6ac3 --r 1,2
    nonlinearity spectrum --mode boolean --tt 6ac3
    nonlinearity sbox --k 4 --modulus 0x13
    nonlinearity optimal --n 4 --m 1 --r 2 --out results/
    nonlinearity optimal --n 4 --m 2 --r 1 --filter bent-coordinates --samples 200
    nonlinearity reproduce --table 2 --jobs 4
    nonlinearity config show
"""

import functools
import json
import sys
from pathlib import Path
from typing import Any, List, Optional, Tuple

try:
    import click
except ImportError:
    print("Error: 'click' library is required for CLI functionality.")
    print("Install it with: pip install click")
    sys.exit(1)

from .config import get_config, load_config_from_file
from .core import (
    BooleanFunction,
    VectorialFunction,
    anf_to_function,
    classical_nonlinearity,
    component_function,
    gf_inverse_sbox,
    parse_anf,
    walsh_spectrum,
)
from .exceptions import (
    AnalysisError,
    ConfigurationError,
    EmptySupportError,
    FieldError,
    NonlinearityError,
    SearchError,
    ValidationError,
)
from .logging import configure_logging
from .nonlinearity import analyze_range, reports_to_csv, reports_to_json, reports_to_markdown
from .optimal import (
    SCOPE_ALL,
    SCOPE_FILTERED,
    bent_coordinate_candidates,
    compare_with_perfect_nonlinear,
    optimal_search,
    random_candidates,
    select_candidates,
    write_census_jsonl,
    write_summary_json,
)
from .reference import reproduce_table

MODES = ("boolean", "vectorial")
FORMATS = ("json", "csv", "md")

# Validation fields mapped back to the flag that supplied them
FIELD_FLAGS = {
    "n": "--n",
    "m": "--m",
    "r": "--r",
    "k": "--k",
    "modulus": "--modulus",
    "b": "--component",
    "checkpoint": "--checkpoint",
}


def format_output(data: Any, format_type: Optional[str] = None) -> str:
    """Format plain data for the terminal."""
    format_type = format_type or "pretty"

    if format_type == "json":
        return json.dumps(data, indent=2)
    if isinstance(data, dict):
        output = []
        for key, value in data.items():
            if isinstance(value, dict):
                output.append(f"{key}:")
                for k, v in value.items():
                    output.append(f"  {k}: {v}")
            else:
                output.append(f"{key}: {value}")
        return "\n".join(output)
    return str(data)


def emit(text: str, out: Optional[str]) -> None:
    """Write to --out if given, otherwise to stdout."""
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        click.echo(f"📄 Wrote {path}", err=True)
    else:
        click.echo(text, nl=not text.endswith("\n"))


def handle_errors(func):
    """
    Decorator mapping SDK errors onto click errors.

    Input errors become usage errors (exit code 2) naming the offending flag;
    everything else exits with code 1.
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except click.ClickException:
            raise
        except ValidationError as e:
            field = e.details.get("field")
            raise click.BadParameter(str(e), param_hint=FIELD_FLAGS.get(field, field))
        except FieldError as e:
            raise click.BadParameter(str(e), param_hint="--modulus")
        except SearchError as e:
            raise click.UsageError(f"❌ Search Error: {e}")
        except ConfigurationError as e:
            click.echo(f"❌ Configuration Error: {e}", err=True)
            sys.exit(1)
        except AnalysisError as e:
            click.echo(f"❌ Analysis Error: {e}", err=True)
            sys.exit(1)
        except NonlinearityError as e:
            click.echo(f"❌ Nonlinearity Error: {e}", err=True)
            sys.exit(1)

    return wrapper


def parse_ranks(text: str) -> List[int]:
    """
    Parse "3", "1..4" or "1,2,5" into a list of dimensions.

    Raises:
        click.BadParameter: On malformed input
    """
    try:
        if ".." in text:
            low, high = (int(part) for part in text.split("..", 1))
            if low > high:
                raise ValueError
            return list(range(low, high + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"cannot parse {text!r}; use 3, 1..4 or 1,2", param_hint="--r")


def parse_modulus(text: str) -> int:
    try:
        return int(text, 16) if text.lower().startswith("0x") else int(text)
    except ValueError:
        raise click.BadParameter(f"not an integer: {text!r}", param_hint="--modulus")


def input_options(func):
    """Shared options selecting the analyzed function."""
    options = [
        click.option(
            "--mode",
            type=click.Choice(MODES),
            default="boolean",
            show_default=True,
            help="Conventional (support) or vectorial (graph) analysis",
        ),
        click.option("--anf", help="Algebraic normal form, e.g. 'x1*x2 + x3'"),
        click.option("--tt", help="Hex truth table"),
        click.option(
            "--file", "tt_file", type=click.Path(exists=True, dir_okay=False), help="File holding a hex truth table"
        ),
        click.option("--sbox", type=click.Choice(["inverse"]), help="Built-in S-box"),
        click.option("--k", type=int, default=4, show_default=True, help="S-box degree"),
        click.option("--modulus", default="0x13", show_default=True, help="Field polynomial, degree-k bit set"),
        click.option("--n", type=int, help="Input arity"),
        click.option("--m", type=int, help="Output arity (vectorial truth tables)"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def load_function(
    mode: str,
    anf: Optional[str],
    tt: Optional[str],
    tt_file: Optional[str],
    sbox: Optional[str],
    k: int,
    modulus: str,
    n: Optional[int],
    m: Optional[int],
) -> Tuple[Any, str]:
    """
    Build the function named by the input flags.

    Returns:
        (function, flag that supplied it)
    """
    sources = [
        (flag, value)
        for flag, value in (("--anf", anf), ("--tt", tt), ("--file", tt_file), ("--sbox", sbox))
        if value is not None
    ]
    if len(sources) != 1:
        raise click.UsageError("Give exactly one of --anf, --tt, --file or --sbox")
    flag, value = sources[0]

    try:
        if flag == "--sbox":
            function = gf_inverse_sbox(k, parse_modulus(modulus))
            return (function if mode == "vectorial" else function.coordinate(1)), flag

        if flag == "--anf":
            if n is None:
                raise click.BadParameter("--anf needs --n", param_hint="--n")
            function = anf_to_function(parse_anf(value, n))
            return (function.as_vectorial() if mode == "vectorial" else function), flag

        text = Path(value).read_text(encoding="utf-8") if flag == "--file" else value
        if mode == "boolean":
            return BooleanFunction.from_hex(text, n), flag
        return VectorialFunction.from_hex(text, m or 1, n), flag
    except ValidationError as e:
        field = e.details.get("field")
        raise click.BadParameter(str(e), param_hint=FIELD_FLAGS.get(field, flag))


@click.group()
@click.option(
    "--config",
    "config_file",
    type=click.Path(exists=True, dir_okay=False),
    help="JSON configuration file",
)
@click.option("--log-level", default=None, help="Log level (default from configuration)")
@click.option("--verbose", "-v", is_flag=True, help="Verbose output (INFO logs on stderr)")
@click.pass_context
def cli(ctx, config_file, log_level, verbose):
    """Nonlinearity SDK CLI

    Exact r-dimensional nonlinearity of Boolean functions and S-boxes.
    """
    ctx.ensure_object(dict)

    if config_file:
        try:
            load_config_from_file(config_file)
        except ConfigurationError as e:
            raise click.BadParameter(str(e), param_hint="--config")

    settings = get_config().logging
    level = "INFO" if verbose else (log_level or settings.level)
    configure_logging(
        level=level.upper(),
        file_path=settings.log_file if settings.enable_file else None,
        structured=settings.structured,
    )
    ctx.obj["verbose"] = verbose


# Analysis Commands
@cli.command("analyze")
@input_options
@click.option("--r", "ranks", default="1", show_default=True, help="Dimension: 3, 1..4 or 1,2")
@click.option("--format", "output_format", type=click.Choice(FORMATS), default=None, help="Output format")
@click.option("--out", type=click.Path(dir_okay=False), help="Write to file instead of stdout")
@click.option("--jobs", type=int, default=None, help="Worker processes (default: CPU count)")
@click.pass_context
@handle_errors
def analyze_command(ctx, mode, anf, tt, tt_file, sbox, k, modulus, n, m, ranks, output_format, out, jobs):
    """Class census of all rank-r linear maps for one function."""
    function, flag = load_function(mode, anf, tt, tt_file, sbox, k, modulus, n, m)
    try:
        reports = analyze_range(function, parse_ranks(ranks), jobs)
    except EmptySupportError as e:
        raise click.BadParameter(str(e), param_hint=flag)

    output_format = output_format or get_config().output.default_format
    if output_format == "md":
        text = reports_to_markdown(reports)
    elif output_format == "csv":
        text = reports_to_csv(reports)
    else:
        text = reports_to_json(reports)
    emit(text, out)


@cli.command("spectrum")
@input_options
@click.option("--component", "b", type=int, default=1, show_default=True, help="Component mask b (vectorial)")
@click.option("--out", type=click.Path(dir_okay=False), help="Write to file instead of stdout")
@click.pass_context
@handle_errors
def spectrum_command(ctx, mode, anf, tt, tt_file, sbox, k, modulus, n, m, b, out):
    """Walsh-Hadamard spectrum as exact fractions."""
    function, _ = load_function(mode, anf, tt, tt_file, sbox, k, modulus, n, m)
    if isinstance(function, VectorialFunction):
        function = component_function(function, b)

    spectrum = walsh_spectrum(function)
    data = {
        "n": function.n,
        "weight": function.weight(),
        "nonlinearity": classical_nonlinearity(function),
        "max_abs": str(spectrum.max_abs(nonzero_only=True)),
        "spectrum": spectrum.to_fractions(),
    }
    emit(json.dumps(data, indent=2) + "\n", out)


@cli.command("sbox")
@click.option("--k", type=int, default=4, show_default=True, help="Field degree")
@click.option("--modulus", default="0x13", show_default=True, help="Field polynomial, degree-k bit set")
@click.option("--format", "output_format", type=click.Choice(["hex", "json"]), default="hex", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), help="Write to file instead of stdout")
@handle_errors
def sbox_command(k, modulus, output_format, out):
    """Truth table of the inversion S-box over GF(2^k)."""
    sbox = gf_inverse_sbox(k, parse_modulus(modulus))
    if output_format == "json":
        text = format_output(
            {"k": k, "modulus": hex(parse_modulus(modulus)), "table": [int(v) for v in sbox.table]},
            "json",
        )
    else:
        text = sbox.to_hex()
    emit(text + "\n", out)


# Optimal Function Search
@cli.command("optimal")
@click.option("--n", type=int, required=True, help="Input arity")
@click.option("--m", type=int, default=1, show_default=True, help="Output arity")
@click.option("--r", type=int, default=1, show_default=True, help="Dimension")
@click.option(
    "--filter",
    "candidate_filter",
    type=click.Choice(["random", "bent-coordinates"]),
    default=None,
    help="Search sampled candidates instead of every function",
)
@click.option("--samples", type=int, default=1000, show_default=True, help="Candidates to draw")
@click.option("--seed", type=int, default=None, help="Random seed for candidates")
@click.option(
    "--predicate",
    type=click.Choice(["balanced", "perfect-nonlinear"]),
    default=None,
    help="Keep only candidates satisfying a predicate",
)
@click.option("--checkpoint", type=click.Path(dir_okay=False), help="Resumable census checkpoint (full scans)")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".", show_default=True, help="Output directory")
@click.option("--jobs", type=int, default=None, help="Worker processes (default: CPU count)")
@click.pass_context
@handle_errors
def optimal_command(ctx, n, m, r, candidate_filter, samples, seed, predicate, checkpoint, out_dir, jobs):
    """Search a function space for its optimal class."""
    if candidate_filter is None:
        if predicate:
            raise click.BadParameter("--predicate needs --filter", param_hint="--predicate")
        result = optimal_search(n, m, r, SCOPE_ALL, jobs=jobs, checkpoint=checkpoint)
        values = range(1 << (m * (1 << n)))
    else:
        if candidate_filter == "random":
            candidates = random_candidates(n, m, samples, seed)
        else:
            candidates = bent_coordinate_candidates(n, m, samples, seed)
        result = optimal_search(
            n, m, r, SCOPE_FILTERED, candidates=candidates, predicate=predicate, jobs=jobs
        )
        values = select_candidates(candidates, n, m, predicate)

    check = None
    if n % 2 == 0 and n >= 2 * m:
        check = compare_with_perfect_nonlinear(result, values)

    settings = get_config().output
    census_path = write_census_jsonl(result.census, Path(out_dir) / settings.census_filename)
    summary_path = write_summary_json(result, Path(out_dir) / settings.summary_filename, check)

    optimal = result.optimal
    click.echo("✅ Search complete:")
    click.echo(
        format_output(
            {
                "scanned": result.census.scanned,
                "classes": len(result.census.tallies),
                "optimal": optimal.to_dict(),
                "optimal_member_count": optimal.member_count,
            }
        )
    )
    if check is not None:
        label = "bent" if m == 1 else "perfect nonlinear"
        verdict = "coincides with" if check.equal else "differs from"
        click.echo(
            f"🔍 Optimal set {verdict} the {label} set "
            f"({check.optimal_count} optimal, {check.perfect_nonlinear_count} {label})"
        )
    click.echo(f"📄 Census: {census_path}")
    click.echo(f"📄 Summary: {summary_path}")


# Reference Tables
@cli.command("reproduce")
@click.option("--table", type=click.Choice(["1", "2"]), required=True, help="Reference table")
@click.option("--jobs", type=int, default=None, help="Worker processes (default: CPU count)")
@click.pass_context
@handle_errors
def reproduce_command(ctx, table, jobs):
    """Recompute a reference table and compare every cell."""
    result = reproduce_table(int(table), jobs)
    for check in result.checks:
        status = "PASS" if check.passed else "FAIL"
        click.echo(f"r={check.r} {check.column}: {status} (expected {check.expected}, got {check.actual})")

    for r, passed in result.rows():
        click.echo(f"{'✅' if passed else '❌'} r={r}")
    if not result.passed:
        click.echo(f"❌ {len(result.failures)} cell(s) failed", err=True)
        ctx.exit(1)
    click.echo(f"✅ Table {table}: all {len(result.rows())} rows pass")


# Configuration Commands
@cli.group()
def config():
    """Configuration commands."""
    pass


@config.command("show")
def show_config():
    """Show the effective configuration."""
    click.echo(format_output(get_config().to_dict(), "json"))


# Main entry point
def main():
    """Main CLI entry point."""
    cli(obj={})


if __name__ == "__main__":
    main()
