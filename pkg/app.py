"""
This is the command-line entry point. `run`, `sweep`, `suite` and `pi-p`
execute scenarios and print or write their reports; `serve` starts the Flask
API.

Exit codes: 0 when every check passed, 1 when a check failed or the numeric
layer raised, 2 for configuration and I/O errors.
"""

import functools
import json
import logging
import sys

import click

from model.errors import ConfigurationError, OutputError
from model.report import ReportFormat, emit
from model.scenario import exit_code, run_scenario, run_suite
from model.suite import SUITES


@click.group()
@click.option("--verbose", is_flag=True, help="Log solver progress to stderr.")
def cli(verbose):
    """ Verification lab for weighted p-Laplacian eigenvalue bounds """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def output_options(command):
    """ Options shared by every command that produces a report """
    @click.option("--out", type=click.Path(dir_okay=False), default=None,
                  help="Write the report here instead of stdout.")
    @click.option("--format", "fmt", type=click.Choice([f.value for f in ReportFormat]),
                  default=ReportFormat.JSON.value, show_default=True)
    @click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
    @click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
    @click.option("--canonical", is_flag=True, help="Strip wall times from the report.")
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        return command(*args, **kwargs)
    return wrapper


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as err:
        click.echo(f'Cannot read "{path}": {err}', err=True)
        sys.exit(2)


def _run(document: dict, seed: int, jobs: int) -> dict:
    try:
        return run_scenario(document, seed, jobs)
    except ConfigurationError as err:
        click.echo(f"Invalid configuration: {err}", err=True)
        sys.exit(2)


def _finish(report: dict, out, fmt: str, canonical: bool):
    try:
        text = emit(report, fmt, out, strip_timing=canonical)
    except OutputError as err:
        click.echo(str(err), err=True)
        sys.exit(2)
    if out is None:
        click.echo(text, nl=False)
    sys.exit(exit_code(report["status"]))


@cli.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@output_options
def run(config, out, fmt, seed, jobs, canonical):
    """ Run the scenario in CONFIG (a JSON document) """
    _finish(_run(_load(config), seed, jobs), out, fmt, canonical)


@cli.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@output_options
def sweep(config, out, fmt, seed, jobs, canonical):
    """ Run the sweep in CONFIG; rows come out in lexicographic axis order """
    document = _load(config)
    if not isinstance(document, dict) or document.get("kind") != "sweep":
        click.echo('Invalid configuration: kind: expected "sweep".', err=True)
        sys.exit(2)
    _finish(_run(document, seed, jobs), out, fmt, canonical)


@cli.command()
@click.argument("name", type=click.Choice(sorted(SUITES)))
@output_options
def suite(name, out, fmt, seed, jobs, canonical):
    """ Run a built-in suite """
    _finish(run_suite(name, seed, jobs), out, fmt, canonical)


@cli.command(name="pi-p")
@click.option("--p", "p", type=float, required=True)
@output_options
def pi_p(p, out, fmt, seed, jobs, canonical):
    """ Compare the closed form of π_p with its quadrature """
    _finish(_run({"kind": "pi_p", "p": p}, seed, jobs), out, fmt, canonical)


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=5000, show_default=True)
def serve(host, port):
    """ Start the HTTP API """
    from routes import api
    api.run(host=host, port=port)


if __name__ == '__main__':
    cli()
