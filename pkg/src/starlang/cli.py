"""Command-line front door: read stories, convert formats, run the service.

Exit codes are stable: 0 success, 2 missing input or bind failure,
3 parse/validation error, 4 reasoning error. Reports go to standard
output; diagnostics and traces go to standard error.
"""

from __future__ import annotations

import json
import socket
import sys

import click

from . import kbgraph
from .nl2star import (
    AnnotatorError,
    ConversionError,
    StoryFormatError,
    convert as nl_convert,
    fetch_annotations,
    story_from_json,
)
from .parser import format_domain, parse_domain
from .pipeline import comprehend
from .reasoner import GroundingError, ReaderOptions, ReasonerError

EXIT_MISSING_INPUT = 2
EXIT_PARSE_ERROR = 3
EXIT_REASONING_ERROR = 4


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        click.echo(f"cannot read {path}: {exc.strerror}", err=True)
        sys.exit(EXIT_MISSING_INPUT)


def _parse_or_exit(text: str):
    result = parse_domain(text)
    if result.domain is None:
        for diag in result.diagnostics:
            click.echo(diag.render(), err=True)
        sys.exit(EXIT_PARSE_ERROR)
    for diag in result.diagnostics:
        click.echo(diag.render(), err=True)
    return result.domain


@click.group()
@click.version_option(package_name="starlang")
def main() -> None:
    """Story comprehension tooling for STAR domain files."""


@main.command()
@click.argument("domain_file")
@click.option("--universal", is_flag=True, help="List every activated rule instance.")
@click.option("--acceptable", is_flag=True, help="List the accepted rule instances.")
@click.option("--retracted", is_flag=True, help="List instances dropped since the previous session.")
@click.option("--elaborated", is_flag=True, help="List instances new to this session.")
@click.option("--qualified", is_flag=True, help="Show which instances defeat which.")
@click.option("--timings", is_flag=True, help="Show per-phase timings.")
@click.option("--show-story", is_flag=True, help="Print each session's statements.")
@click.option("--filter", "filters", multiple=True, help="Model filter, e.g. changing-only.")
@click.option("--horizon", type=int, default=None, help="Extend the model past the last time-point.")
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["text", "structured"]),
    default="text",
    show_default=True,
)
def read(
    domain_file: str,
    universal: bool,
    acceptable: bool,
    retracted: bool,
    elaborated: bool,
    qualified: bool,
    timings: bool,
    show_story: bool,
    filters: tuple[str, ...],
    horizon: int | None,
    output_format: str,
) -> None:
    """Read a story and print its comprehension reports."""
    domain = _parse_or_exit(_read_input(domain_file))
    options = ReaderOptions(
        show_universal=universal,
        show_acceptable=acceptable,
        show_retracted=retracted,
        show_elaborated=elaborated,
        show_qualified=qualified,
        show_timings=timings,
        show_story=show_story,
        horizon=horizon,
    )
    try:
        _, text, payload = comprehend(domain, options, filters)
    except (GroundingError, ReasonerError, ValueError) as exc:
        click.echo(f"reasoning error: {exc}", err=True)
        sys.exit(EXIT_REASONING_ERROR)
    if output_format == "structured":
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(text)


@main.command()
@click.argument("input_file")
@click.option("--annotator", default=None, help="Annotation server URL for raw text input.")
@click.option("--trace", is_flag=True, help="Print one conversion trace line per sentence.")
def nl2star(input_file: str, annotator: str | None, trace: bool) -> None:
    """Convert an annotated story (or raw text via --annotator) to STAR."""
    raw = _read_input(input_file)
    try:
        if annotator is not None:
            story = fetch_annotations(raw, annotator)
        else:
            story = story_from_json(json.loads(raw))
    except AnnotatorError as exc:
        click.echo(f"annotation failed: {exc}", err=True)
        sys.exit(EXIT_REASONING_ERROR)
    except (json.JSONDecodeError, StoryFormatError, ValueError) as exc:
        click.echo(f"invalid annotated story: {exc}", err=True)
        sys.exit(EXIT_PARSE_ERROR)
    try:
        domain, conversion_trace = nl_convert(story)
    except (ConversionError, StoryFormatError) as exc:
        click.echo(f"conversion failed: {exc}", err=True)
        sys.exit(EXIT_PARSE_ERROR)
    if trace:
        for entry in conversion_trace.entries:
            click.echo(entry.render(), err=True)
        for note in conversion_trace.notes:
            click.echo(f"note: {note}", err=True)
    click.echo(format_domain(domain), nl=False)


@main.command()
@click.argument("direction", type=click.Choice(["star2graph", "graph2star"]))
@click.argument("input_file")
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["json", "graphml", "manifest", "star"]),
    default=None,
    help="Output format (star2graph: json/graphml/manifest; graph2star: star).",
)
def graph(direction: str, input_file: str, output_format: str | None) -> None:
    """Convert between STAR rule text and the knowledge-graph model."""
    raw = _read_input(input_file)
    if direction == "star2graph":
        domain = _parse_or_exit(raw)
        result = kbgraph.domain_to_graph(domain)
        fmt = output_format or "json"
        try:
            sys.stdout.buffer.write(kbgraph.export(result, fmt))
        except ValueError as exc:
            click.echo(str(exc), err=True)
            sys.exit(EXIT_PARSE_ERROR)
        return
    try:
        loaded = kbgraph.graph_from_json(json.loads(raw))
    except (json.JSONDecodeError, kbgraph.GraphError) as exc:
        click.echo(f"invalid graph document: {exc}", err=True)
        sys.exit(EXIT_PARSE_ERROR)
    text, diagnostics = kbgraph.graph_to_star(loaded)
    for diag in diagnostics:
        click.echo(diag.render(), err=True)
    if any(d.severity == "error" for d in diagnostics):
        sys.exit(EXIT_PARSE_ERROR)
    click.echo(text, nl=False)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--store", "store_path", default="starlang.db", show_default=True)
@click.option("--workers", default=1, show_default=True, type=int)
@click.option("--retention-days", default=7.0, show_default=True, type=float)
@click.option("--annotator-url", default=None)
def serve(
    host: str,
    port: int,
    store_path: str,
    workers: int,
    retention_days: float,
    annotator_url: str | None,
) -> None:
    """Run the HTTP service until interrupted."""
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((host, port))
    except OSError as exc:
        click.echo(f"cannot bind {host}:{port}: {exc.strerror}", err=True)
        sys.exit(EXIT_MISSING_INPUT)
    finally:
        probe.close()

    import uvicorn

    from .service import ServiceConfig, create_app

    app = create_app(
        ServiceConfig(
            store_path=store_path,
            workers=workers,
            retention_days=retention_days,
            annotator_url=annotator_url,
        )
    )
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
