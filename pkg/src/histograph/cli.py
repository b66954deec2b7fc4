"""Command-line entry point.

One binary with subcommands mirroring the report surfaces:

    histograph analyze -i FILE... -o DIR [options]   full report bundle
    histograph graph   -i FILE... -o DIR [options]   historiograph files only
    histograph authors -i FILE... [--sort KEY]       ranked-author table
    histograph outer   -i FILE... [--top N]          outer-references table
    histograph missing -i FILE...                    missing-links report
    histograph matrix  -i FILE... [--page N]         citation-matrix rows

Option precedence: command-line flags > --config JSON file > defaults.
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from . import graph as histograph_graph
from .isiparse import ExportSyntaxError, parse_export
from .network import build_network, matrix_rows, page_count
from .qc import flagged_node_count, missing_links, outer_references, render_missing_link
from .rankings import rank_authors
from .report import ALL_FORMATS, RunConfig, write_bundle

_CONFIG_KEYS = {
    "min_lcs": "min_metric_threshold",
    "metric": "metric",
    "page_size": "page_size",
    "top_outer": "top_outer",
    "format": "formats",
    "lookup_url": "lookup_url_template",
    "stopwords": "stopword_path",
}


def _load_records(paths, warning_counter=None):
    """Read and parse every input file; WARN lines go to stderr."""
    records = []
    for path in paths:
        def warn(line_no, message, _path=path):
            if warning_counter is not None:
                warning_counter.append((str(_path), line_no, message))
            click.echo(f"WARN {line_no}: {message} [{_path}]", err=True)

        try:
            text = Path(path).read_text(encoding="utf-8", errors="replace")
        except OSError as exc:
            raise click.ClickException(f"cannot read {path}: {exc}") from exc
        try:
            records.extend(parse_export(text, on_warning=warn))
        except ExportSyntaxError as exc:
            raise click.ClickException(f"{path}: {exc}") from exc
    return records


def _build(paths, warning_counter=None):
    records = _load_records(paths, warning_counter)
    if not records:
        click.echo("WARN: no records parsed from the input", err=True)
    return build_network(records, on_warning=lambda msg: click.echo(f"WARN: {msg}", err=True))


def _parse_formats(value: str, allowed=ALL_FORMATS) -> frozenset:
    formats = frozenset(f.strip() for f in value.split(",") if f.strip())
    unknown = formats - set(allowed)
    if unknown:
        raise click.BadParameter(f"unknown format(s): {', '.join(sorted(unknown))}")
    if not formats:
        raise click.BadParameter("no formats given")
    return formats


def _merged_config(config_path, inputs, output_dir, **cli_values) -> RunConfig:
    values = {}
    if config_path:
        try:
            raw = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise click.ClickException(f"cannot read config {config_path}: {exc}") from exc
        for key, value in raw.items():
            if key not in _CONFIG_KEYS:
                raise click.ClickException(f"unknown config key {key!r} in {config_path}")
            values[_CONFIG_KEYS[key]] = value
    for key, value in cli_values.items():
        if value is not None:
            values[key] = value
    if isinstance(values.get("formats"), str):
        values["formats"] = _parse_formats(values["formats"])
    try:
        return RunConfig(input_paths=[str(p) for p in inputs], output_dir=str(output_dir), **values)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc


_input_option = click.option(
    "-i", "--input", "inputs", multiple=True, required=True,
    type=click.Path(exists=True, dir_okay=False), help="Tagged export file (repeatable).",
)


@click.group()
def main():
    """Citation historiography toolkit for tagged bibliographic exports."""


@main.command()
@_input_option
@click.option("-o", "--output", "output_dir", required=True, type=click.Path(file_okay=False))
@click.option("--min-lcs", "min_metric_threshold", type=int, default=None,
              help="Selection threshold for the graph (metric >= N; default 13).")
@click.option("--metric", type=click.Choice(["lcs", "gcs"]), default=None)
@click.option("--page-size", type=int, default=None, help="Matrix rows per page (default 500).")
@click.option("--top-outer", type=int, default=None, help="Outer references shown (default 300).")
@click.option("--format", "formats", default=None, help="Comma-separated: svg,dot,html,json,csv.")
@click.option("--lookup-url", "lookup_url_template", default=None,
              help="URL template with {key} for external reference lookups.")
@click.option("--stopwords", "stopword_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON file with default option values.")
def analyze(inputs, output_dir, config_path, **cli_values):
    """Write the full report bundle for a corpus."""
    config = _merged_config(config_path, inputs, output_dir, **cli_values)
    warnings: list = []
    net = _build(inputs, warnings)
    try:
        written = write_bundle(net, config, parse_warning_count=len(warnings))
    except OSError as exc:
        raise click.ClickException(f"cannot write to {output_dir}: {exc}") from exc
    if warnings:
        click.echo(f"{len(warnings)} parse warning(s)", err=True)
    click.echo(f"{len(net.nodes)} nodes, {len(net.edges)} links; wrote {len(written)} files to {output_dir}")


@main.command("graph")
@_input_option
@click.option("-o", "--output", "output_dir", required=True, type=click.Path(file_okay=False))
@click.option("--min-lcs", "min_metric_threshold", type=int, default=None)
@click.option("--metric", type=click.Choice(["lcs", "gcs"]), default=None)
@click.option("--format", "formats", default=None, help="Comma-separated: svg,dot,html.")
@click.option("--arrowheads", is_flag=True, default=False, help="Draw edge arrowheads.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
def graph_cmd(inputs, output_dir, config_path, arrowheads, **cli_values):
    """Render the historiograph only (no report pages)."""
    if cli_values.get("formats"):
        _parse_formats(cli_values["formats"], allowed=("svg", "dot", "html"))
    config = _merged_config(config_path, inputs, output_dir, **cli_values)
    formats = set(config.formats) & {"svg", "dot", "html"}
    if not formats:
        raise click.ClickException("graph needs at least one of: svg, dot, html")
    net = _build(inputs)
    spec = histograph_graph.select_nodes(net, config.min_metric_threshold, config.metric)
    spec = histograph_graph.layout(spec)
    try:
        out_dir = Path(config.output_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for fmt in sorted(formats):
            text = histograph_graph.render(spec, fmt, arrowheads=arrowheads)
            with open(out_dir / f"graph.{fmt}", "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    except OSError as exc:
        raise click.ClickException(f"cannot write to {output_dir}: {exc}") from exc
    click.echo(f"{len(spec.selected)} nodes selected; wrote {len(formats)} file(s) to {output_dir}")


@main.command()
@_input_option
@click.option("--sort", type=click.Choice(["pubs", "tlcs", "tgcs", "name"]), default="pubs")
@click.option("--top", type=int, default=30, help="Rows to print (0 = all).")
def authors(inputs, sort, top):
    """Print the ranked all-author list."""
    rows = rank_authors(_build(inputs), sort)
    if top:
        rows = rows[:top]
    click.echo(f"#\tName\tTGCS\tTLCS\tPubs")
    for i, row in enumerate(rows, start=1):
        click.echo(f"{i}\t{row.name}\t{row.tgcs}\t{row.tlcs}\t{row.pubs}")


@main.command()
@_input_option
@click.option("--top", type=int, default=300)
def outer(inputs, top):
    """Print the outer-references ranking."""
    report = outer_references(_build(inputs), top_n=top)
    click.echo(
        f"Cited references outside of this network. "
        f"Groups: {report.total_groups}; incidences: {report.total_occurrences} "
        f"(top {len(report.entries)} shown). Sorted by LCS."
    )
    for i, entry in enumerate(report.entries, start=1):
        marker = " *" if entry.in_corpus_source else ""
        click.echo(f"{i}\t{entry.local_cites}\t{entry.display}{marker}")


@main.command()
@_input_option
def missing(inputs):
    """Print potentially missed citations."""
    net = _build(inputs)
    links = missing_links(net)
    click.echo(f"{flagged_node_count(links)} nodes have citations that may potentially refer to other nodes.")
    current = None
    for link in links:
        if link.citing_node != current:
            current = link.citing_node
            click.echo(net.node(current).label)
        click.echo("  " + render_missing_link(link))


@main.command()
@_input_option
@click.option("--page", type=int, default=1)
@click.option("--page-size", type=int, default=500)
def matrix(inputs, page, page_size):
    """Print one page of the citation matrix."""
    net = _build(inputs)
    try:
        rows = matrix_rows(net, page, page_size)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(f"Page {page} of {page_count(len(net.nodes), page_size)}")
    click.echo("cited nodes | Cited nodes | Nodes | GCS | LCS | citing nodes")
    for row in rows:
        cited = " ".join(str(n) for n in row.cited_nodes)
        citing = " ".join(str(n) for n in row.citing_nodes)
        click.echo(f"{cited} | {row.cited_count} | {row.label} | {row.gcs} | {row.lcs} | {citing}")


if __name__ == "__main__":
    main()
