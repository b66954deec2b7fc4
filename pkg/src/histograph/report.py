"""Static HTML report bundle tying the whole pipeline together.

Every page is self-contained (inline styles, no network fetches), written
UTF-8 with LF endings, and byte-deterministic for a given input corpus.
"""

from __future__ import annotations

import html
import urllib.parse
from dataclasses import dataclass, field
from pathlib import Path

from . import graph as histograph_graph
from .network import CitationNetwork, dump_network, matrix_rows, page_count
from .qc import flagged_node_count, missing_links, outer_references, render_missing_link
from .rankings import FREQUENCY_FIELDS, frequency_table, rank_authors, table_to_csv
from .stopwords import DEFAULT_STOPWORDS, load_stopwords

ALL_FORMATS = frozenset({"svg", "dot", "html", "json", "csv"})

_CSS = """
body { font-family: sans-serif; margin: 1.5em; color: #1a1a1a; }
table { border-collapse: collapse; margin: 1em 0; }
th, td { border: 1px solid #bbbbbb; padding: 3px 8px; text-align: left;
         font-size: 13px; vertical-align: top; }
th { background: #e8eef4; }
tr:target { background: #fdf3c7; }
a { color: #2c5777; }
p.meta { color: #555555; }
nav { margin: 0.8em 0; }
pre { font-size: 13px; }
"""


@dataclass
class RunConfig:
    """Everything a pipeline run needs; defaults mirror the report surfaces."""

    input_paths: list[str] = field(default_factory=list)
    output_dir: str = "."
    min_metric_threshold: int = 13
    metric: str = "lcs"
    page_size: int = 500
    top_outer: int = 300
    formats: frozenset = ALL_FORMATS
    lookup_url_template: str | None = None
    stopword_path: str | None = None

    def __post_init__(self):
        if self.page_size < 1:
            raise ValueError("page_size must be >= 1")
        if self.top_outer < 1:
            raise ValueError("top_outer must be >= 1")
        unknown = set(self.formats) - ALL_FORMATS
        if unknown:
            raise ValueError(f"unknown formats: {sorted(unknown)}")


def _page(title: str, body: str, extra_nav: str = "") -> str:
    return (
        "<!DOCTYPE html>\n"
        '<html lang="en">\n<head>\n<meta charset="utf-8">\n'
        f"<title>{html.escape(title)}</title>\n"
        f"<style>{_CSS}</style>\n</head>\n<body>\n"
        f'<nav><a href="index.html">index</a>{extra_nav}</nav>\n'
        f"<h1>{html.escape(title)}</h1>\n"
        f"{body}"
        "</body>\n</html>\n"
    )


def _write(out_dir: Path, name: str, text: str, written: list) -> None:
    path = out_dir / name
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    written.append(path)


def node_page_for(node_id: int, page_size: int) -> int:
    return (node_id - 1) // page_size + 1


def _node_link(node_id: int, page_size: int) -> str:
    return f"matrix-{node_page_for(node_id, page_size)}.html#node-{node_id}"


def _linked_ids(ids, page_size: int) -> str:
    return " ".join(
        f'<a href="{_node_link(nid, page_size)}">{nid}</a>' for nid in ids
    )


def _matrix_pager(current: int, pages: int) -> str:
    parts = []
    for p in range(1, pages + 1):
        if p == current:
            parts.append(f"<strong>{p}</strong>")
        else:
            parts.append(f'<a href="matrix-{p}.html">{p}</a>')
    return "<nav>Page: " + " ".join(parts) + "</nav>\n"


def _matrix_page(net, page: int, pages: int, page_size: int) -> str:
    rows = matrix_rows(net, page, page_size)
    body = [f"<p class=\"meta\">Nodes: {len(net.nodes)}. Sorted by year, journal, volume, page.</p>"]
    body.append(_matrix_pager(page, pages))
    body.append(
        "<table>\n<tr><th>cited nodes</th><th>Cited nodes</th><th>Nodes</th>"
        "<th>GCS</th><th>LCS</th><th>citing nodes</th></tr>\n"
    )
    for row in rows:
        body.append(
            f'<tr id="node-{row.node_id}">'
            f"<td>{_linked_ids(row.cited_nodes, page_size)}</td>"
            f"<td>{row.cited_count}</td>"
            f"<td>{html.escape(row.label)}</td>"
            f"<td>{row.gcs}</td>"
            f"<td>{row.lcs}</td>"
            f"<td>{_linked_ids(row.citing_nodes, page_size)}</td>"
            "</tr>\n"
        )
    body.append("</table>\n")
    body.append(_matrix_pager(page, pages))
    return _page(f"Citation matrix, page {page} of {pages}", "".join(body))


def _authors_page(rows, sort: str, page_size: int) -> str:
    nav = "".join(
        f' · <a href="authors-{s}.html">by {s}</a>' for s in ("pubs", "tlcs", "tgcs") if s != sort
    )
    body = [f'<p class="meta">Ranked all-author list. Total: {len(rows)}. Sorted by {sort}.</p>']
    body.append(
        "<table>\n<tr><th>#</th><th>Name</th><th>TGCS</th><th>TLCS</th>"
        "<th>Pubs</th><th>Nodes</th></tr>\n"
    )
    for i, row in enumerate(rows, start=1):
        body.append(
            f"<tr><td>{i}</td><td>{html.escape(row.name)}</td><td>{row.tgcs}</td>"
            f"<td>{row.tlcs}</td><td>{row.pubs}</td>"
            f"<td>{_linked_ids(row.node_ids, page_size)}</td></tr>\n"
        )
    body.append("</table>\n")
    return _page(f"Authors by {sort}", "".join(body), extra_nav=nav)


def _frequency_page(rows, fld: str) -> str:
    body = ["<table>\n<tr><th>#</th><th>Key</th><th>Count</th><th>Share</th></tr>\n"]
    for i, row in enumerate(rows, start=1):
        body.append(
            f"<tr><td>{i}</td><td>{html.escape(row.key)}</td>"
            f"<td>{row.count}</td><td>{row.share * 100:.1f}%</td></tr>\n"
        )
    body.append("</table>\n")
    return _page(f"Frequency: {fld.replace('_', ' ')}", "".join(body))


def _outer_page(report, lookup_template: str | None, page_size: int) -> str:
    body = [
        '<p class="meta">Cited references outside of this network. '
        f"Distinct references: {report.total_groups}; "
        f"citing incidences: {report.total_occurrences} "
        f"(top {len(report.entries)} shown). Sorted by LCS.</p>\n"
    ]
    body.append(
        "<table>\n<tr><th>#</th><th>LCS</th><th>Reference</th>"
        "<th>Corpus journal?</th><th>Citing nodes</th></tr>\n"
    )
    for i, entry in enumerate(report.entries, start=1):
        display = html.escape(entry.display)
        if lookup_template:
            url = lookup_template.replace("{key}", urllib.parse.quote(entry.key, safe=""))
            display = f'<a href="{html.escape(url, quote=True)}">{display}</a>'
        body.append(
            f"<tr><td>{i}</td><td>{entry.local_cites}</td><td>{display}</td>"
            f"<td>{'yes' if entry.in_corpus_source else ''}</td>"
            f"<td>{_linked_ids(entry.citing_nodes, page_size)}</td></tr>\n"
        )
    body.append("</table>\n")
    return _page("Outer references", "".join(body))


def _missing_header(node) -> str:
    rec = node.record
    pages = rec.begin_page or ""
    if rec.end_page:
        pages += f"-{rec.end_page}"
    vol = rec.volume or ""
    if rec.issue:
        vol += f"({rec.issue})"
    where = " ".join(part for part in (rec.source_title, vol) if part)
    if pages:
        where += f":{pages}"
    return f"[{node.node_id}] {rec.pub_year} {where}".rstrip()


def _missing_page(net, links, page_size: int) -> str:
    body = [
        '<p class="meta">Potentially missed citations. '
        f"{flagged_node_count(links)} nodes have citations that may potentially "
        "refer to other nodes.</p>\n"
    ]
    current = None
    i = 0
    for link in links:
        if link.citing_node != current:
            if current is not None:
                body.append("</ul>\n")
            current = link.citing_node
            i += 1
            node = net.node(current)
            body.append(f"<h3>{i} | {html.escape(_missing_header(node))}</h3>\n")
            body.append(f"<p>{html.escape('; '.join(node.record.authors))}<br>")
            body.append(f"{html.escape(node.record.title)}</p>\n<ul>\n")
        target = _node_link(link.candidate_node, page_size)
        body.append(
            f"<li>{html.escape(link.cited_ref.raw)} may refer to "
            f'[<a href="{target}">{link.candidate_node}</a>] '
            f"{html.escape(link.candidate_key)} "
            f"<small>({html.escape(', '.join(sorted(link.reasons)))})</small></li>\n"
        )
    if current is not None:
        body.append("</ul>\n")
    if not links:
        body.append("<p>No potentially missed citations found.</p>\n")
    return _page("Missing links", "".join(body))


def _missing_text(net, links) -> str:
    lines = [
        "Potentially missed citations...",
        "",
        f"{flagged_node_count(links)} nodes have citations that may potentially refer to other nodes.",
        "",
    ]
    current = None
    i = 0
    for link in links:
        if link.citing_node != current:
            current = link.citing_node
            i += 1
            node = net.node(current)
            lines.append(f"{i} | {_missing_header(node)}")
            lines.append("; ".join(node.record.authors))
            lines.append(node.record.title)
        lines.append("  " + render_missing_link(link))
        lines.append("")
    return "\n".join(lines) + "\n"


def write_bundle(net: CitationNetwork, config: RunConfig, parse_warning_count: int = 0) -> list[Path]:
    """Write the full report bundle; returns the files written.

    The index page goes last, once everything it links to exists.
    """
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    formats = set(config.formats)
    page_size = config.page_size
    stopwords = (
        load_stopwords(config.stopword_path) if config.stopword_path else DEFAULT_STOPWORDS
    )

    pages = page_count(len(net.nodes), page_size)
    author_rows = {s: rank_authors(net, s) for s in ("pubs", "tlcs", "tgcs")}
    freq = {f: frequency_table(net, f, stopwords=stopwords) for f in FREQUENCY_FIELDS}
    outer = outer_references(net, config.top_outer)
    links = missing_links(net)

    if "html" in formats:
        for page in range(1, pages + 1):
            _write(out_dir, f"matrix-{page}.html", _matrix_page(net, page, pages, page_size), written)
        for sort, rows in author_rows.items():
            _write(out_dir, f"authors-{sort}.html", _authors_page(rows, sort, page_size), written)
        for fld, rows in freq.items():
            _write(out_dir, f"freq-{fld}.html", _frequency_page(rows, fld), written)
        _write(out_dir, "outer-refs.html", _outer_page(outer, config.lookup_url_template, page_size), written)
        _write(out_dir, "missing-links.html", _missing_page(net, links, page_size), written)
    _write(out_dir, "missing-links.txt", _missing_text(net, links), written)

    if "csv" in formats:
        _write(out_dir, "authors.csv", table_to_csv(
            author_rows["pubs"],
            [
                ("name", lambda r: r.name),
                ("tgcs", lambda r: r.tgcs),
                ("tlcs", lambda r: r.tlcs),
                ("pubs", lambda r: r.pubs),
                ("nodes", lambda r: " ".join(str(n) for n in r.node_ids)),
            ],
        ), written)
        for fld, rows in freq.items():
            _write(out_dir, f"freq-{fld}.csv", table_to_csv(
                rows,
                [
                    ("key", lambda r: r.key),
                    ("count", lambda r: r.count),
                    ("share", lambda r: f"{r.share:.6f}"),
                ],
            ), written)
        _write(out_dir, "outer-refs.csv", table_to_csv(
            list(enumerate(outer.entries, start=1)),
            [
                ("rank", lambda t: t[0]),
                ("local_cites", lambda t: t[1].local_cites),
                ("reference", lambda t: t[1].display),
                ("key", lambda t: t[1].key),
                ("in_corpus_source", lambda t: "yes" if t[1].in_corpus_source else "no"),
                ("citing_nodes", lambda t: " ".join(str(n) for n in t[1].citing_nodes)),
            ],
        ), written)

    spec = histograph_graph.select_nodes(net, config.min_metric_threshold, config.metric)
    spec = histograph_graph.layout(spec)
    link_for = (lambda nid: _node_link(nid, page_size)) if "html" in formats else None
    if "svg" in formats:
        _write(out_dir, "graph.svg", histograph_graph.render(spec, "svg"), written)
    if "dot" in formats:
        _write(out_dir, "graph.dot", histograph_graph.render(spec, "dot"), written)
    if "html" in formats:
        _write(out_dir, "graph.html", histograph_graph.render(spec, "html", link_for=link_for), written)

    if "json" in formats:
        _write(out_dir, "network.json", dump_network(net), written)

    if "html" in formats:
        _write(out_dir, "index.html", _index_page(
            net, config, pages, author_rows, outer, links, spec, parse_warning_count, written
        ), written)
    return written


def _index_page(net, config, pages, author_rows, outer, links, spec, warning_count, written) -> str:
    names = {p.name for p in written}
    n_nodes = len(net.nodes)
    body = ["<table>\n"]
    stats = [
        ("Nodes", n_nodes),
        ("Citation links", len(net.edges)),
        ("Distinct authors", len(author_rows["pubs"])),
        ("Outer reference groups", outer.total_groups),
        ("Outer citing incidences", outer.total_occurrences),
        ("Nodes with potential missing links", flagged_node_count(links)),
        (f"Graph selection ({config.metric.upper()} &#8805; {config.min_metric_threshold})", len(spec.selected)),
        ("Graph components", histograph_graph.component_count(spec) if spec.selected else 0),
        ("Parse warnings", warning_count),
    ]
    for label, value in stats:
        body.append(f"<tr><th>{label}</th><td>{value}</td></tr>\n")
    body.append("</table>\n")

    sections: list[tuple[str, list[tuple[str, str]]]] = []
    matrix_links = [(f"matrix-{p}.html", f"page {p}") for p in range(1, pages + 1)]
    if matrix_links:
        sections.append(("Citation matrix", matrix_links))
    sections.append(
        ("Authors", [(f"authors-{s}.html", f"by {s}") for s in ("pubs", "tlcs", "tgcs")])
    )
    sections.append(
        ("Frequencies", [(f"freq-{f}.html", f.replace("_", " ")) for f in FREQUENCY_FIELDS])
    )
    sections.append(
        ("Collection audit", [("outer-refs.html", "outer references"), ("missing-links.html", "missing links")])
    )
    graph_links = [(n, n) for n in ("graph.html", "graph.svg", "graph.dot") if n in names]
    if graph_links:
        sections.append(("Historiograph", graph_links))
    data_links = [(n, n) for n in sorted(names) if n.endswith((".csv", ".json", ".txt"))]
    if data_links:
        sections.append(("Data files", data_links))

    for heading, items in sections:
        present = [(href, text) for href, text in items if href in names]
        if not present:
            continue
        body.append(f"<h2>{heading}</h2>\n<ul>\n")
        for href, text in present:
            body.append(f'<li><a href="{href}">{html.escape(text)}</a></li>\n')
        body.append("</ul>\n")
    return _page("Citation historiography report", "".join(body))
