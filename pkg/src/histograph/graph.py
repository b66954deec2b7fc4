"""The chronological citation graph: threshold selection, layered layout,
and SVG / DOT / HTML rendering.

Circles carry the node number; circle area is proportional to the selected
metric (LCS by default).  One horizontal band per publication year, years
increasing downward, with a barycenter ordering inside each band.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field, replace
from xml.sax.saxutils import escape, quoteattr

from .network import CitationNetwork

METRICS = ("lcs", "gcs")
RENDER_FORMATS = ("svg", "dot", "html")

R_MIN = 8.0     # radius of the weakest selected node, in length units
R_MAX = 40.0    # legibility clamp
MIN_GAP = 14.0  # minimum clearance between circles in a band
BAND_GAP = 28.0
MARGIN = 30.0
LABEL_GUTTER = 70.0  # room for the year labels on the left


@dataclass
class GraphSpec:
    """Threshold-selected subgraph plus everything the renderers need."""

    threshold: int
    metric: str
    selected: list[int]
    edges: set[tuple[int, int]]              # (citing, cited), both selected
    year_rows: dict[int, list[int]]          # year -> node ids, ascending years
    radii: dict[int, float]                  # clamped to R_MAX
    radii_raw: dict[int, float]              # pre-clamp, carries the area law
    clamped: set[int]
    labels: dict[int, dict]                  # node id -> author/year/title/lcs/gcs
    positions: dict[int, tuple[float, float]] | None = None
    metric_values: dict[int, int] = field(default_factory=dict)


def _metric_value(node, metric: str) -> int:
    return node.lcs if metric == "lcs" else node.gcs


def select_nodes(net: CitationNetwork, threshold: int, metric: str = "lcs") -> GraphSpec:
    """Keep every node whose metric is >= threshold, with the induced edges.

    An empty selection is valid (a warning goes to stderr); radii follow
    radius = R_MIN * sqrt(metric / weakest selected metric), floored at one
    so zero-score nodes under a zero threshold still draw.
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")

    selected = [n.node_id for n in net.nodes if _metric_value(n, metric) >= threshold]
    values = {nid: _metric_value(net.node(nid), metric) for nid in selected}
    if not selected:
        print(f"WARN: empty historiograph selection ({metric} >= {threshold})", file=sys.stderr)

    selected_set = set(selected)
    edges = {(c, d) for (c, d) in net.edges if c in selected_set and d in selected_set}

    base = min((max(v, 1) for v in values.values()), default=1)
    radii_raw = {}
    radii = {}
    clamped = set()
    for nid in selected:
        raw = R_MIN * math.sqrt(max(values[nid], 1) / base)
        radii_raw[nid] = raw
        if raw > R_MAX:
            clamped.add(nid)
            radii[nid] = R_MAX
        else:
            radii[nid] = raw

    year_rows: dict[int, list[int]] = {}
    for nid in selected:
        year_rows.setdefault(net.node(nid).record.pub_year, []).append(nid)
    year_rows = {year: year_rows[year] for year in sorted(year_rows)}

    labels = {}
    for nid in selected:
        node = net.node(nid)
        labels[nid] = {
            "author": node.first_author,
            "year": node.record.pub_year,
            "title": node.record.title,
            "lcs": node.lcs,
            "gcs": node.gcs,
        }
    return GraphSpec(
        threshold=threshold,
        metric=metric,
        selected=selected,
        edges=edges,
        year_rows=year_rows,
        radii=radii,
        radii_raw=radii_raw,
        clamped=clamped,
        labels=labels,
        metric_values=values,
    )


def layout(spec: GraphSpec) -> GraphSpec:
    """Position the selection: one band per year, barycenter order within.

    A node's preferred x is the mean x of its already-placed cited
    neighbors (earlier bands); nodes with none go to the right of the band,
    in id order.  A greedy left-to-right pass then enforces the minimum gap.
    """
    cited_by: dict[int, list[int]] = {}
    for citing, cited in sorted(spec.edges):
        cited_by.setdefault(citing, []).append(cited)

    positions: dict[int, tuple[float, float]] = {}
    y = MARGIN
    first_band = True
    for year, ids in spec.year_rows.items():
        band_max_r = max(spec.radii[n] for n in ids)
        y_center = (y + band_max_r) if first_band else (y + BAND_GAP + band_max_r)
        first_band = False

        ordered = []
        for nid in ids:
            placed = [positions[d][0] for d in cited_by.get(nid, []) if d in positions]
            bary = sum(placed) / len(placed) if placed else math.inf
            ordered.append((bary, nid))
        ordered.sort(key=lambda t: (t[0], t[1]))

        x_prev = None
        r_prev = 0.0
        for bary, nid in ordered:
            r = spec.radii[nid]
            floor = LABEL_GUTTER + r if x_prev is None else x_prev + r_prev + MIN_GAP + r
            x = floor if bary == math.inf else max(bary, floor)
            positions[nid] = (x, y_center)
            x_prev, r_prev = x, r
        y = y_center + band_max_r
    return replace(spec, positions=positions)


def component_count(spec: GraphSpec) -> int:
    """Connected components of the selected subgraph (edges undirected),
    isolated selected nodes included."""
    parent = {nid: nid for nid in spec.selected}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in spec.edges:
        parent[find(a)] = find(b)
    return len({find(n) for n in spec.selected})


def render(spec: GraphSpec, fmt: str, arrowheads: bool = False, link_for=None) -> str:
    """Render the graph as one self-contained document.

    svg/html need a positioned spec (run layout first); dot only needs the
    selection.  link_for, when given, maps a node id to an href wrapped
    around its glyph (svg/html only).  Output is byte-deterministic.
    """
    if fmt == "svg":
        return _render_svg(spec, arrowheads, link_for)
    if fmt == "html":
        return _render_html(spec, arrowheads, link_for)
    if fmt == "dot":
        return _render_dot(spec, arrowheads)
    raise ValueError(f"unknown render format {fmt!r}; expected one of {RENDER_FORMATS}")


def _tooltip(spec: GraphSpec, nid: int) -> str:
    info = spec.labels[nid]
    title = info["title"] or "(untitled)"
    return f"{info['author']} ({info['year']}) {title} [LCS {info['lcs']}, GCS {info['gcs']}]"


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _render_svg(spec: GraphSpec, arrowheads: bool, link_for) -> str:
    if spec.selected and spec.positions is None:
        raise ValueError("svg rendering needs a positioned spec; call layout() first")
    positions = spec.positions or {}

    if not spec.selected:
        return (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            '<svg xmlns="http://www.w3.org/2000/svg" width="360" height="60" viewBox="0 0 360 60">\n'
            '  <text x="10" y="35" font-family="sans-serif" font-size="14">'
            "empty graph: no nodes reach the selection threshold</text>\n"
            "</svg>\n"
        )

    width = max(x + spec.radii[n] for n, (x, y) in positions.items()) + MARGIN
    height = max(y + spec.radii[n] for n, (x, y) in positions.items()) + MARGIN

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        "  <style>"
        "circle { fill: #cfe2f3; stroke: #2c5777; stroke-width: 1.5; } "
        "text.num { font: 11px sans-serif; text-anchor: middle; fill: #1a1a1a; } "
        "text.year { font: 12px sans-serif; fill: #666666; } "
        "line { stroke: #555555; stroke-width: 1.2; }"
        "</style>",
    ]
    if arrowheads:
        out.append(
            '  <defs><marker id="arrow" markerWidth="8" markerHeight="8" refX="7" refY="3" '
            'orient="auto"><path d="M0,0 L7,3 L0,6 z" fill="#555555"/></marker></defs>'
        )

    band_years = {}
    for year, ids in spec.year_rows.items():
        band_years[year] = positions[ids[0]][1]
    for year, y_center in band_years.items():
        out.append(f'  <text class="year" x="8" y="{_fmt(y_center + 4)}">{year}</text>')

    marker = ' marker-end="url(#arrow)"' if arrowheads else ""
    for citing, cited in sorted(spec.edges):
        x1, y1 = positions[citing]
        x2, y2 = positions[cited]
        out.append(
            f'  <line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}"{marker}/>'
        )

    for nid in spec.selected:
        x, y = positions[nid]
        r = spec.radii[nid]
        glyph = [
            f'  <g id="n{nid}">',
            f"    <title>{escape(_tooltip(spec, nid))}</title>",
            f'    <circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r)}"/>',
            f'    <text class="num" x="{_fmt(x)}" y="{_fmt(y + 3.5)}">{nid}</text>',
            "  </g>",
        ]
        if link_for is not None:
            glyph = [f"  <a href={quoteattr(link_for(nid))}>"] + ["  " + g for g in glyph] + ["  </a>"]
        out.extend(glyph)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _render_html(spec: GraphSpec, arrowheads: bool, link_for) -> str:
    svg = _render_svg(spec, arrowheads, link_for)
    svg_body = svg.split("\n", 1)[1]  # drop the XML declaration inside HTML
    n_edges = len(spec.edges)
    caption = (
        f"{len(spec.selected)} nodes with {spec.metric.upper()} &#8805; {spec.threshold}, "
        f"{n_edges} citation links, {component_count(spec)} components"
        if spec.selected
        else f"empty graph: no nodes reach {spec.metric.upper()} &#8805; {spec.threshold}"
    )
    return (
        "<!DOCTYPE html>\n"
        '<html lang="en">\n<head>\n<meta charset="utf-8">\n'
        "<title>Citation historiograph</title>\n"
        "<style>body { font-family: sans-serif; margin: 1.5em; } "
        "p.caption { color: #444444; }</style>\n"
        "</head>\n<body>\n"
        "<h1>Citation historiograph</h1>\n"
        f'<p class="caption">{caption}. Hover a circle for the record label.</p>\n'
        f"{svg_body}"
        "</body>\n</html>\n"
    )


def _dot_quote(text: str) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _render_dot(spec: GraphSpec, arrowheads: bool) -> str:
    out = ["digraph historiograph {"]
    out.append('  rankdir="TB";')
    out.append('  node [shape="circle", fixedsize="true", style="filled", fillcolor="#cfe2f3"];')
    if not spec.selected:
        out.append("  // empty graph: no nodes reach the selection threshold")
    for nid in spec.selected:
        width = _fmt(2 * spec.radii[nid] / 72.0)  # length units -> inches
        out.append(
            f"  {_dot_quote(nid)} [label={_dot_quote(nid)}, width={_dot_quote(width)}, "
            f"tooltip={_dot_quote(_tooltip(spec, nid))}];"
        )
    edge_attr = "" if arrowheads else ' [dir="none"]'
    for citing, cited in sorted(spec.edges):
        out.append(f"  {_dot_quote(citing)} -> {_dot_quote(cited)}{edge_attr};")
    out.append("}")
    return "\n".join(out) + "\n"
