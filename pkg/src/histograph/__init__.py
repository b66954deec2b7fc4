"""Citation historiography toolkit.

Parses tagged bibliographic export files, numbers the records into a
citation network with local/global citation scores, derives co-citation and
bibliographic-coupling structure, audits the collection for outer references
and potentially missed citations, and renders a chronological historiograph
plus static HTML report pages.
"""

from .isiparse import (
    BibRecord,
    CitedRef,
    ExportSyntaxError,
    format_export,
    parse_cited_ref,
    parse_export,
    record_ref_key,
    ref_key,
)
from .linkage import (
    LevelSet,
    LinkPair,
    bibliographic_couplings,
    citation_paths,
    cluster,
    cocitations,
    format_paths,
    reference_levels,
)
from .network import (
    CitationNetwork,
    MatrixRow,
    Node,
    build_network,
    dump_network,
    matrix_rows,
    page_count,
    resolve_reference,
)
from .qc import (
    MissingLink,
    OuterRef,
    OuterRefReport,
    flagged_node_count,
    missing_links,
    outer_references,
    render_missing_link,
)
from .rankings import AuthorRow, FrequencyRow, frequency_table, rank_authors
from .graph import GraphSpec, component_count, layout, render, select_nodes
from .report import RunConfig, write_bundle

__version__ = "0.1.0"

__all__ = [
    "AuthorRow",
    "BibRecord",
    "CitationNetwork",
    "CitedRef",
    "ExportSyntaxError",
    "FrequencyRow",
    "GraphSpec",
    "LevelSet",
    "LinkPair",
    "MatrixRow",
    "MissingLink",
    "Node",
    "OuterRef",
    "OuterRefReport",
    "RunConfig",
    "bibliographic_couplings",
    "build_network",
    "citation_paths",
    "cluster",
    "cocitations",
    "component_count",
    "dump_network",
    "flagged_node_count",
    "format_export",
    "format_paths",
    "frequency_table",
    "layout",
    "matrix_rows",
    "missing_links",
    "outer_references",
    "page_count",
    "parse_cited_ref",
    "parse_export",
    "rank_authors",
    "record_ref_key",
    "ref_key",
    "reference_levels",
    "render",
    "render_missing_link",
    "resolve_reference",
    "select_nodes",
    "write_bundle",
]
