"""Citation network construction.

Records are numbered 1..N in (year, journal, volume, page) order, cited
references are resolved against the corpus with a strict exact-match rule,
and the result is an immutable network carrying per-node LCS/GCS plus the
pool of unresolved references.  Tolerant ("may refer to") matching lives in
the qc module, not here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .isiparse import BibRecord, CitedRef, normalize_author, parse_cited_ref, ref_key


def _numstr_sort_key(value: str | None):
    # Numeric volumes/pages sort numerically, everything else as case-folded
    # text after the numerics; missing values come first.
    if value is None:
        return (0, -1, "")
    v = value.strip()
    if v.isdigit():
        return (0, int(v), "")
    return (1, 0, v.casefold())


def _norm_numstr(value: str | None) -> str | None:
    """Match-key form of a volume/page: '090' and '90' compare equal."""
    if value is None:
        return None
    v = value.strip().upper()
    return str(int(v)) if v.isdigit() else v


def record_sort_key(record: BibRecord):
    """Node-numbering order: year, journal, volume, page; ties broken by
    first-author key, then title."""
    first = record.authors[0] if record.authors else ""
    return (
        record.pub_year,
        record.source_title.casefold(),
        _numstr_sort_key(record.volume),
        _numstr_sort_key(record.begin_page),
        normalize_author(first),
        record.title.casefold(),
    )


@dataclass
class Node:
    """One numbered paper of the collection with its local/global scores."""

    node_id: int
    record: BibRecord
    cited_nodes: set[int] = field(default_factory=set)
    citing_nodes: set[int] = field(default_factory=set)

    @property
    def lcs(self) -> int:
        return len(self.citing_nodes)

    @property
    def gcs(self) -> int:
        return self.record.global_cites

    @property
    def first_author(self) -> str:
        return self.record.authors[0] if self.record.authors else "[ANONYMOUS]"

    @property
    def label(self) -> str:
        return f"{self.node_id} {self.record.pub_year} {self.first_author}"

    def __repr__(self) -> str:  # full record repr is too noisy
        return f"Node({self.node_id}, {self.record.pub_year}, lcs={self.lcs}, gcs={self.gcs})"


@dataclass
class CitationNetwork:
    nodes: list[Node]
    edges: set[tuple[int, int]]                 # (citing_id, cited_id)
    unresolved: list[tuple[int, CitedRef]]      # references matching no node
    self_refs_dropped: int = 0
    duplicate_ref_edges: int = 0

    def node(self, node_id: int) -> Node:
        if not 1 <= node_id <= len(self.nodes):
            raise KeyError(f"no such node: {node_id}")
        return self.nodes[node_id - 1]

    def __len__(self) -> int:
        return len(self.nodes)


def node_match_key(record: BibRecord):
    first = record.authors[0] if record.authors else ""
    return (
        normalize_author(first),
        record.pub_year,
        _norm_numstr(record.volume),
        _norm_numstr(record.begin_page),
    )


def build_match_index(nodes) -> dict:
    """Strict lookup index: (author key, year, volume, page) -> node ids."""
    index: dict = {}
    for node in nodes:
        index.setdefault(node_match_key(node.record), []).append(node.node_id)
    return index


def resolve_reference(ref: CitedRef, index: dict, on_warning=None) -> int | None:
    """Strict resolution: author, year, volume and page all present and equal.

    Deliberately unforgiving; near misses are the qc module's business.
    An ambiguous match (several nodes share the key) resolves to the lowest
    node id with a warning.
    """
    if not ref.author_key or ref.year is None or ref.volume is None or ref.page is None:
        return None
    key = (ref.author_key, ref.year, _norm_numstr(ref.volume), _norm_numstr(ref.page))
    ids = index.get(key)
    if not ids:
        return None
    if len(ids) > 1 and on_warning is not None:
        on_warning(f"ambiguous reference {ref.raw!r} matches nodes {sorted(ids)}; using {min(ids)}")
    return min(ids)


def build_network(records, on_warning=None) -> CitationNetwork:
    """Number the records and resolve every cited reference.

    Deterministic for a given input multiset: numbering comes from
    record_sort_key and all adjacency is stored as plain sets of ids.
    Self-citations (a record whose reference resolves to itself) are dropped.
    """
    ordered = sorted(records, key=record_sort_key)
    nodes = [Node(node_id=i, record=rec) for i, rec in enumerate(ordered, start=1)]
    index = build_match_index(nodes)

    edges: set[tuple[int, int]] = set()
    unresolved: list[tuple[int, CitedRef]] = []
    self_dropped = 0
    duplicates = 0
    for node in nodes:
        for raw in node.record.cited_refs:
            ref = parse_cited_ref(raw)
            target = resolve_reference(ref, index, on_warning)
            if target is None:
                unresolved.append((node.node_id, ref))
                continue
            if target == node.node_id:
                self_dropped += 1
                continue
            edge = (node.node_id, target)
            if edge in edges:
                duplicates += 1
                continue
            edges.add(edge)
            node.cited_nodes.add(target)
            nodes[target - 1].citing_nodes.add(node.node_id)

    return CitationNetwork(
        nodes=nodes,
        edges=edges,
        unresolved=unresolved,
        self_refs_dropped=self_dropped,
        duplicate_ref_edges=duplicates,
    )


@dataclass
class MatrixRow:
    """One citation-matrix row: cited list, its count, the node label,
    GCS, LCS, and the citing list."""

    node_id: int
    label: str
    cited_nodes: list[int]
    cited_count: int
    gcs: int
    lcs: int
    citing_nodes: list[int]


def page_count(n_nodes: int, page_size: int) -> int:
    if page_size < 1:
        raise ValueError(f"page_size must be >= 1, got {page_size}")
    return (n_nodes + page_size - 1) // page_size


def matrix_rows(net: CitationNetwork, page: int, page_size: int = 500) -> list[MatrixRow]:
    """Rows of one citation-matrix page (pages are 1-based)."""
    pages = page_count(len(net.nodes), page_size)
    if page < 1 or page > pages:
        raise ValueError(f"page {page} out of range 1..{pages}")
    start = (page - 1) * page_size
    rows = []
    for node in net.nodes[start : start + page_size]:
        cited = sorted(node.cited_nodes)
        rows.append(
            MatrixRow(
                node_id=node.node_id,
                label=node.label,
                cited_nodes=cited,
                cited_count=len(cited),
                gcs=node.gcs,
                lcs=node.lcs,
                citing_nodes=sorted(node.citing_nodes),
            )
        )
    return rows


def network_to_dict(net: CitationNetwork) -> dict:
    """JSON-ready structure of the whole network; bit-exact across runs."""
    return {
        "node_count": len(net.nodes),
        "edge_count": len(net.edges),
        "self_references_dropped": net.self_refs_dropped,
        "duplicate_reference_edges": net.duplicate_ref_edges,
        "nodes": [
            {
                "id": node.node_id,
                "record_id": node.record.record_id,
                "year": node.record.pub_year,
                "authors": list(node.record.authors),
                "title": node.record.title,
                "source": node.record.source_title,
                "doc_type": node.record.doc_type,
                "volume": node.record.volume,
                "issue": node.record.issue,
                "begin_page": node.record.begin_page,
                "end_page": node.record.end_page,
                "gcs": node.gcs,
                "lcs": node.lcs,
                "cited_nodes": sorted(node.cited_nodes),
                "citing_nodes": sorted(node.citing_nodes),
            }
            for node in net.nodes
        ],
        "unresolved": [
            {"citing_node": citing_id, "raw": ref.raw, "key": ref_key(ref)}
            for citing_id, ref in net.unresolved
        ],
    }


def dump_network(net: CitationNetwork) -> str:
    return json.dumps(network_to_dict(net), indent=2, sort_keys=True) + "\n"
