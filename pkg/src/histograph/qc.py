"""Collection auditing: outer references (cited works outside the corpus)
and missing links (unresolved references that tolerantly match a node)."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from .isiparse import IN_PRESS, UNPUBLISHED, CitedRef, normalize_author, record_ref_key, ref_key
from .network import CitationNetwork, _norm_numstr

# Diagnoses attached to a missing link.
PAGE_OFF_BY_ONE = "PAGE_OFF_BY_ONE"
PAGE_ABSENT = "PAGE_ABSENT"
VOLUME_ONLY = "VOLUME_ONLY"
HYPHENATION_VARIANT = "HYPHENATION_VARIANT"
UNPUBLISHED_FORM = "UNPUBLISHED_FORM"
SOURCE_VARIANT = "SOURCE_VARIANT"

MAX_CANDIDATES_PER_REF = 5

_TOKEN_RE = re.compile(r"[A-Z0-9]+")


@dataclass
class OuterRef:
    key: str                 # canonical reference key
    display: str             # reconstructed "AUTHOR II, YEAR, SOURCE, Vv, Pp"
    local_cites: int         # distinct citing nodes
    citing_nodes: list[int]
    in_corpus_source: bool   # cited source looks like the corpus journal itself


@dataclass
class OuterRefReport:
    entries: list[OuterRef]     # top N by local cites
    total_groups: int           # distinct reference keys
    total_occurrences: int      # (citing node, key) incidences


def _journal_tokens(title: str) -> tuple[str, ...]:
    tokens = _TOKEN_RE.findall(title.upper())
    tokens = [t for t in tokens if t not in ("UNPUB", "UNPUBLISHED", "PRESS")]
    if tokens and tokens[0] == "THE":
        tokens = tokens[1:]
    return tuple(tokens)


def _abbreviates(abbrev: tuple[str, ...], full: tuple[str, ...]) -> bool:
    return (
        len(abbrev) == len(full)
        and len(abbrev) > 0
        and all(f.startswith(a) for a, f in zip(abbrev, full))
    )


def _corpus_journals(net: CitationNetwork) -> set[tuple[str, ...]]:
    return {
        _journal_tokens(node.record.source_title)
        for node in net.nodes
        if node.record.source_title
    }


def _ref_display(ref: CitedRef, source: str) -> str:
    author = ref.surname + (" " + ref.initials if ref.initials else "")
    parts = [p for p in (author,) if p]
    if ref.year is not None:
        parts.append(str(ref.year))
    if source:
        parts.append(source)
    if ref.volume:
        parts.append("V" + ref.volume)
    if ref.page:
        parts.append("P" + ref.page)
    return ", ".join(parts)


def outer_references(net: CitationNetwork, top_n: int = 300) -> OuterRefReport:
    """Rank the unresolved references by how many distinct nodes cite them.

    References are grouped by canonical key; the display string is rebuilt
    from the parsed reference (most frequent source variant wins) so that
    spelling noise in the raw strings does not split groups.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    groups: dict[str, dict] = {}
    for citing_id, ref in net.unresolved:
        key = ref_key(ref)
        group = groups.setdefault(key, {"citing": set(), "sources": Counter(), "ref": ref})
        group["citing"].add(citing_id)
        if ref.source_abbrev:
            group["sources"][ref.source_abbrev] += 1

    journals = _corpus_journals(net)
    entries = []
    for key, group in groups.items():
        sources = group["sources"]
        source = min(sources, key=lambda s: (-sources[s], s)) if sources else ""
        entries.append(
            OuterRef(
                key=key,
                display=_ref_display(group["ref"], source),
                local_cites=len(group["citing"]),
                citing_nodes=sorted(group["citing"]),
                in_corpus_source=any(_abbreviates(_journal_tokens(source), j) for j in journals),
            )
        )
    entries.sort(key=lambda e: (-e.local_cites, e.key))
    return OuterRefReport(
        entries=entries[:top_n],
        total_groups=len(entries),
        total_occurrences=sum(e.local_cites for e in entries),
    )


@dataclass
class MissingLink:
    """An unresolved reference that plausibly points at a corpus node."""

    cited_ref: CitedRef
    citing_node: int
    candidate_node: int
    reasons: frozenset[str]
    candidate_key: str


def render_missing_link(link: MissingLink) -> str:
    return f"{link.cited_ref.raw} may refer to [{link.candidate_node}] {link.candidate_key}"


def _collapse(text: str) -> str:
    return " ".join(text.upper().split())


def missing_links(net: CitationNetwork) -> list[MissingLink]:
    """Tolerant second pass over the unresolved pool.

    Hard gate: candidate and reference agree on author key and year.  Within
    the gate a link is emitted when pagination is off by one, the page is
    absent with the volume agreeing, only the volume is comparable, or an
    unpublished/in-press form hides the page; raw-author hyphenation and
    source-spelling differences are attached as extra diagnoses.  Nothing is
    merged into the edge set: these are candidates for a human to adjudicate.
    """
    by_author_year: dict[tuple[str, int], list[int]] = {}
    for node in net.nodes:
        first = node.record.authors[0] if node.record.authors else ""
        key = (normalize_author(first), node.record.pub_year)
        by_author_year.setdefault(key, []).append(node.node_id)

    links: list[MissingLink] = []
    for citing_id, ref in net.unresolved:
        if not ref.author_key or ref.year is None:
            continue
        candidates = by_author_year.get((ref.author_key, ref.year))
        if not candidates:
            continue
        hits = 0
        for node_id in sorted(candidates):
            if hits >= MAX_CANDIDATES_PER_REF:
                break
            node = net.node(node_id)
            rec = node.record
            ref_vol = _norm_numstr(ref.volume)
            ref_page = _norm_numstr(ref.page)
            node_vol = _norm_numstr(rec.volume)
            node_page = _norm_numstr(rec.begin_page)
            vol_eq = ref_vol is not None and node_vol is not None and ref_vol == node_vol
            page_eq = ref_page is not None and node_page is not None and ref_page == node_page

            reasons = set()
            if (
                vol_eq
                and ref_page is not None
                and node_page is not None
                and ref_page.isdigit()
                and node_page.isdigit()
                and abs(int(ref_page) - int(node_page)) == 1
            ):
                reasons.add(PAGE_OFF_BY_ONE)
            if ref.page is None and vol_eq:
                reasons.add(PAGE_ABSENT)
            if page_eq and (ref_vol is None) != (node_vol is None):
                reasons.add(VOLUME_ONLY)
            if (UNPUBLISHED in ref.flags or IN_PRESS in ref.flags) and vol_eq:
                reasons.add(UNPUBLISHED_FORM)

            comparable_equal = (
                ref_vol is None or node_vol is None or ref_vol == node_vol
            ) and (ref_page is None or node_page is None or ref_page == node_page)
            some_field_absent = None in (ref_vol, node_vol, ref_page, node_page)
            node_source = _collapse(rec.source_title)
            if (
                reasons
                and comparable_equal
                and some_field_absent
                and _collapse(ref.source_abbrev) != node_source
            ):
                reasons.add(SOURCE_VARIANT)

            if reasons:
                # Companion diagnosis: keys agree but the printed author
                # forms differ (hyphenation/spacing noise in the quote).
                raw_author = _collapse(ref.raw.split(",")[0])
                node_author = _collapse(rec.authors[0]) if rec.authors else ""
                if raw_author != node_author:
                    reasons.add(HYPHENATION_VARIANT)
                links.append(
                    MissingLink(
                        cited_ref=ref,
                        citing_node=citing_id,
                        candidate_node=node_id,
                        reasons=frozenset(reasons),
                        candidate_key=record_ref_key(rec),
                    )
                )
                hits += 1

    links.sort(key=lambda l: (l.citing_node, l.cited_ref.raw, l.candidate_node))
    return links


def flagged_node_count(links) -> int:
    """How many distinct citing nodes carry at least one missing link."""
    return len({link.citing_node for link in links})
