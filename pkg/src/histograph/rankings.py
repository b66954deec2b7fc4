"""Ranked-author table and frequency analyses over a built network."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from .isiparse import normalize_author
from .network import CitationNetwork
from .stopwords import DEFAULT_STOPWORDS

AUTHOR_SORT_KEYS = ("pubs", "tlcs", "tgcs", "name")
FREQUENCY_FIELDS = ("year", "doc_type", "country", "institution", "word")
UNKNOWN_KEY = "UNKNOWN"

_BRACKET_PREFIX_RE = re.compile(r"^\[[^\]]*\]\s*")
_WORD_RE = re.compile(r"[a-z0-9]+")


@dataclass
class AuthorRow:
    name: str          # most frequent printed form
    tgcs: int
    tlcs: int
    pubs: int
    node_ids: list[int]


def rank_authors(net: CitationNetwork, sort: str = "pubs") -> list[AuthorRow]:
    """All-author ranking: every author position on every node counts.

    TLCS/TGCS are plain sums of the author's node scores, pubs the node
    count.  Numeric sorts are descending with name-ascending tie-break;
    sort="name" is plain alphabetical.
    """
    if sort not in AUTHOR_SORT_KEYS:
        raise ValueError(f"sort must be one of {AUTHOR_SORT_KEYS}, got {sort!r}")

    stats: dict[str, dict] = {}
    for node in net.nodes:
        seen_on_node: set[str] = set()
        for printed in node.record.authors:
            key = normalize_author(printed)
            if not key or key in seen_on_node:
                continue
            seen_on_node.add(key)
            st = stats.setdefault(key, {"forms": Counter(), "order": [], "nodes": [], "tgcs": 0, "tlcs": 0})
            form = " ".join(printed.split())
            if form not in st["forms"]:
                st["order"].append(form)
            st["forms"][form] += 1
            st["nodes"].append(node.node_id)
            st["tgcs"] += node.gcs
            st["tlcs"] += node.lcs

    rows = []
    for st in stats.values():
        best = max(st["forms"].items(), key=lambda kv: (kv[1], -st["order"].index(kv[0])))
        rows.append(
            AuthorRow(
                name=best[0],
                tgcs=st["tgcs"],
                tlcs=st["tlcs"],
                pubs=len(st["nodes"]),
                node_ids=st["nodes"],
            )
        )

    if sort == "name":
        rows.sort(key=lambda r: (r.name.casefold(), r.name))
    else:
        rows.sort(key=lambda r: (-getattr(r, sort), r.name.casefold(), r.name))
    return rows


@dataclass
class FrequencyRow:
    key: str
    count: int
    share: float    # fraction of records


def _address_parts(line: str) -> tuple[str | None, str | None]:
    """Heuristic (institution, country) from one address line."""
    line = _BRACKET_PREFIX_RE.sub("", line).strip().rstrip(".")
    segments = [seg.strip() for seg in line.split(",") if seg.strip()]
    if not segments:
        return None, None
    institution = " ".join(segments[0].upper().split())
    country = " ".join(segments[-1].upper().split())
    # US lines end in "<STATE> <ZIP> USA"
    if country.split() and country.split()[-1] == "USA":
        country = "USA"
    return institution, country


def title_words(title: str, stopwords=DEFAULT_STOPWORDS) -> set[str]:
    return {
        tok
        for tok in _WORD_RE.findall(title.lower())
        if len(tok) >= 2 and not tok.isdigit() and tok not in stopwords
    }


def frequency_table(net: CitationNetwork, field: str, stopwords=None) -> list[FrequencyRow]:
    """Counts per key for one field, descending; share = count / record count.

    country/institution attribute a record once per distinct value in its
    address lines; records with no usable addresses count under UNKNOWN, so
    that row's share is the coverage gap.
    """
    if field not in FREQUENCY_FIELDS:
        raise ValueError(f"field must be one of {FREQUENCY_FIELDS}, got {field!r}")
    if stopwords is None:
        stopwords = DEFAULT_STOPWORDS

    n = len(net.nodes)
    if n == 0:
        return []
    counts: Counter = Counter()
    for node in net.nodes:
        rec = node.record
        if field == "year":
            counts[str(rec.pub_year)] += 1
        elif field == "doc_type":
            counts[" ".join(rec.doc_type.split()) or UNKNOWN_KEY] += 1
        elif field in ("country", "institution"):
            values = set()
            for line in rec.addresses:
                institution, country = _address_parts(line)
                value = institution if field == "institution" else country
                if value:
                    values.add(value)
            if not values:
                counts[UNKNOWN_KEY] += 1
            else:
                for value in values:
                    counts[value] += 1
        else:  # word
            for tok in title_words(rec.title, stopwords):
                counts[tok] += 1

    rows = [FrequencyRow(key=k, count=c, share=c / n) for k, c in counts.items()]
    rows.sort(key=lambda r: (-r.count, r.key))
    return rows


def table_to_csv(rows, columns) -> str:
    """Small CSV writer shared by the report surfaces (LF endings, one header)."""
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([c[0] for c in columns])
    for row in rows:
        writer.writerow([c[1](row) for c in columns])
    return buf.getvalue()
