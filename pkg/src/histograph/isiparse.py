"""Parsing of tagged plain-text bibliographic export files.

The dialect is the classic citation-index export: each record is a run of
lines carrying a two-character field tag at column 0, a space, and a value;
continuation lines start with whitespace and extend the previous tag; ``ER``
closes a record and ``EF`` closes the file.  Cited references come as single
comma-separated strings such as ``SMITH J, 1950, J EXP BIOL, V27, P123``.

Everything in this module is a pure function over its input, so parsing
several files concurrently is safe.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field

# Markers set on a parsed cited reference.
UNPUBLISHED = "UNPUBLISHED"
IN_PRESS = "IN_PRESS"
NO_PAGE = "NO_PAGE"
NO_VOLUME = "NO_VOLUME"
NO_YEAR = "NO_YEAR"

# Plausible publication years; 4-digit tokens outside this window are not
# treated as years (guards against volume/page numbers masquerading as years).
YEAR_MIN = 1500
YEAR_MAX = 2099

#: Tags whose continuation (or repeated) lines are separate values.
MULTI_TAGS = frozenset({"AU", "CR", "C1"})
#: Tags mapped onto record fields; anything else is kept in ``extras``.
KNOWN_TAGS = frozenset(
    {"AU", "TI", "SO", "DT", "PY", "VL", "IS", "BP", "EP", "C1", "TC", "CR", "UT"}
)

_TAG_RE = re.compile(r"^[A-Z][A-Z0-9]$")
_YEAR_RE = re.compile(r"^\d{4}$")
_VOLUME_RE = re.compile(r"^[Vv](\d+[A-Za-z]*)$")
_PAGE_RE = re.compile(r"^[Pp](\d+(?:-\d+)?[A-Za-z]*)$")
_NON_ALNUM_RE = re.compile(r"[^A-Z0-9]+")


class ExportSyntaxError(ValueError):
    """Structural problem in an export file, reported with its line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class BibRecord:
    """One source record of the corpus, as parsed from the export file."""

    record_id: str
    authors: list[str]
    title: str
    source_title: str
    doc_type: str
    pub_year: int
    volume: str | None = None
    issue: str | None = None
    begin_page: str | None = None
    end_page: str | None = None
    addresses: list[str] = field(default_factory=list)
    global_cites: int = 0
    cited_refs: list[str] = field(default_factory=list)
    extras: dict[str, list[str]] = field(default_factory=dict)


@dataclass(frozen=True)
class CitedRef:
    """A parsed cited-reference string.

    Parsing is total: any raw string yields a CitedRef, with ``NO_*`` flags
    marking components that could not be recovered.  ``author_key`` is the
    first author reduced to ``[A-Z0-9]``; the surname/initials split is kept
    so the canonical key can hyphenate them.
    """

    raw: str
    author_key: str
    surname: str
    initials: str
    year: int | None
    source_abbrev: str
    volume: str | None
    page: str | None
    flags: frozenset[str]


def normalize_author(name: str) -> str:
    """Uppercase a printed name and strip everything outside [A-Z0-9]."""
    return _NON_ALNUM_RE.sub("", name.upper())


def split_author(name: str) -> tuple[str, str]:
    """Split a printed author name into normalized (surname, initials).

    Works for both ``"BROWN FA"`` and ``"Brown, F.A."`` shapes.  In the
    space-separated shape, trailing short tokens (initials of up to three
    letters) are peeled off; at least one token always remains as surname.
    """
    s = " ".join(name.split())
    if "," in s:
        surname, _, initials = s.partition(",")
        return normalize_author(surname), normalize_author(initials)
    tokens = s.split(" ") if s else []
    initials_parts: list[str] = []
    while len(tokens) > 1:
        tail = normalize_author(tokens[-1])
        if 1 <= len(tail) <= 3:
            tokens.pop()
            initials_parts.insert(0, tail)
        else:
            break
    return normalize_author(" ".join(tokens)), "".join(initials_parts)


def parse_cited_ref(raw: str) -> CitedRef:
    """Parse one comma-separated cited-reference string.

    Never raises: unparseable components set the matching ``NO_*`` flag and
    the raw string is preserved.
    """
    segments = [seg.strip() for seg in raw.split(",")]
    segments = [seg for seg in segments if seg]
    if not segments:
        return CitedRef(
            raw=raw,
            author_key="",
            surname="",
            initials="",
            year=None,
            source_abbrev="",
            volume=None,
            page=None,
            flags=frozenset({NO_YEAR, NO_VOLUME, NO_PAGE}),
        )

    surname, initials = split_author(segments[0])
    year: int | None = None
    volume: str | None = None
    page: str | None = None
    source_parts: list[str] = []
    for seg in segments[1:]:
        if year is None and _YEAR_RE.match(seg) and YEAR_MIN <= int(seg) <= YEAR_MAX:
            year = int(seg)
            continue
        vol_match = _VOLUME_RE.match(seg)
        if vol_match and volume is None:
            volume = vol_match.group(1).upper()
            continue
        page_match = _PAGE_RE.match(seg)
        if page_match and page is None:
            page = page_match.group(1).upper()
            continue
        source_parts.append(" ".join(seg.upper().split()))
    source = ", ".join(source_parts)

    flags = set()
    if any(tok.startswith("UNPUB") for tok in re.split(r"[ ,]+", source) if tok):
        flags.add(UNPUBLISHED)
    if "IN PRESS" in source:
        flags.add(IN_PRESS)
    if year is None:
        flags.add(NO_YEAR)
    if volume is None:
        flags.add(NO_VOLUME)
    if page is None:
        flags.add(NO_PAGE)

    return CitedRef(
        raw=raw,
        author_key=surname + initials,
        surname=surname,
        initials=initials,
        year=year,
        source_abbrev=source,
        volume=volume,
        page=page,
        flags=frozenset(flags),
    )


def _key_component(value: str) -> str:
    # numeric volumes/pages lose leading zeros so V090 and V90 key equal,
    # matching the comparison rule used during resolution
    v = value.strip().upper()
    return str(int(v)) if v.isdigit() else v


def ref_key(ref: CitedRef) -> str:
    """Canonical hyphenated key, e.g. ``MILLER-MA-1946-V90-P122``.

    Absent components are simply omitted (``SPIEGELMAN-S-1945-V89`` for a
    reference with no page).
    """
    parts = [ref.surname] if ref.surname else []
    if ref.initials:
        parts.append(ref.initials)
    if ref.year is not None:
        parts.append(str(ref.year))
    if ref.volume:
        parts.append("V" + _key_component(ref.volume))
    if ref.page:
        parts.append("P" + _key_component(ref.page))
    return "-".join(parts)


def record_ref_key(record: BibRecord) -> str:
    """Canonical key of a source record, in the same format as ref_key()."""
    first = record.authors[0] if record.authors else ""
    surname, initials = split_author(first)
    parts = [surname] if surname else []
    if initials:
        parts.append(initials)
    parts.append(str(record.pub_year))
    if record.volume:
        parts.append("V" + _key_component(record.volume))
    if record.begin_page:
        parts.append("P" + _key_component(record.begin_page))
    return "-".join(parts)


def _warn_stderr(line_no: int, message: str) -> None:
    print(f"WARN {line_no}: {message}", file=sys.stderr)


def parse_export(text: str, on_warning=None) -> list[BibRecord]:
    """Parse a tagged export file into records, in file order.

    Records missing a usable PY year cannot be ordered and are dropped with
    a warning (``on_warning(line_no, message)``; defaults to a ``WARN`` line
    on stderr).  Unrecognized tags are kept in ``BibRecord.extras``.

    Raises ExportSyntaxError for structural damage: a continuation line
    before any tag, or EF / end of input while a record is still open.
    """
    warn = on_warning if on_warning is not None else _warn_stderr
    records: list[BibRecord] = []
    fields: dict[str, list[str]] = {}
    current_tag: str | None = None
    record_line = 0
    seq = 0
    line_no = 0

    for line_no, raw_line in enumerate(text.lstrip("﻿").splitlines(), start=1):
        line = raw_line.rstrip()
        if not line.strip():
            continue
        if line[0].isspace():
            if current_tag is None:
                raise ExportSyntaxError(line_no, "continuation line before any field tag")
            value = line.strip()
            if current_tag in MULTI_TAGS:
                fields[current_tag].append(value)
            else:
                prev = fields[current_tag][-1]
                fields[current_tag][-1] = f"{prev} {value}" if prev else value
            continue

        tag = line[:2]
        if not _TAG_RE.match(tag) or (line[2:] and not line[2:].startswith(" ")):
            raise ExportSyntaxError(line_no, f"unrecognized line structure: {line.strip()!r}")
        value = line[3:].strip()

        if tag == "ER":
            if fields:
                seq += 1
                record = _finalize_record(fields, record_line, seq, warn)
                if record is not None:
                    records.append(record)
            fields = {}
            current_tag = None
            continue
        if tag == "EF":
            if fields:
                raise ExportSyntaxError(line_no, "EF reached inside a record (missing ER)")
            current_tag = None
            break

        if not fields:
            record_line = line_no
        current_tag = tag
        fields.setdefault(tag, []).append(value)
    else:
        if fields:
            raise ExportSyntaxError(line_no, "input ended inside a record (missing ER)")

    return records


def _finalize_record(fields, first_line, seq, warn) -> BibRecord | None:
    def joined(tag: str) -> str:
        return " ".join(v for v in fields[tag] if v).strip() if tag in fields else ""

    py = joined("PY")
    year = None
    if _YEAR_RE.match(py) and YEAR_MIN <= int(py) <= YEAR_MAX:
        year = int(py)
    if year is None:
        detail = f" (PY {py!r})" if py else " (no PY field)"
        warn(first_line, f"record skipped: missing or unusable publication year{detail}")
        return None

    # Duplicate CR lines within one record are export noise: collapse them,
    # keeping first-occurrence order.
    seen: set[str] = set()
    cited: list[str] = []
    for raw in fields.get("CR", []):
        value = raw.strip()
        if value and value not in seen:
            seen.add(value)
            cited.append(value)

    tc = joined("TC")
    return BibRecord(
        record_id=joined("UT") or f"REC{seq}",
        authors=[a for a in (v.strip() for v in fields.get("AU", [])) if a],
        title=joined("TI"),
        source_title=joined("SO"),
        doc_type=joined("DT"),
        pub_year=year,
        volume=joined("VL") or None,
        issue=joined("IS") or None,
        begin_page=joined("BP") or None,
        end_page=joined("EP") or None,
        addresses=[a for a in (v.strip() for v in fields.get("C1", [])) if a],
        global_cites=int(tc) if tc.isdigit() else 0,
        cited_refs=cited,
        extras={tag: list(vals) for tag, vals in fields.items() if tag not in KNOWN_TAGS},
    )


def format_export(records) -> str:
    """Serialize records back to the tagged format (inverse of parse_export)."""
    lines: list[str] = []
    for rec in records:
        _emit_multi(lines, "AU", rec.authors)
        _emit_single(lines, "TI", rec.title)
        _emit_single(lines, "SO", rec.source_title)
        _emit_single(lines, "DT", rec.doc_type)
        _emit_single(lines, "PY", str(rec.pub_year))
        _emit_single(lines, "VL", rec.volume or "")
        _emit_single(lines, "IS", rec.issue or "")
        _emit_single(lines, "BP", rec.begin_page or "")
        _emit_single(lines, "EP", rec.end_page or "")
        _emit_multi(lines, "C1", rec.addresses)
        _emit_single(lines, "TC", str(rec.global_cites))
        _emit_multi(lines, "CR", rec.cited_refs)
        for tag in sorted(rec.extras):
            # Repeated tag lines, not continuations: survives a re-parse even
            # though unknown tags are treated as single-valued there.
            for value in rec.extras[tag]:
                lines.append(f"{tag} {value}" if value else tag + " ")
        _emit_single(lines, "UT", rec.record_id)
        lines.append("ER")
        lines.append("")
    lines.append("EF")
    return "\n".join(lines) + "\n"


def _emit_single(lines: list[str], tag: str, value: str) -> None:
    if value:
        lines.append(f"{tag} {value}")


def _emit_multi(lines: list[str], tag: str, values) -> None:
    for i, value in enumerate(values):
        lines.append(f"{tag} {value}" if i == 0 else f"   {value}")
