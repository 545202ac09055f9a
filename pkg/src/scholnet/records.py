"""Bibliographic record model, XML on-ramp, identity keys, and corpus I/O.

The canonical interchange format is line-delimited JSON (one record per line);
XML records in the repository export shape are parsed into the same model.
Identity resolution is deliberately coarse: authors are keyed by surname plus
first initial, journals by ISSN or uppercased title, because that is all the
reference strings in repository metadata reliably carry.
"""

from __future__ import annotations

import json
import unicodedata
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator


class RecordError(Exception):
    pass


class RecordParseError(RecordError):
    """Malformed XML. Carries the approximate byte offset of the failure."""

    def __init__(self, message: str, byte_offset: int):
        self.byte_offset = byte_offset
        super().__init__(f"{message} (byte offset {byte_offset})")


class RecordStructureError(RecordError):
    """Well-formed XML that is not a record/metadata document."""


class RejectedRecordError(RecordError):
    """Record lacks an identifier; the caller may skip it."""


class CorpusFormatError(RecordError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


@dataclass(frozen=True)
class AuthorName:
    surname: str
    initials: str
    raw: str


@dataclass(frozen=True)
class JournalRef:
    issn: str | None = None
    full_title: str | None = None
    short_title: str | None = None
    # Provenance only; the normalized corpus format does not carry it.
    raw: str = field(default="", compare=False)


@dataclass(frozen=True)
class RawReference:
    source_short_title: str | None = None
    first_author: str | None = None
    year: int | None = None
    start_page: str | None = None


@dataclass
class PaperRecord:
    record_id: str
    title: str = ""
    authors: list[AuthorName] = field(default_factory=list)
    journal: JournalRef | None = None
    year: int | None = None
    references: list[RawReference] = field(default_factory=list)
    stub: bool = False


# -- identity keys -------------------------------------------------------------


def _strip_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def parse_author_name(raw: str) -> AuthorName:
    """Split a 'Surname, Given' string; initials are the given names' first letters."""
    raw = raw.strip()
    surname, sep, given = raw.partition(",")
    if not sep:
        return AuthorName(surname=raw, initials="", raw=raw)
    initials = "".join(
        tok[0].upper() for tok in given.replace(".", " ").split() if tok[0].isalpha()
    )
    return AuthorName(surname=surname.strip(), initials=initials, raw=raw)


def author_key(name: AuthorName) -> str:
    """Uppercased diacritic-free surname plus first initial: 'HEYLIGHEN,F'."""
    if not name.surname:
        raise ValueError("author surname must be non-empty")
    surname = _strip_diacritics(name.surname).upper().strip()
    initial = name.initials[0].upper() if name.initials else ""
    return f"{surname},{initial}"


def journal_key(j: JournalRef) -> str:
    """ISSN when known, otherwise uppercased short title, otherwise full title."""
    if j.issn:
        return j.issn
    if j.short_title:
        return _strip_diacritics(j.short_title).upper().strip()
    if j.full_title:
        return _strip_diacritics(j.full_title).upper().strip()
    raise ValueError("journal reference carries no issn or title")


def reference_stub_key(ref: RawReference) -> str:
    """Deterministic paper key for a reference that resolves to nothing."""
    author_part = ""
    if ref.first_author:
        author_part = author_key(parse_author_name(ref.first_author))
    stitle = _strip_diacritics(ref.source_short_title).upper().strip() if ref.source_short_title else ""
    year = str(ref.year) if ref.year is not None else ""
    spage = ref.start_page or ""
    return f"ref:{author_part}|{year}|{stitle}|{spage}"


# -- XML parsing ---------------------------------------------------------------


def _local(tag: str) -> str:
    """Tag name with any namespace wrapper dropped."""
    return tag.rsplit("}", 1)[-1]


def _byte_offset(data: bytes, line: int, column: int) -> int:
    lines = data.split(b"\n")
    prefix = sum(len(l) + 1 for l in lines[: line - 1])
    return prefix + column


def _find_descendant(elem: ET.Element, name: str) -> ET.Element | None:
    for child in elem.iter():
        if _local(child.tag) == name:
            return child
    return None


def _collect_outside_references(elem: ET.Element, name: str) -> list[ET.Element]:
    """Descendants with the given local name that are not inside a <reference>."""
    found: list[ET.Element] = []

    def walk(node: ET.Element) -> None:
        for child in node:
            tag = _local(child.tag)
            if tag == "reference":
                continue
            if tag == name:
                found.append(child)
            walk(child)

    if _local(elem.tag) == name:
        found.append(elem)
    walk(elem)
    return found


def _text(elem: ET.Element | None) -> str:
    if elem is None or elem.text is None:
        return ""
    return elem.text.strip()


def _int_or_none(text: str) -> int | None:
    try:
        return int(text)
    except ValueError:
        return None


def parse_record(document: str | bytes) -> PaperRecord:
    """Parse one repository metadata record into a PaperRecord.

    Namespaced wrappers around the citation block are ignored; unknown tags
    are skipped. Raises RecordParseError (malformed XML), RecordStructureError
    (no record/metadata element), or RejectedRecordError (no identifier).
    """
    data = document.encode("utf-8") if isinstance(document, str) else document
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, column = exc.position
        raise RecordParseError(str(exc), _byte_offset(data, line, column)) from None

    record = root if _local(root.tag) == "record" else _find_descendant(root, "record")
    if record is None:
        raise RecordStructureError("document contains no <record> element")
    metadata = _find_descendant(record, "metadata")
    if metadata is None:
        raise RecordStructureError("<record> contains no <metadata> element")

    header = _find_descendant(record, "header")
    record_id = ""
    if header is not None:
        record_id = _text(_find_descendant(header, "identifier"))
    if not record_id:
        raise RejectedRecordError("record carries no identifier")

    container = _find_descendant(metadata, "citation") or metadata

    title = _text(next(iter(_collect_outside_references(container, "title")), None))

    authors = [
        parse_author_name(_text(au))
        for au in _collect_outside_references(container, "au")
        if _text(au)
    ]

    journal: JournalRef | None = None
    journal_elem = next(iter(_collect_outside_references(container, "journal")), None)
    if journal_elem is not None:
        issn = _text(_find_descendant(journal_elem, "issn")) or None
        full_title = _text(_find_descendant(journal_elem, "jtitle")) or None
        short_title = _text(_find_descendant(journal_elem, "stitle")) or None
        if issn or full_title or short_title:
            journal = JournalRef(
                issn=issn,
                full_title=full_title,
                short_title=short_title,
                raw="".join(journal_elem.itertext()).strip(),
            )

    year: int | None = None
    for year_elem in _collect_outside_references(container, "year"):
        year = _int_or_none(_text(year_elem))
        if year is not None:
            break

    # Reference blocks sit beside the citation block in the export shape,
    # so they are collected from the whole metadata subtree.
    references: list[RawReference] = []
    for ref_elem in metadata.iter():
        if _local(ref_elem.tag) != "reference":
            continue
        source = _find_descendant(ref_elem, "source") or ref_elem
        ref = RawReference(
            source_short_title=_text(_find_descendant(source, "stitle")) or None,
            first_author=_text(_find_descendant(source, "author")) or None,
            year=_int_or_none(_text(_find_descendant(source, "year"))),
            start_page=_text(_find_descendant(source, "spage")) or None,
        )
        if (
            ref.source_short_title
            or ref.first_author
            or ref.year is not None
            or ref.start_page
        ):
            references.append(ref)

    return PaperRecord(
        record_id=record_id,
        title=title,
        authors=authors,
        journal=journal,
        year=year,
        references=references,
    )


# -- corpus JSONL ----------------------------------------------------------------


def record_to_json(rec: PaperRecord) -> dict:
    return {
        "id": rec.record_id,
        "title": rec.title,
        "authors": [
            {"surname": a.surname, "initials": a.initials, "raw": a.raw}
            for a in rec.authors
        ],
        "journal": (
            {
                "issn": rec.journal.issn,
                "full_title": rec.journal.full_title,
                "short_title": rec.journal.short_title,
            }
            if rec.journal is not None
            else None
        ),
        "year": rec.year,
        "references": [
            {
                "stitle": r.source_short_title,
                "author": r.first_author,
                "year": r.year,
                "spage": r.start_page,
            }
            for r in rec.references
        ],
        "stub": rec.stub,
    }


def record_from_json(obj: dict) -> PaperRecord:
    journal = None
    if obj.get("journal") is not None:
        j = obj["journal"]
        journal = JournalRef(
            issn=j.get("issn"),
            full_title=j.get("full_title"),
            short_title=j.get("short_title"),
            raw=j.get("short_title") or j.get("full_title") or j.get("issn") or "",
        )
    return PaperRecord(
        record_id=obj["id"],
        title=obj.get("title", ""),
        authors=[
            AuthorName(a["surname"], a.get("initials", ""), a.get("raw", a["surname"]))
            for a in obj.get("authors", [])
        ],
        journal=journal,
        year=obj.get("year"),
        references=[
            RawReference(
                source_short_title=r.get("stitle"),
                first_author=r.get("author"),
                year=r.get("year"),
                start_page=r.get("spage"),
            )
            for r in obj.get("references", [])
        ],
        stub=bool(obj.get("stub", False)),
    )


def write_corpus(records: Iterable[PaperRecord], fp: IO[str]) -> None:
    for rec in records:
        fp.write(json.dumps(record_to_json(rec), ensure_ascii=False))
        fp.write("\n")


def read_corpus(fp: IO[str]) -> list[PaperRecord]:
    records = []
    for line_no, line in enumerate(fp, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(line_no, f"bad JSON: {exc}") from None
        if "id" not in obj or not obj["id"]:
            raise CorpusFormatError(line_no, "record without id")
        records.append(record_from_json(obj))
    return records


# -- reference resolution --------------------------------------------------------


@dataclass(frozen=True)
class Resolution:
    """Outcome of matching a reference against the corpus.

    resolved is the record id of the unique match; when there is no unique
    match, key is a deterministic stub identifier derived from the reference.
    """

    key: str
    resolved: bool


class ReferenceIndex:
    """Corpus lookup keyed by (first-author key, year, start page) and
    (first-author key, year, source short title).

    The normalized corpus format carries no record-level start page, so the
    page arm is only populated when the caller supplies a record_id -> page
    mapping from a richer source.
    """

    def __init__(
        self,
        records: Iterable[PaperRecord],
        start_pages: dict[str, str] | None = None,
    ):
        self._by_page: dict[tuple[str, int, str], list[str]] = {}
        self._by_source: dict[tuple[str, int, str], list[str]] = {}
        start_pages = start_pages or {}
        for rec in records:
            if not rec.authors or rec.year is None:
                continue
            first = author_key(rec.authors[0])
            if rec.journal is not None and rec.journal.short_title:
                stitle = _strip_diacritics(rec.journal.short_title).upper().strip()
                self._by_source.setdefault((first, rec.year, stitle), []).append(
                    rec.record_id
                )
            spage = start_pages.get(rec.record_id)
            if spage:
                self._by_page.setdefault((first, rec.year, spage), []).append(
                    rec.record_id
                )

    def lookup(self, ref: RawReference) -> Resolution:
        if ref.first_author and ref.year is not None:
            first = author_key(parse_author_name(ref.first_author))
            if ref.start_page:
                hits = self._by_page.get((first, ref.year, ref.start_page), [])
                if len(hits) == 1:
                    return Resolution(key=hits[0], resolved=True)
                if len(hits) > 1:
                    return Resolution(key=reference_stub_key(ref), resolved=False)
            if ref.source_short_title:
                stitle = _strip_diacritics(ref.source_short_title).upper().strip()
                hits = self._by_source.get((first, ref.year, stitle), [])
                if len(hits) == 1:
                    return Resolution(key=hits[0], resolved=True)
                if len(hits) > 1:
                    return Resolution(key=reference_stub_key(ref), resolved=False)
        return Resolution(key=reference_stub_key(ref), resolved=False)


def resolve_reference(ref: RawReference, index: ReferenceIndex) -> Resolution:
    return index.lookup(ref)


def iter_corpus_duplicates(records: Iterable[PaperRecord]) -> Iterator[str]:
    seen = set()
    for rec in records:
        if rec.record_id in seen:
            yield rec.record_id
        seen.add(rec.record_id)
