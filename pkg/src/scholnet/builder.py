"""Assemble the three-layer network from a record corpus.

Intra-layer weights:
  coauthor   symmetric; per shared paper 1/(authors-1), averaged over the pair's
             shared papers
  cites      1/(number of references of the citing paper), per reference
  cocites    symmetric Jaccard overlap of the two papers' citation-target sets
  jref       share of a journal's outgoing references that land in the target
             journal

Inter-layer weights mirror the same inversely-proportional-to-fan-out idea:
  wrote 1/papers-by-author, written_by 1/authors-of-paper, published_in 1.0,
  contains 1/papers-in-journal.

References that match no corpus record become stub paper nodes so that citation
fan-out denominators reflect the full bibliography. Journal self-references are
counted in denominators but never emitted as edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Edge, EdgeLabel, MultiGraph, NodeId, NodeKind
from .records import (
    JournalRef,
    PaperRecord,
    ReferenceIndex,
    Resolution,
    author_key,
    journal_key,
)

PAPER_LAYER_MODES = ("citation", "cocitation", "both")


class BuildError(Exception):
    pass


@dataclass(frozen=True)
class BuildConfig:
    paper_layer_mode: str = "citation"
    include_stub_papers_as_nodes: bool = True
    min_cocite_weight: float = 0.0

    def __post_init__(self) -> None:
        if self.paper_layer_mode not in PAPER_LAYER_MODES:
            raise ValueError(
                f"paper_layer_mode must be one of {PAPER_LAYER_MODES}, "
                f"got {self.paper_layer_mode!r}"
            )
        if self.min_cocite_weight < 0:
            raise ValueError("min_cocite_weight must be >= 0")


@dataclass(frozen=True)
class CitationTarget:
    """One bibliography entry of a corpus paper, after resolution."""

    key: str
    resolved: bool
    venue: str | None
    venue_display: str


@dataclass
class CorpusIndex:
    """Derived lookup tables shared by the edge builders."""

    paper_ids: list[str] = field(default_factory=list)
    paper_title: dict[str, str] = field(default_factory=dict)
    paper_authors: dict[str, list[str]] = field(default_factory=dict)
    author_papers: dict[str, list[str]] = field(default_factory=dict)
    author_display: dict[str, str] = field(default_factory=dict)
    paper_journal: dict[str, str | None] = field(default_factory=dict)
    journal_papers: dict[str, list[str]] = field(default_factory=dict)
    journal_display: dict[str, str] = field(default_factory=dict)
    paper_citations: dict[str, list[CitationTarget]] = field(default_factory=dict)
    stub_display: dict[str, str] = field(default_factory=dict)

    @classmethod
    def build(cls, records: list[PaperRecord]) -> "CorpusIndex":
        index = cls()
        ref_index = ReferenceIndex(records)
        by_id = {rec.record_id: rec for rec in records}

        for rec in records:
            pid = rec.record_id
            index.paper_ids.append(pid)
            index.paper_title[pid] = rec.title

            akeys: list[str] = []
            for name in rec.authors:
                akey = author_key(name)
                if akey not in akeys:  # duplicate listings collapse to one author
                    akeys.append(akey)
                index.author_display.setdefault(akey, name.raw)
            index.paper_authors[pid] = akeys
            for akey in akeys:
                index.author_papers.setdefault(akey, []).append(pid)

            jkey: str | None = None
            if rec.journal is not None:
                jkey = journal_key(rec.journal)
                index.journal_papers.setdefault(jkey, []).append(pid)
                index.journal_display.setdefault(
                    jkey,
                    rec.journal.full_title
                    or rec.journal.short_title
                    or rec.journal.issn
                    or "",
                )
            index.paper_journal[pid] = jkey

        for rec in records:
            targets: list[CitationTarget] = []
            for ref in rec.references:
                res: Resolution = ref_index.lookup(ref)
                if res.resolved:
                    target_journal = by_id[res.key].journal
                    venue = (
                        journal_key(target_journal)
                        if target_journal is not None
                        else None
                    )
                    venue_display = index.journal_display.get(venue, "") if venue else ""
                else:
                    if ref.source_short_title:
                        venue = journal_key(
                            JournalRef(short_title=ref.source_short_title)
                        )
                        venue_display = ref.source_short_title
                    else:
                        venue = None
                        venue_display = ""
                    index.stub_display.setdefault(res.key, _stub_display(ref))
                targets.append(
                    CitationTarget(
                        key=res.key,
                        resolved=res.resolved,
                        venue=venue,
                        venue_display=venue_display,
                    )
                )
            index.paper_citations[rec.record_id] = targets

        return index


def _stub_display(ref) -> str:
    parts = []
    if ref.first_author:
        parts.append(ref.first_author)
    if ref.year is not None:
        parts.append(f"({ref.year})")
    if ref.source_short_title:
        parts.append(ref.source_short_title)
    if ref.start_page:
        parts.append(f"p.{ref.start_page}")
    return " ".join(parts)


# -- intra-layer builders --------------------------------------------------------


def build_coauthorship(index: CorpusIndex) -> list[Edge]:
    """Symmetric coauthor edges averaged over the pair's shared papers."""
    shared: dict[tuple[str, str], list[str]] = {}
    for pid in index.paper_ids:
        akeys = index.paper_authors[pid]
        for i in range(len(akeys)):
            for j in range(i + 1, len(akeys)):
                pair = tuple(sorted((akeys[i], akeys[j])))
                shared.setdefault(pair, []).append(pid)

    edges: list[Edge] = []
    for (a, b), papers in shared.items():
        # Sum in sorted-paper-id order so the value is reproducible.
        total = 0.0
        for pid in sorted(papers):
            total += 1.0 / (len(index.paper_authors[pid]) - 1)
        w = total / len(papers)
        na, nb = NodeId(NodeKind.AUTHOR, a), NodeId(NodeKind.AUTHOR, b)
        edges.append(Edge(na, nb, EdgeLabel.COAUTHOR, w))
        edges.append(Edge(nb, na, EdgeLabel.COAUTHOR, w))
    return edges


def build_citation(index: CorpusIndex) -> list[Edge]:
    """Directed cites edges, weight multiplicity/|references|."""
    edges: list[Edge] = []
    for pid in index.paper_ids:
        targets = index.paper_citations[pid]
        if not targets:
            continue
        n_refs = len(targets)
        counts: dict[str, int] = {}
        for t in targets:
            counts[t.key] = counts.get(t.key, 0) + 1
        for key, count in counts.items():
            if key == pid:  # self-citation: no self-loop edge
                continue
            edges.append(
                Edge(
                    NodeId(NodeKind.PAPER, pid),
                    NodeId(NodeKind.PAPER, key),
                    EdgeLabel.CITES,
                    count / n_refs,
                )
            )
    return edges


def build_cocitation(index: CorpusIndex, min_w: float = 0.0) -> list[Edge]:
    """Symmetric cocites edges over shared citation targets (Jaccard)."""
    cite_sets = {
        pid: {t.key for t in index.paper_citations[pid]} for pid in index.paper_ids
    }
    edges: list[Edge] = []
    ids = index.paper_ids
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            a, b = ids[i], ids[j]
            s = len(cite_sets[a] & cite_sets[b])
            if s == 0:
                continue
            w = s / (len(cite_sets[a]) + len(cite_sets[b]) - s)
            if w < min_w:
                continue
            na, nb = NodeId(NodeKind.PAPER, a), NodeId(NodeKind.PAPER, b)
            edges.append(Edge(na, nb, EdgeLabel.COCITES, w))
            edges.append(Edge(nb, na, EdgeLabel.COCITES, w))
    return edges


def build_journal_reference(index: CorpusIndex) -> list[Edge]:
    """jref edges: fraction of a journal's outgoing references per target venue.

    The denominator counts every reference made by the journal's papers,
    including references whose target venue is unknown and references back to
    the journal itself; the latter produce no edge.
    """
    totals: dict[str, int] = {}
    to_venue: dict[tuple[str, str], int] = {}
    for jkey, papers in index.journal_papers.items():
        for pid in papers:
            for t in index.paper_citations[pid]:
                totals[jkey] = totals.get(jkey, 0) + 1
                if t.venue is not None:
                    to_venue[(jkey, t.venue)] = to_venue.get((jkey, t.venue), 0) + 1

    edges: list[Edge] = []
    for (src, dst), count in to_venue.items():
        if src == dst:
            continue
        edges.append(
            Edge(
                NodeId(NodeKind.JOURNAL, src),
                NodeId(NodeKind.JOURNAL, dst),
                EdgeLabel.JREF,
                count / totals[src],
            )
        )
    return edges


# -- inter-layer builders ----------------------------------------------------------


def build_interlayer(index: CorpusIndex) -> list[Edge]:
    edges: list[Edge] = []
    for akey, papers in index.author_papers.items():
        na = NodeId(NodeKind.AUTHOR, akey)
        w = 1.0 / len(papers)
        for pid in papers:
            edges.append(Edge(na, NodeId(NodeKind.PAPER, pid), EdgeLabel.WROTE, w))
    for pid in index.paper_ids:
        akeys = index.paper_authors[pid]
        if akeys:
            np_ = NodeId(NodeKind.PAPER, pid)
            w = 1.0 / len(akeys)
            for akey in akeys:
                edges.append(
                    Edge(np_, NodeId(NodeKind.AUTHOR, akey), EdgeLabel.WRITTEN_BY, w)
                )
    for pid in index.paper_ids:
        jkey = index.paper_journal[pid]
        if jkey is not None:
            edges.append(
                Edge(
                    NodeId(NodeKind.PAPER, pid),
                    NodeId(NodeKind.JOURNAL, jkey),
                    EdgeLabel.PUBLISHED_IN,
                    1.0,
                )
            )
    for jkey, papers in index.journal_papers.items():
        nj = NodeId(NodeKind.JOURNAL, jkey)
        w = 1.0 / len(papers)
        for pid in papers:
            edges.append(Edge(nj, NodeId(NodeKind.PAPER, pid), EdgeLabel.CONTAINS, w))
    return edges


# -- assembly ----------------------------------------------------------------------


def assemble(records: list[PaperRecord], cfg: BuildConfig | None = None) -> MultiGraph:
    """Build the full graph for a corpus.

    Raises BuildError on duplicate record ids. Stub paper nodes (unresolved
    references) are included unless configured off; dropping them drops their
    incident edges but leaves all other weights untouched.
    """
    cfg = cfg or BuildConfig()
    seen: set[str] = set()
    for rec in records:
        if rec.record_id in seen:
            raise BuildError(f"duplicate record id {rec.record_id!r}")
        seen.add(rec.record_id)

    index = CorpusIndex.build(records)
    g = MultiGraph()

    for akey, display in index.author_display.items():
        g.upsert_node(NodeId(NodeKind.AUTHOR, akey), display)
    for pid in index.paper_ids:
        g.upsert_node(NodeId(NodeKind.PAPER, pid), index.paper_title[pid])
    for jkey, display in index.journal_display.items():
        g.upsert_node(NodeId(NodeKind.JOURNAL, jkey), display)

    if cfg.include_stub_papers_as_nodes:
        for key, display in index.stub_display.items():
            g.upsert_node(NodeId(NodeKind.PAPER, key), display)

    # Venues known only from reference source titles still join the journal layer.
    for pid in index.paper_ids:
        for t in index.paper_citations[pid]:
            if t.venue is not None:
                node = NodeId(NodeKind.JOURNAL, t.venue)
                if not g.has_node(node):
                    g.upsert_node(node, t.venue_display)

    edges: list[Edge] = []
    edges.extend(build_coauthorship(index))
    if cfg.paper_layer_mode in ("citation", "both"):
        edges.extend(build_citation(index))
    if cfg.paper_layer_mode in ("cocitation", "both"):
        edges.extend(build_cocitation(index, cfg.min_cocite_weight))
    edges.extend(build_journal_reference(index))
    edges.extend(build_interlayer(index))

    for e in edges:
        if not g.has_node(e.src) or not g.has_node(e.dst):
            continue  # edge to a stub excluded by configuration
        g.upsert_edge(e)
    return g


def corpus_stats(index: CorpusIndex) -> dict[str, int]:
    stubs = len(index.stub_display)
    return {
        "papers": len(index.paper_ids),
        "authors": len(index.author_papers),
        "journals": len(index.journal_papers),
        "references": sum(len(v) for v in index.paper_citations.values()),
        "unresolved_references": stubs,
    }
