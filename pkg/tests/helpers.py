"""Shared test machinery: random corpora/graphs and the naive weight oracle.

The oracle recomputes every edge weight straight from the record list with
nested loops, independent of CorpusIndex; float sums follow the same
canonical sorted-paper order so exact equality against the builder is a
meaningful assertion.
"""

from __future__ import annotations

import random

from scholnet.builder import CorpusIndex
from scholnet.graph import EDGE_ENDPOINTS, Edge, EdgeLabel, MultiGraph, NodeId, NodeKind
from scholnet.records import (
    AuthorName,
    JournalRef,
    PaperRecord,
    RawReference,
    ReferenceIndex,
    author_key,
    journal_key,
)

SURNAMES = ["Ada", "Bo", "Cid", "Dee", "Eld", "Fay", "Gil", "Hui", "Ivo", "Jun"]
JOURNALS = ["ACTA ONE", "ACTA TWO", "ACTA THREE", "ACTA FOUR"]


def random_corpus(rng: random.Random, max_records: int = 20) -> list[PaperRecord]:
    """Corpus with resolvable, dangling, and ambiguous references mixed in."""
    n = rng.randint(1, max_records)
    records: list[PaperRecord] = []
    for i in range(n):
        k = rng.randint(0, 5)
        chosen = rng.sample(SURNAMES, k) if k else []
        authors = [
            AuthorName(surname=s, initials=s[0].upper(), raw=f"{s}, {s[0].upper()}")
            for s in chosen
        ]
        journal = None
        if rng.random() < 0.8:
            journal = JournalRef(short_title=rng.choice(JOURNALS))
        # A few colliding (author, year, venue) triples to exercise ambiguity.
        year = rng.choice([1990, 1991, 1992]) if rng.random() < 0.9 else None
        records.append(
            PaperRecord(
                record_id=f"rec-{i:03d}",
                title=f"Record {i}",
                authors=authors,
                journal=journal,
                year=year,
            )
        )
    for rec in records:
        n_refs = rng.randint(0, 8)
        refs = []
        for _ in range(n_refs):
            if records and rng.random() < 0.6:
                target = rng.choice(records)
                if target.authors and target.year is not None and target.journal:
                    refs.append(
                        RawReference(
                            source_short_title=target.journal.short_title,
                            first_author=target.authors[0].raw,
                            year=target.year,
                            start_page=None,
                        )
                    )
                    continue
            refs.append(
                RawReference(
                    source_short_title=rng.choice(JOURNALS + [None]),
                    first_author=f"{rng.choice(SURNAMES)}, X",
                    year=rng.choice([1980, 1981, None]),
                    start_page=rng.choice(["1", "7", None]),
                )
            )
        rec.references = refs
    return records


def resolve_targets(records: list[PaperRecord]) -> dict[str, list[str]]:
    """Per paper, the resolved-or-stub citation target keys, one per reference."""
    index = ReferenceIndex(records)
    return {
        rec.record_id: [index.lookup(ref).key for ref in rec.references]
        for rec in records
    }


def naive_coauthor_weights(records: list[PaperRecord]) -> dict[tuple[str, str], float]:
    paper_authors = {}
    for rec in records:
        seen: list[str] = []
        for a in rec.authors:
            k = author_key(a)
            if k not in seen:
                seen.append(k)
        paper_authors[rec.record_id] = seen

    weights: dict[tuple[str, str], float] = {}
    all_keys = sorted({k for ks in paper_authors.values() for k in ks})
    for i, a in enumerate(all_keys):
        for b in all_keys[i + 1 :]:
            shared = sorted(
                pid for pid, ks in paper_authors.items() if a in ks and b in ks
            )
            if not shared:
                continue
            total = 0.0
            for pid in shared:
                total += 1.0 / (len(paper_authors[pid]) - 1)
            w = total / len(shared)
            weights[(a, b)] = w
            weights[(b, a)] = w
    return weights


def naive_citation_weights(records: list[PaperRecord]) -> dict[tuple[str, str], float]:
    targets = resolve_targets(records)
    weights: dict[tuple[str, str], float] = {}
    for rec in records:
        keys = targets[rec.record_id]
        if not keys:
            continue
        for key in set(keys):
            if key == rec.record_id:
                continue
            weights[(rec.record_id, key)] = keys.count(key) / len(keys)
    return weights


def naive_cocitation_weights(records: list[PaperRecord]) -> dict[tuple[str, str], float]:
    targets = resolve_targets(records)
    weights: dict[tuple[str, str], float] = {}
    ids = [rec.record_id for rec in records]
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            sa, sb = set(targets[a]), set(targets[b])
            shared = len(sa & sb)
            if shared == 0:
                continue
            w = shared / (len(sa) + len(sb) - shared)
            weights[(a, b)] = w
            weights[(b, a)] = w
    return weights


def naive_jref_weights(records: list[PaperRecord]) -> dict[tuple[str, str], float]:
    by_id = {rec.record_id: rec for rec in records}
    index = ReferenceIndex(records)
    outgoing: dict[str, list[str | None]] = {}
    for rec in records:
        if rec.journal is None:
            continue
        src = journal_key(rec.journal)
        for ref in rec.references:
            res = index.lookup(ref)
            if res.resolved:
                target_journal = by_id[res.key].journal
                venue = journal_key(target_journal) if target_journal else None
            elif ref.source_short_title:
                venue = journal_key(JournalRef(short_title=ref.source_short_title))
            else:
                venue = None
            outgoing.setdefault(src, []).append(venue)

    weights: dict[tuple[str, str], float] = {}
    for src, venues in outgoing.items():
        total = len(venues)
        for venue in set(v for v in venues if v is not None and v != src):
            weights[(src, venue)] = venues.count(venue) / total
    return weights


def edge_weights(edges: list[Edge]) -> dict[tuple[str, str], float]:
    return {(e.src.key, e.dst.key): e.weight for e in edges}


def make_random_walk_graph(
    rng: random.Random,
    n_authors: int = 100,
    n_papers: int = 150,
    n_journals: int = 50,
    n_edges: int = 1500,
) -> MultiGraph:
    """Arbitrary kind-legal weighted graph for walker testing."""
    g = MultiGraph()
    authors = [NodeId(NodeKind.AUTHOR, f"A{i:03d}") for i in range(n_authors)]
    papers = [NodeId(NodeKind.PAPER, f"P{i:03d}") for i in range(n_papers)]
    journals = [NodeId(NodeKind.JOURNAL, f"J{i:03d}") for i in range(n_journals)]
    for node in authors + papers + journals:
        g.upsert_node(node, display=node.key.lower())

    pools = {
        NodeKind.AUTHOR: authors,
        NodeKind.PAPER: papers,
        NodeKind.JOURNAL: journals,
    }
    labels = list(EdgeLabel)
    seen: set[tuple[NodeId, NodeId, EdgeLabel]] = set()
    while len(seen) < n_edges:
        label = rng.choice(labels)
        src_kind, dst_kind = EDGE_ENDPOINTS[label]
        src = rng.choice(pools[src_kind])
        dst = rng.choice(pools[dst_kind])
        if src == dst or (src, dst, label) in seen:
            continue
        seen.add((src, dst, label))
        weight = rng.uniform(0.05, 1.0)
        g.upsert_edge(Edge(src, dst, label, weight))
    return g


def index_for(records: list[PaperRecord]) -> CorpusIndex:
    return CorpusIndex.build(records)
