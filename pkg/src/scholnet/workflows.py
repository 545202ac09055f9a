"""The five stock queries, each a stimulus recipe plus a ranked readout.

  references     seed the keystone papers, read the paper layer
  collaborators  seed the related papers, read the author layer
  journal        seed referenced papers and authors, read the journal layer
  reviewers      seed the reviewing journal and referenced papers positively,
                 the submitting authors negatively, read the author layer
  readers        seed referenced papers and the paper's authors, read the
                 author layer

Seed nodes never appear in their own solution list. Reviewer results carry an
influence share: each candidate's fraction of the returned energy mass.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import MultiGraph, NodeId, NodeKind
from .walker import (
    RankedSolutions,
    Stimulus,
    WalkerConfig,
    rank_solutions,
    simulate,
)

WORKFLOW_NAMES = ("references", "collaborators", "journal", "reviewers", "readers")

WORKFLOW_LAYER: dict[str, NodeKind] = {
    "references": NodeKind.PAPER,
    "collaborators": NodeKind.AUTHOR,
    "journal": NodeKind.JOURNAL,
    "reviewers": NodeKind.AUTHOR,
    "readers": NodeKind.AUTHOR,
}

DEFAULT_TOP = 20


class WorkflowError(ValueError):
    pass


Ranked = list[tuple[NodeId, float]]


@dataclass(frozen=True)
class ReviewerCandidate:
    node: NodeId
    energy: float
    share: float


@dataclass
class ReviewerReport:
    reviewers: list[ReviewerCandidate]


@dataclass
class QuerySpec:
    kind: str
    positive_papers: list[NodeId] = field(default_factory=list)
    positive_authors: list[NodeId] = field(default_factory=list)
    positive_journals: list[NodeId] = field(default_factory=list)
    negative_authors: list[NodeId] = field(default_factory=list)
    cfg: WalkerConfig = field(default_factory=WalkerConfig)
    top: int = DEFAULT_TOP


@dataclass
class QueryResult:
    workflow: str
    layer: NodeKind
    entries: Ranked
    shares: list[float] | None = None


def _check_kinds(nodes: list[NodeId], kind: NodeKind, role: str) -> None:
    for n in nodes:
        if n.kind is not kind:
            raise WorkflowError(f"{role} must be {kind.value} nodes, got {n}")


def _ranked(
    g: MultiGraph, stimuli: list[Stimulus], cfg: WalkerConfig
) -> RankedSolutions:
    return rank_solutions(simulate(g, stimuli, cfg), stimuli)


def find_references(
    g: MultiGraph, keystones: list[NodeId], cfg: WalkerConfig, top: int = DEFAULT_TOP
) -> Ranked:
    """Papers related to the keystone papers."""
    if not keystones:
        raise WorkflowError("references query needs at least one keystone paper")
    _check_kinds(keystones, NodeKind.PAPER, "keystones")
    stimuli = [Stimulus(n, 1.0) for n in keystones]
    return _ranked(g, stimuli, cfg).s_p[:top]


def refine(
    g: MultiGraph,
    previous: Ranked,
    kept: list[NodeId],
    cfg: WalkerConfig,
    top: int = DEFAULT_TOP,
) -> Ranked:
    """Re-stimulate with a trimmed subset of an earlier result set."""
    if not kept:
        raise WorkflowError("refine needs a nonempty kept set")
    prev_nodes = {node for node, _ in previous}
    for n in kept:
        if n not in prev_nodes:
            raise WorkflowError(f"kept node {n} was not in the previous result")
    return find_references(g, kept, cfg, top)


def find_collaborators(
    g: MultiGraph,
    related_papers: list[NodeId],
    cfg: WalkerConfig,
    top: int = DEFAULT_TOP,
) -> Ranked:
    """Authors related in topic to a set of papers."""
    if not related_papers:
        raise WorkflowError("collaborators query needs at least one paper")
    _check_kinds(related_papers, NodeKind.PAPER, "related papers")
    stimuli = [Stimulus(n, 1.0) for n in related_papers]
    return _ranked(g, stimuli, cfg).s_a[:top]


def find_journal(
    g: MultiGraph,
    referenced_papers: list[NodeId],
    authors: list[NodeId],
    cfg: WalkerConfig,
    top: int = DEFAULT_TOP,
) -> Ranked:
    """Candidate venues for a manuscript, from its bibliography and authors."""
    if not referenced_papers and not authors:
        raise WorkflowError("journal query needs referenced papers or authors")
    _check_kinds(referenced_papers, NodeKind.PAPER, "referenced papers")
    _check_kinds(authors, NodeKind.AUTHOR, "authors")
    stimuli = [Stimulus(n, 1.0) for n in referenced_papers]
    stimuli += [Stimulus(n, 1.0) for n in authors]
    return _ranked(g, stimuli, cfg).s_j[:top]


def find_reviewers(
    g: MultiGraph,
    referenced_papers: list[NodeId],
    submitting_authors: list[NodeId],
    cfg: WalkerConfig,
    journal: NodeId | None = None,
    top: int = DEFAULT_TOP,
) -> ReviewerReport:
    """Conflict-aware reviewer candidates for a submitted manuscript.

    Submitting authors seed inhibitory walkers, which also depresses their
    co-author neighborhoods; on top of that they are unconditionally excluded
    from the report.
    """
    if not referenced_papers:
        raise WorkflowError("reviewers query needs referenced papers")
    if not submitting_authors:
        raise WorkflowError("reviewers query needs the submitting authors")
    _check_kinds(referenced_papers, NodeKind.PAPER, "referenced papers")
    _check_kinds(submitting_authors, NodeKind.AUTHOR, "submitting authors")
    stimuli: list[Stimulus] = []
    if journal is not None:
        if journal.kind is not NodeKind.JOURNAL:
            raise WorkflowError(f"reviewing journal must be a journal node, got {journal}")
        stimuli.append(Stimulus(journal, 1.0))
    stimuli += [Stimulus(n, 1.0) for n in referenced_papers]
    stimuli += [Stimulus(n, -1.0) for n in submitting_authors]

    banned = set(submitting_authors)
    ranked = [(n, e) for n, e in _ranked(g, stimuli, cfg).s_a if n not in banned]
    ranked = ranked[:top]
    total = sum(e for _, e in ranked)
    return ReviewerReport(
        reviewers=[
            ReviewerCandidate(node=n, energy=e, share=e / total) for n, e in ranked
        ]
    )


def find_readers(
    g: MultiGraph,
    referenced_papers: list[NodeId],
    paper_authors: list[NodeId],
    cfg: WalkerConfig,
    top: int = DEFAULT_TOP,
) -> Ranked:
    """Likely-interested readers for a newly published paper."""
    if not referenced_papers and not paper_authors:
        raise WorkflowError("readers query needs referenced papers or authors")
    _check_kinds(referenced_papers, NodeKind.PAPER, "referenced papers")
    _check_kinds(paper_authors, NodeKind.AUTHOR, "paper authors")
    stimuli = [Stimulus(n, 1.0) for n in referenced_papers]
    stimuli += [Stimulus(n, 1.0) for n in paper_authors]
    own = set(paper_authors)
    ranked = [(n, e) for n, e in _ranked(g, stimuli, cfg).s_a if n not in own]
    return ranked[:top]


def run_query(g: MultiGraph, spec: QuerySpec) -> QueryResult:
    """Dispatch a QuerySpec to its workflow and normalize the result shape."""
    if spec.kind not in WORKFLOW_NAMES:
        raise WorkflowError(f"unknown workflow {spec.kind!r}")
    layer = WORKFLOW_LAYER[spec.kind]
    if spec.kind == "references":
        entries = find_references(g, spec.positive_papers, spec.cfg, spec.top)
        return QueryResult(spec.kind, layer, entries)
    if spec.kind == "collaborators":
        entries = find_collaborators(g, spec.positive_papers, spec.cfg, spec.top)
        return QueryResult(spec.kind, layer, entries)
    if spec.kind == "journal":
        entries = find_journal(
            g, spec.positive_papers, spec.positive_authors, spec.cfg, spec.top
        )
        return QueryResult(spec.kind, layer, entries)
    if spec.kind == "reviewers":
        if len(spec.positive_journals) > 1:
            raise WorkflowError("reviewers query accepts at most one journal")
        journal = spec.positive_journals[0] if spec.positive_journals else None
        report = find_reviewers(
            g,
            spec.positive_papers,
            spec.negative_authors,
            spec.cfg,
            journal=journal,
            top=spec.top,
        )
        return QueryResult(
            spec.kind,
            layer,
            entries=[(c.node, c.energy) for c in report.reviewers],
            shares=[c.share for c in report.reviewers],
        )
    entries = find_readers(
        g, spec.positive_papers, spec.positive_authors, spec.cfg, spec.top
    )
    return QueryResult(spec.kind, layer, entries)
