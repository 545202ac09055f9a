import math

import pytest

from scholnet.builder import assemble
from scholnet.graph import NodeId, NodeKind, UnknownNodeError
from scholnet.records import AuthorName, PaperRecord, RawReference
from scholnet.walker import Stimulus, WalkerConfig, expected_energy, rank_solutions, simulate
from scholnet.workflows import (
    QuerySpec,
    WorkflowError,
    find_collaborators,
    find_journal,
    find_readers,
    find_references,
    find_reviewers,
    refine,
    run_query,
)

from conftest import F1

CFG = WalkerConfig(delta=0.5, theta=0.1, walkers_per_stimulus=4000, master_seed=3)


# -- references ---------------------------------------------------------------


def test_find_references_f1(f1_graph):
    result = find_references(f1_graph, [F1.P1], CFG)
    nodes = [n for n, _ in result]
    assert set(nodes) == {F1.P2, F1.P3}
    assert F1.P1 not in nodes
    # Order agrees with the exact-expectation oracle.
    oracle = rank_solutions(
        expected_energy(f1_graph, [Stimulus(F1.P1, 1.0)], CFG), [Stimulus(F1.P1, 1.0)]
    )
    assert nodes == [n for n, _ in oracle.s_p]


def test_find_references_isolated_stub_keystone():
    rec = PaperRecord(
        record_id="only",
        authors=[AuthorName("Solo", "S", "Solo, S")],
        references=[RawReference(first_author="Ghost, G", year=1900)],
    )
    g = assemble([rec])
    stub = next(n for n in g.nodes() if n.key.startswith("ref:"))
    assert find_references(g, [stub], CFG) == []


def test_find_references_two_keystones_excluded(f1_graph):
    result = find_references(f1_graph, [F1.P1, F1.P2], CFG)
    nodes = {n for n, _ in result}
    assert F1.P1 not in nodes and F1.P2 not in nodes


def test_find_references_requires_seed(f1_graph):
    with pytest.raises(WorkflowError):
        find_references(f1_graph, [], CFG)


def test_find_references_unknown_paper(f1_graph):
    with pytest.raises(UnknownNodeError):
        find_references(f1_graph, [NodeId(NodeKind.PAPER, "NOPE")], CFG)


def test_find_references_rejects_wrong_kind(f1_graph):
    with pytest.raises(WorkflowError):
        find_references(f1_graph, [F1.A], CFG)


# -- refine ---------------------------------------------------------------------


def test_refine_equals_rerun(f1_graph):
    previous = find_references(f1_graph, [F1.P1], CFG)
    kept = [n for n, _ in previous]
    assert refine(f1_graph, previous, kept, CFG) == find_references(f1_graph, kept, CFG)


def test_refine_single_kept_equals_direct(f1_graph):
    previous = find_references(f1_graph, [F1.P1], CFG)
    assert F1.P2 in {n for n, _ in previous}
    assert refine(f1_graph, previous, [F1.P2], CFG) == find_references(
        f1_graph, [F1.P2], CFG
    )


def test_refine_empty_kept_errors(f1_graph):
    previous = find_references(f1_graph, [F1.P1], CFG)
    with pytest.raises(WorkflowError):
        refine(f1_graph, previous, [], CFG)


def test_refine_kept_outside_previous_errors(f1_graph):
    previous = find_references(f1_graph, [F1.P1], CFG)
    with pytest.raises(WorkflowError):
        refine(f1_graph, previous, [F1.P1], CFG)  # the seed is not in its own result


# -- collaborators ------------------------------------------------------------------


def test_find_collaborators_f1(f1_graph):
    result = find_collaborators(f1_graph, [F1.P2, F1.P3], CFG)
    energies = dict(result)
    assert F1.C in energies and F1.A in energies
    assert energies[F1.C] > energies[F1.A]
    stimuli = [Stimulus(F1.P2, 1.0), Stimulus(F1.P3, 1.0)]
    oracle = rank_solutions(expected_energy(f1_graph, stimuli, CFG), stimuli)
    assert [n for n, _ in result] == [n for n, _ in oracle.s_a]


def test_find_collaborators_empty_errors(f1_graph):
    with pytest.raises(WorkflowError):
        find_collaborators(f1_graph, [], CFG)


def test_find_collaborators_single_author_paper():
    rec = PaperRecord(
        record_id="solo", authors=[AuthorName("Solo", "S", "Solo, S")]
    )
    g = assemble([rec])
    result = find_collaborators(g, [NodeId(NodeKind.PAPER, "solo")], CFG)
    assert result[0][0] == NodeId(NodeKind.AUTHOR, "SOLO,S")


# -- journal ---------------------------------------------------------------------------


def test_find_journal_f1(f1_graph):
    result = find_journal(f1_graph, [F1.P2, F1.P3], [F1.A], CFG)
    nodes = [n for n, _ in result]
    assert set(nodes) == {F1.J1, F1.J2}
    stimuli = [Stimulus(F1.P2, 1.0), Stimulus(F1.P3, 1.0), Stimulus(F1.A, 1.0)]
    oracle = rank_solutions(expected_energy(f1_graph, stimuli, CFG), stimuli)
    assert nodes == [n for n, _ in oracle.s_j]


def test_find_journal_authors_only(f1_graph):
    result = find_journal(f1_graph, [], [F1.A], CFG)
    assert all(n.kind is NodeKind.JOURNAL for n, _ in result)


def test_find_journal_empty_errors(f1_graph):
    with pytest.raises(WorkflowError):
        find_journal(f1_graph, [], [], CFG)


# -- reviewers ----------------------------------------------------------------------------


# Longer walks leave the inhibited coauthor with some positive energy, so the
# ordering claim (inhibited B below C, both present) is observable.
REVIEW_CFG = WalkerConfig(
    delta=0.15, theta=0.05, walkers_per_stimulus=4000, master_seed=3
)


def test_find_reviewers_f1(f1_graph):
    report = find_reviewers(
        f1_graph, [F1.P2], [F1.A], REVIEW_CFG, journal=F1.J2
    )
    nodes = [c.node for c in report.reviewers]
    assert F1.A not in nodes
    energies = {c.node: c.energy for c in report.reviewers}
    assert energies[F1.C] > energies[F1.B]
    assert all(c.energy > 0 for c in report.reviewers)


def test_reviewer_shares_sum_to_one(f1_graph):
    report = find_reviewers(f1_graph, [F1.P2], [F1.A], CFG, journal=F1.J2)
    assert report.reviewers
    assert math.isclose(sum(c.share for c in report.reviewers), 1.0, abs_tol=1e-9)


def test_reviewer_exclusion_no_spillover():
    # The submitting author has no coauthors: nobody else loses eligibility.
    recs = [
        PaperRecord(record_id="mine", authors=[AuthorName("Solo", "S", "Solo, S")]),
        PaperRecord(
            record_id="cited",
            authors=[AuthorName("Yi", "Y", "Yi, Y"), AuthorName("Zed", "Z", "Zed, Z")],
        ),
    ]
    g = assemble(recs)
    report = find_reviewers(
        g,
        [NodeId(NodeKind.PAPER, "cited")],
        [NodeId(NodeKind.AUTHOR, "SOLO,S")],
        CFG,
    )
    nodes = {c.node for c in report.reviewers}
    assert NodeId(NodeKind.AUTHOR, "SOLO,S") not in nodes
    assert NodeId(NodeKind.AUTHOR, "YI,Y") in nodes
    assert NodeId(NodeKind.AUTHOR, "ZED,Z") in nodes


def test_find_reviewers_requires_authors(f1_graph):
    with pytest.raises(WorkflowError):
        find_reviewers(f1_graph, [F1.P2], [], CFG)


def test_find_reviewers_requires_papers(f1_graph):
    with pytest.raises(WorkflowError):
        find_reviewers(f1_graph, [], [F1.A], CFG)


# -- readers ---------------------------------------------------------------------------------


def test_find_readers_f1(f1_graph):
    result = find_readers(f1_graph, [F1.P3], [F1.C], CFG)
    nodes = [n for n, _ in result]
    assert F1.B in nodes
    assert F1.C not in nodes


def test_find_readers_no_reachable_authors():
    recs = [
        PaperRecord(record_id="alone", authors=[AuthorName("One", "O", "One, O")]),
    ]
    g = assemble(recs)
    result = find_readers(g, [], [NodeId(NodeKind.AUTHOR, "ONE,O")], CFG)
    assert result == []


def test_positive_stimulus_monotone(f1_graph):
    # Adding a journal seed only adds energy: no tally decreases.
    base = [Stimulus(F1.P3, 1.0), Stimulus(F1.C, 1.0)]
    before = simulate(f1_graph, base, CFG)
    after = simulate(f1_graph, base + [Stimulus(F1.J1, 1.0)], CFG)
    for node in set(before) | set(after):
        assert after.get(node, 0.0) >= before.get(node, 0.0)


# -- run_query dispatch -------------------------------------------------------------------------


def test_run_query_layers_match_contract(f1_graph):
    cases = [
        (QuerySpec(kind="references", positive_papers=[F1.P1], cfg=CFG), NodeKind.PAPER),
        (QuerySpec(kind="collaborators", positive_papers=[F1.P2], cfg=CFG), NodeKind.AUTHOR),
        (
            QuerySpec(kind="journal", positive_papers=[F1.P2], positive_authors=[F1.A], cfg=CFG),
            NodeKind.JOURNAL,
        ),
        (
            QuerySpec(
                kind="reviewers",
                positive_papers=[F1.P2],
                positive_journals=[F1.J2],
                negative_authors=[F1.A],
                cfg=CFG,
            ),
            NodeKind.AUTHOR,
        ),
        (
            QuerySpec(kind="readers", positive_papers=[F1.P3], positive_authors=[F1.C], cfg=CFG),
            NodeKind.AUTHOR,
        ),
    ]
    for spec, kind in cases:
        result = run_query(f1_graph, spec)
        assert result.layer is kind
        assert all(n.kind is kind for n, _ in result.entries)


def test_run_query_seeds_never_in_solutions(f1_graph):
    spec = QuerySpec(kind="references", positive_papers=[F1.P1], cfg=CFG)
    result = run_query(f1_graph, spec)
    assert F1.P1 not in {n for n, _ in result.entries}


def test_run_query_reviewers_carries_shares(f1_graph):
    spec = QuerySpec(
        kind="reviewers",
        positive_papers=[F1.P2],
        negative_authors=[F1.A],
        cfg=CFG,
    )
    result = run_query(f1_graph, spec)
    assert result.shares is not None
    assert len(result.shares) == len(result.entries)


def test_run_query_unknown_workflow(f1_graph):
    with pytest.raises(WorkflowError):
        run_query(f1_graph, QuerySpec(kind="magic", cfg=CFG))


def test_run_query_top_truncates(f1_graph):
    spec = QuerySpec(kind="collaborators", positive_papers=[F1.P2], cfg=CFG, top=1)
    result = run_query(f1_graph, spec)
    assert len(result.entries) == 1
