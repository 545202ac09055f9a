"""Multi-relational scholarly network construction and random-walker ranking."""

from .builder import BuildConfig, BuildError, CorpusIndex, assemble
from .graph import (
    Edge,
    EdgeLabel,
    GraphError,
    MultiGraph,
    NodeId,
    NodeKind,
    UnknownNodeError,
)
from .records import (
    AuthorName,
    JournalRef,
    PaperRecord,
    RawReference,
    author_key,
    journal_key,
    parse_record,
    read_corpus,
    write_corpus,
)
from .walker import (
    RankedSolutions,
    Stimulus,
    WalkerConfig,
    decay,
    expected_energy,
    rank_solutions,
    run_walker,
    simulate,
)
from .workflows import (
    QueryResult,
    QuerySpec,
    ReviewerReport,
    find_collaborators,
    find_journal,
    find_readers,
    find_references,
    find_reviewers,
    refine,
    run_query,
)

__version__ = "0.1.0"

__all__ = [
    "AuthorName",
    "BuildConfig",
    "BuildError",
    "CorpusIndex",
    "Edge",
    "EdgeLabel",
    "GraphError",
    "JournalRef",
    "MultiGraph",
    "NodeId",
    "NodeKind",
    "PaperRecord",
    "QueryResult",
    "QuerySpec",
    "RankedSolutions",
    "RawReference",
    "ReviewerReport",
    "Stimulus",
    "UnknownNodeError",
    "WalkerConfig",
    "assemble",
    "author_key",
    "decay",
    "expected_energy",
    "find_collaborators",
    "find_journal",
    "find_readers",
    "find_references",
    "find_reviewers",
    "journal_key",
    "parse_record",
    "rank_solutions",
    "read_corpus",
    "refine",
    "run_query",
    "run_walker",
    "simulate",
    "write_corpus",
]
