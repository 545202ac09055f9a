"""Typed multi-relational graph: three node layers, labeled weighted directed edges.

Node identity is (kind, key). Edges are unique per (src, dst, label) triple and
carry a weight in (0, 1]. Each label is legal for exactly one (source kind,
target kind) pair, so the layer structure is enforced at insertion time.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, TextIO


class NodeKind(str, Enum):
    AUTHOR = "author"
    PAPER = "paper"
    JOURNAL = "journal"


class EdgeLabel(str, Enum):
    COAUTHOR = "coauthor"
    CITES = "cites"
    COCITES = "cocites"
    JREF = "jref"
    WROTE = "wrote"
    WRITTEN_BY = "written_by"
    PUBLISHED_IN = "published_in"
    CONTAINS = "contains"


# Legal (source kind, target kind) per label.
EDGE_ENDPOINTS: dict[EdgeLabel, tuple[NodeKind, NodeKind]] = {
    EdgeLabel.COAUTHOR: (NodeKind.AUTHOR, NodeKind.AUTHOR),
    EdgeLabel.CITES: (NodeKind.PAPER, NodeKind.PAPER),
    EdgeLabel.COCITES: (NodeKind.PAPER, NodeKind.PAPER),
    EdgeLabel.JREF: (NodeKind.JOURNAL, NodeKind.JOURNAL),
    EdgeLabel.WROTE: (NodeKind.AUTHOR, NodeKind.PAPER),
    EdgeLabel.WRITTEN_BY: (NodeKind.PAPER, NodeKind.AUTHOR),
    EdgeLabel.PUBLISHED_IN: (NodeKind.PAPER, NodeKind.JOURNAL),
    EdgeLabel.CONTAINS: (NodeKind.JOURNAL, NodeKind.PAPER),
}


class GraphError(Exception):
    pass


class UnknownNodeError(GraphError):
    def __init__(self, node: "NodeId"):
        self.node = node
        super().__init__(f"unknown node: {node}")


class EdgeConstraintError(GraphError):
    pass


class GraphFormatError(GraphError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


@dataclass(frozen=True)
class NodeId:
    kind: NodeKind
    key: str

    def __str__(self) -> str:
        return f"{self.kind.value}:{self.key}"

    @classmethod
    def parse(cls, ref: str) -> "NodeId":
        """Parse a 'kind:key' reference. Keys may themselves contain colons."""
        kind_token, sep, key = ref.partition(":")
        if not sep or not key:
            raise ValueError(f"node reference must look like kind:key, got {ref!r}")
        try:
            kind = NodeKind(kind_token)
        except ValueError:
            raise ValueError(f"unknown node kind {kind_token!r} in {ref!r}") from None
        return cls(kind, key)

    def sort_key(self) -> tuple[str, str]:
        return (self.kind.value, self.key)


def author(key: str) -> NodeId:
    return NodeId(NodeKind.AUTHOR, key)


def paper(key: str) -> NodeId:
    return NodeId(NodeKind.PAPER, key)


def journal(key: str) -> NodeId:
    return NodeId(NodeKind.JOURNAL, key)


@dataclass(frozen=True)
class Edge:
    src: NodeId
    dst: NodeId
    label: EdgeLabel
    weight: float


def format_weight(w: float) -> str:
    """Canonical decimal rendering: 9 significant digits."""
    return f"{w:.9g}"


class MultiGraph:
    """Mutable during construction, treated as immutable once simulation starts.

    Graph equality compares node sets, displays, edge triples, and weights via
    their canonical 9-significant-digit rendering (the serialized form).
    """

    def __init__(self) -> None:
        self._display: dict[NodeId, str] = {}
        self._out: dict[NodeId, dict[tuple[EdgeLabel, NodeId], float]] = {}
        self._edge_count = 0

    # -- nodes ---------------------------------------------------------------

    def upsert_node(self, node: NodeId, display: str | None = None) -> None:
        if node not in self._display:
            self._display[node] = display or ""
            self._out[node] = {}
        elif display is not None:
            self._display[node] = display

    def has_node(self, node: NodeId) -> bool:
        return node in self._display

    def display(self, node: NodeId) -> str:
        if node not in self._display:
            raise UnknownNodeError(node)
        return self._display[node]

    def nodes(self) -> Iterator[NodeId]:
        return iter(self._display)

    @property
    def node_count(self) -> int:
        return len(self._display)

    # -- edges ---------------------------------------------------------------

    def upsert_edge(self, edge: Edge) -> None:
        """Insert or replace the edge for (src, dst, label)."""
        if edge.src == edge.dst:
            raise EdgeConstraintError(f"self-loop rejected: {edge.src}")
        if edge.src not in self._display:
            raise UnknownNodeError(edge.src)
        if edge.dst not in self._display:
            raise UnknownNodeError(edge.dst)
        want = EDGE_ENDPOINTS[edge.label]
        got = (edge.src.kind, edge.dst.kind)
        if want != got:
            raise EdgeConstraintError(
                f"label {edge.label.value} requires {want[0].value}->{want[1].value}, "
                f"got {got[0].value}->{got[1].value}"
            )
        if not (0.0 < edge.weight <= 1.0):
            raise EdgeConstraintError(
                f"weight must be in (0, 1], got {edge.weight!r} on "
                f"{edge.src}-[{edge.label.value}]->{edge.dst}"
            )
        slot = (edge.label, edge.dst)
        if slot not in self._out[edge.src]:
            self._edge_count += 1
        self._out[edge.src][slot] = edge.weight

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def out_edges(
        self, node: NodeId, labels: Iterable[EdgeLabel] | None = None
    ) -> list[Edge]:
        """Out-edges of a node in deterministic (label, dst key) order."""
        if node not in self._out:
            raise UnknownNodeError(node)
        wanted = set(labels) if labels is not None else None
        rows = [
            Edge(node, dst, label, w)
            for (label, dst), w in self._out[node].items()
            if wanted is None or label in wanted
        ]
        rows.sort(key=lambda e: (e.label.value, e.dst.key))
        return rows

    def edges(self) -> Iterator[Edge]:
        for src in self._out:
            for (label, dst), w in self._out[src].items():
                yield Edge(src, dst, label, w)

    # -- equality ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiGraph):
            return NotImplemented
        if self._display != other._display:
            return False
        if set(self._out) != set(other._out):
            return False
        for src, slots in self._out.items():
            theirs = other._out[src]
            if set(slots) != set(theirs):
                return False
            for slot, w in slots.items():
                if format_weight(w) != format_weight(theirs[slot]):
                    return False
        return True

    # -- serialization -------------------------------------------------------

    def save(self, fp: TextIO) -> None:
        """Write the TSV form: all node lines, then all edge lines, sorted."""
        for node in sorted(self._display, key=NodeId.sort_key):
            fp.write(
                f"node\t{node.kind.value}\t{node.key}\t{self._display[node]}\n"
            )
        all_edges = sorted(
            self.edges(),
            key=lambda e: (e.src.sort_key(), e.label.value, e.dst.sort_key()),
        )
        for e in all_edges:
            fp.write(
                f"edge\t{e.src}\t{e.dst}\t{e.label.value}\t{format_weight(e.weight)}\n"
            )

    def dumps(self) -> str:
        buf = io.StringIO()
        self.save(buf)
        return buf.getvalue()

    @classmethod
    def load(cls, fp: TextIO) -> "MultiGraph":
        g = cls()
        seen_edge = False
        for line_no, raw in enumerate(fp, start=1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if fields[0] == "node":
                if seen_edge:
                    raise GraphFormatError(line_no, "node line after edge lines")
                if len(fields) != 4:
                    raise GraphFormatError(line_no, "node line needs 4 fields")
                _, kind_token, key, display = fields
                try:
                    kind = NodeKind(kind_token)
                except ValueError:
                    raise GraphFormatError(
                        line_no, f"unknown node kind {kind_token!r}"
                    ) from None
                if not key:
                    raise GraphFormatError(line_no, "empty node key")
                g.upsert_node(NodeId(kind, key), display)
            elif fields[0] == "edge":
                seen_edge = True
                if len(fields) != 5:
                    raise GraphFormatError(line_no, "edge line needs 5 fields")
                _, src_ref, dst_ref, label_token, weight_token = fields
                try:
                    src = NodeId.parse(src_ref)
                    dst = NodeId.parse(dst_ref)
                except ValueError as exc:
                    raise GraphFormatError(line_no, str(exc)) from None
                try:
                    label = EdgeLabel(label_token)
                except ValueError:
                    raise GraphFormatError(
                        line_no, f"unknown edge label {label_token!r}"
                    ) from None
                try:
                    weight = float(weight_token)
                except ValueError:
                    raise GraphFormatError(
                        line_no, f"bad weight {weight_token!r}"
                    ) from None
                try:
                    g.upsert_edge(Edge(src, dst, label, weight))
                except UnknownNodeError as exc:
                    raise GraphFormatError(
                        line_no, f"edge references undeclared node {exc.node}"
                    ) from None
                except EdgeConstraintError as exc:
                    raise GraphFormatError(line_no, str(exc)) from None
            else:
                raise GraphFormatError(line_no, f"unknown line type {fields[0]!r}")
        return g

    @classmethod
    def loads(cls, text: str) -> "MultiGraph":
        return cls.load(io.StringIO(text))
