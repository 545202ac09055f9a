"""Energy-decay random walkers over the multi-relational graph.

A walker starts at a seed node with a signed energy in [-1, 1], deposits its
current energy at every node it arrives at (the seed included), and after each
step multiplies its energy by (1 - delta); once the magnitude falls to the
threshold theta or below, the energy snaps to zero and the walker dies.
Negative seeds inhibit: they deposit negative energy along their paths.

Edge choice is proportional to edge weight times a per-label multiplier.
Walkers at nodes with no usable out-edge terminate; there is no restart.

Every walker draws from its own PRNG stream derived from (master seed,
stimulus index, walker index), so runs are reproducible bit-for-bit,
appending a stimulus never perturbs existing trajectories, and flipping all
stimulus signs exactly negates the tally.

expected_energy computes the exact expectation of the Monte-Carlo tally by
propagating the visitation-probability vector through the normalized
transition weights; it is the testing oracle for simulate.
"""

from __future__ import annotations

import hashlib
import random
import struct
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .graph import EdgeLabel, MultiGraph, NodeId, NodeKind, UnknownNodeError

EnergyTally = dict[NodeId, float]

_I64_MIN, _I64_MAX = -(2**63), 2**63 - 1


@dataclass(frozen=True)
class WalkerConfig:
    delta: float = 0.15
    theta: float = 0.05
    walkers_per_stimulus: int = 10000
    max_steps: int = 10000
    master_seed: int = 0
    label_multipliers: Mapping[EdgeLabel, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not (0.0 <= self.delta <= 1.0):
            raise ValueError(f"delta must be in [0, 1], got {self.delta}")
        if not (0.0 <= self.theta <= 1.0):
            raise ValueError(f"theta must be in [0, 1], got {self.theta}")
        if self.walkers_per_stimulus < 1:
            raise ValueError("walkers_per_stimulus must be >= 1")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if not (_I64_MIN <= self.master_seed <= _I64_MAX):
            raise ValueError("master_seed must fit in 64 bits")
        for label, mult in self.label_multipliers.items():
            if not isinstance(label, EdgeLabel):
                raise ValueError(f"label_multipliers key {label!r} is not an EdgeLabel")
            if mult < 0:
                raise ValueError(f"multiplier for {label.value} must be >= 0")

    def multiplier(self, label: EdgeLabel) -> float:
        return self.label_multipliers.get(label, 1.0)


@dataclass(frozen=True)
class Stimulus:
    node: NodeId
    initial_energy: float

    def __post_init__(self) -> None:
        if self.initial_energy == 0.0 or not (-1.0 <= self.initial_energy <= 1.0):
            raise ValueError(
                f"initial_energy must be a nonzero value in [-1, 1], "
                f"got {self.initial_energy}"
            )


StimulusSet = Sequence[Stimulus]


@dataclass
class RankedSolutions:
    """Per-layer rankings of positive-energy non-seed nodes."""

    s_a: list[tuple[NodeId, float]]
    s_p: list[tuple[NodeId, float]]
    s_j: list[tuple[NodeId, float]]

    def layer(self, kind: NodeKind) -> list[tuple[NodeId, float]]:
        return {
            NodeKind.AUTHOR: self.s_a,
            NodeKind.PAPER: self.s_p,
            NodeKind.JOURNAL: self.s_j,
        }[kind]


def decay(energy: float, delta: float, theta: float) -> float:
    """One decay step: shrink by (1 - delta) above the threshold, else zero."""
    if abs(energy) > theta:
        return (1.0 - delta) * energy
    return 0.0


def derive_walker_seed(master_seed: int, stimulus_index: int, walker_index: int) -> int:
    """Stable, platform-independent per-walker seed."""
    payload = struct.pack("<qqq", master_seed, stimulus_index, walker_index)
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


# A transition row: destination nodes, cumulative effective weights, their total.
_Row = tuple[list[NodeId], list[float], float]


def _compile_row(g: MultiGraph, cfg: WalkerConfig, node: NodeId) -> _Row | None:
    dsts: list[NodeId] = []
    cum: list[float] = []
    total = 0.0
    for e in g.out_edges(node):
        eff = e.weight * cfg.multiplier(e.label)
        if eff <= 0.0:
            continue
        total += eff
        dsts.append(e.dst)
        cum.append(total)
    if not dsts:
        return None
    return (dsts, cum, total)


def _compile_transitions(g: MultiGraph, cfg: WalkerConfig) -> dict[NodeId, _Row]:
    table: dict[NodeId, _Row] = {}
    for node in g.nodes():
        row = _compile_row(g, cfg, node)
        if row is not None:
            table[node] = row
    return table


def _step(row: _Row, rng: random.Random) -> NodeId:
    dsts, cum, total = row
    r = rng.random() * total
    i = bisect_right(cum, r)
    if i >= len(dsts):
        i = len(dsts) - 1
    return dsts[i]


def _walk(
    table: dict[NodeId, _Row],
    start: NodeId,
    e0: float,
    cfg: WalkerConfig,
    rng: random.Random,
) -> EnergyTally:
    deposits: EnergyTally = {start: e0}
    node = start
    energy = e0
    steps = 0
    while steps < cfg.max_steps:
        energy = decay(energy, cfg.delta, cfg.theta)
        if energy == 0.0:
            break
        row = table.get(node)
        if row is None:
            break
        node = _step(row, rng)
        deposits[node] = deposits.get(node, 0.0) + energy
        steps += 1
    return deposits


def choose_step(
    g: MultiGraph, node: NodeId, cfg: WalkerConfig, rng: random.Random
) -> NodeId | None:
    """Pick the next node with probability proportional to effective weight.

    Returns None when the node has no out-edge with positive effective weight.
    """
    if not g.has_node(node):
        raise UnknownNodeError(node)
    row = _compile_row(g, cfg, node)
    if row is None:
        return None
    return _step(row, rng)


def run_walker(
    g: MultiGraph,
    start: NodeId,
    e0: float,
    cfg: WalkerConfig,
    rng: random.Random,
) -> EnergyTally:
    """Run one walker and return its per-node deposit map."""
    if not g.has_node(start):
        raise UnknownNodeError(start)
    return _walk(_compile_transitions(g, cfg), start, e0, cfg, rng)


def _validate_stimuli(g: MultiGraph, stimuli: StimulusSet) -> None:
    for s in stimuli:
        if not g.has_node(s.node):
            raise UnknownNodeError(s.node)


def simulate(g: MultiGraph, stimuli: StimulusSet, cfg: WalkerConfig) -> EnergyTally:
    """Monte-Carlo tally, normalized by walkers_per_stimulus.

    Walkers run and are summed in (stimulus index, walker index) order, which
    pins the floating-point result bit-for-bit for a given master seed.
    """
    _validate_stimuli(g, stimuli)
    table = _compile_transitions(g, cfg)
    totals: EnergyTally = {}
    for i, s in enumerate(stimuli):
        for k in range(cfg.walkers_per_stimulus):
            rng = random.Random(derive_walker_seed(cfg.master_seed, i, k))
            for node, v in _walk(table, s.node, s.initial_energy, cfg, rng).items():
                totals[node] = totals.get(node, 0.0) + v
    return {n: v / cfg.walkers_per_stimulus for n, v in totals.items()}


def expected_energy(
    g: MultiGraph, stimuli: StimulusSet, cfg: WalkerConfig
) -> EnergyTally:
    """Exact expectation of simulate's tally (walkers -> infinity).

    Propagates the visitation-probability vector through the normalized
    transition weights; mass at nodes without usable out-edges is absorbed.
    Terminates because the energy sequence reaches zero in finitely many steps
    (or at the max_steps cap).
    """
    _validate_stimuli(g, stimuli)
    nodes = sorted(g.nodes(), key=NodeId.sort_key)
    node_ix = {n: i for i, n in enumerate(nodes)}
    n = len(nodes)

    table = _compile_transitions(g, cfg)
    src_ix: list[int] = []
    dst_ix: list[int] = []
    prob: list[float] = []
    for node, (dsts, cum, total) in table.items():
        prev = 0.0
        for dst, c in zip(dsts, cum):
            src_ix.append(node_ix[node])
            dst_ix.append(node_ix[dst])
            prob.append((c - prev) / total)
            prev = c
    src_arr = np.asarray(src_ix, dtype=np.intp)
    dst_arr = np.asarray(dst_ix, dtype=np.intp)
    prob_arr = np.asarray(prob, dtype=np.float64)

    deposits = np.zeros(n, dtype=np.float64)
    visited = np.zeros(n, dtype=bool)

    for s in stimuli:
        p = np.zeros(n, dtype=np.float64)
        p[node_ix[s.node]] = 1.0
        visited[node_ix[s.node]] = True
        energy = s.initial_energy
        deposits += energy * p
        steps = 0
        while steps < cfg.max_steps:
            energy = decay(energy, cfg.delta, cfg.theta)
            if energy == 0.0:
                break
            p_next = np.zeros(n, dtype=np.float64)
            np.add.at(p_next, dst_arr, p[src_arr] * prob_arr)
            p = p_next
            if not p.any():
                break
            visited |= p > 0.0
            deposits += energy * p
            steps += 1

    return {nodes[i]: float(deposits[i]) for i in range(n) if visited[i]}


def rank_solutions(tally: EnergyTally, stimuli: StimulusSet) -> RankedSolutions:
    """Strictly positive, non-seed nodes per layer, by descending energy.

    Ties break on node key ascending, so rankings are stable across runs.
    """
    seeds = {s.node for s in stimuli}
    layers: dict[NodeKind, list[tuple[NodeId, float]]] = {
        NodeKind.AUTHOR: [],
        NodeKind.PAPER: [],
        NodeKind.JOURNAL: [],
    }
    for node, energy in tally.items():
        if energy <= 0.0 or node in seeds:
            continue
        layers[node.kind].append((node, energy))
    for rows in layers.values():
        rows.sort(key=lambda item: (-item[1], item[0].key))
    return RankedSolutions(
        s_a=layers[NodeKind.AUTHOR],
        s_p=layers[NodeKind.PAPER],
        s_j=layers[NodeKind.JOURNAL],
    )
