"""Reaching-definitions style forward may-analysis solved with the fixed-point engines.

A state assigns to every node the set of facts live at its exit.  It is
encoded as a set of ``(node, fact)`` pairs, so the state space is the
powerset lattice over ``nodes × facts``.  The transfer map is

    OUT[n] = gen[n] ∪ (⋃_{p → n} OUT[p] \\ kill[n])
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .caps import Caps, current_caps
from .engines import iterative_fix_oracle, kt_via_bw, pataraia_fix, tarski_lfp
from .errors import MalformedGraph, SizeLimit
from .order import EndoMap, PowersetLattice, canon_key, classify_map

# classify the transfer map exhaustively up to this many (node, fact) pairs
EXHAUSTIVE_PAIRS = 12
# pataraia enumerates all monotone progressive maps of the post-fixed points
PATARAIA_PAIRS = 4


@dataclass(frozen=True)
class FlowGraph:
    nodes: tuple
    edges: tuple
    facts: tuple
    gen: Mapping
    kill: Mapping

    def __init__(self, nodes: Iterable, edges: Iterable, facts: Iterable, gen: Mapping, kill: Mapping):
        nodes = tuple(sorted(set(nodes), key=canon_key))
        facts = tuple(sorted(set(facts), key=canon_key))
        edges = tuple(sorted({tuple(e) for e in edges}, key=canon_key))
        known_nodes, known_facts = set(nodes), set(facts)
        for e in edges:
            if len(e) != 2 or not set(e) <= known_nodes:
                raise MalformedGraph(f"edge {e!r} mentions an unknown node")
        for label, table in (("gen", gen), ("kill", kill)):
            for node, fs in table.items():
                if node not in known_nodes:
                    raise MalformedGraph(f"{label} given for unknown node {node!r}")
                if not set(fs) <= known_facts:
                    raise MalformedGraph(f"{label}[{node!r}] mentions an unknown fact")
        gen = {n: frozenset(gen.get(n, ())) for n in nodes}
        kill = {n: frozenset(kill.get(n, ())) for n in nodes}
        for n in nodes:
            if gen[n] & kill[n]:
                raise MalformedGraph(f"gen and kill overlap at {n!r}")
        for name, value in (("nodes", nodes), ("edges", edges), ("facts", facts), ("gen", gen), ("kill", kill)):
            object.__setattr__(self, name, value)

    def predecessors(self, node) -> tuple:
        return tuple(a for a, b in self.edges if b == node)

    @property
    def lattice(self) -> PowersetLattice:
        return PowersetLattice(((n, d) for n in self.nodes for d in self.facts), name="states")

    @property
    def pairs(self) -> int:
        return len(self.nodes) * len(self.facts)

    def __hash__(self) -> int:
        return hash((self.nodes, self.edges, self.facts))


@dataclass(frozen=True)
class AnalysisState:
    assignment: Mapping  # node -> frozenset of facts

    @classmethod
    def from_element(cls, g: FlowGraph, element: frozenset) -> "AnalysisState":
        return cls({n: frozenset(d for m, d in element if m == n) for n in g.nodes})

    def to_element(self) -> frozenset:
        return frozenset((n, d) for n, ds in self.assignment.items() for d in ds)

    def as_json(self) -> dict:
        return {str(n): sorted(map(str, ds)) for n, ds in self.assignment.items()}

    def __hash__(self) -> int:
        return hash(self.to_element())


def _transfer(g: FlowGraph):
    preds = {n: g.predecessors(n) for n in g.nodes}

    def step(element: frozenset) -> frozenset:
        out = {n: set() for n in g.nodes}
        for n, d in element:
            out[n].add(d)
        new = set()
        for n in g.nodes:
            incoming = set().union(*(out[p] for p in preds[n])) if preds[n] else set()
            new.update((n, d) for d in g.gen[n] | (incoming - g.kill[n]))
        return frozenset(new)

    return step


def transfer_map(g: FlowGraph) -> EndoMap:
    """The gen/kill update as an endomap of the state lattice."""
    L = g.lattice
    step = _transfer(g)
    if g.pairs <= EXHAUSTIVE_PAIRS:
        return classify_map(L, step, name="transfer")
    # unions and set differences with fixed sets are monotone
    return EndoMap(L, False, True, rule=step, name="transfer")


SOLVERS = {
    "tarski": lambda L, f, x, caps: tarski_lfp(L, f, x),
    "pataraia": pataraia_fix,
    "kt": kt_via_bw,
    "iterate": lambda L, f, x, caps: iterative_fix_oracle(L, f, x),
}


def solve(g: FlowGraph, engine: str = "tarski", caps: Caps | None = None) -> AnalysisState:
    """Solve from the empty state; tarski and iterate give the least solution."""
    caps = caps or current_caps()
    if engine not in SOLVERS:
        raise ValueError(f"unknown engine {engine!r}; choose from {', '.join(SOLVERS)}")
    if engine == "pataraia" and g.pairs > PATARAIA_PAIRS:
        raise SizeLimit("nodes x facts for pataraia", g.pairs, PATARAIA_PAIRS)
    L, f = g.lattice, transfer_map(g)
    w = SOLVERS[engine](L, f, frozenset(), caps)
    return AnalysisState.from_element(g, w.point)


__all__ = ["AnalysisState", "FlowGraph", "SOLVERS", "solve", "transfer_map"]
