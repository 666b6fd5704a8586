"""The flow-finding pipeline and a direct checker for the flow conditions."""

from __future__ import annotations

from collections.abc import Callable, Collection, Mapping
from dataclasses import dataclass, field
from typing import Any, Union

from .causal import (
    CausalOrder,
    InfluenceDigraph,
    compute_order,
    detect_vicious_circuit,
    influence_digraph,
)
from .failures import EdgeBoundExceeded, FlowFailure, NoCover, UnequalIO, ViciousCircuit
from .geometry import Geometry, flow_edge_bound
from .pathcover import PathCover, max_disjoint_paths, to_path_cover


@dataclass(frozen=True)
class Flow:
    geometry: Geometry = field(repr=False)
    successor: dict[int, int]
    order: CausalOrder = field(repr=False)
    cover: PathCover = field(repr=False)
    digraph: InfluenceDigraph = field(repr=False, compare=False)

    @property
    def predecessor(self) -> dict[int, int]:
        return self.cover.predecessor

    def leq(self, x: int, y: int) -> bool:
        return self.order.leq(x, y)

    def to_json(self) -> dict[str, Any]:
        name = self.geometry.name
        return {
            "successor": {name(x): name(y) for x, y in sorted(self.successor.items())},
            "chains": [[name(v) for v in ch] for ch in self.order.chains],
            "closure": {
                name(v): list(self.order.closure[v]) for v in range(self.geometry.n)
            },
            "layers": [[name(v) for v in layer] for layer in self.order.layers],
        }


FlowResult = Union[Flow, FlowFailure]


def find_flow(g: Geometry) -> FlowResult:
    """Decide whether ``g`` has a flow and build it, for ``|I| == |O|``.

    Runs the edge-count prefilter, a maximum disjoint-path family, the cover
    check, the vicious-circuit check and finally the causal order.  On success
    the returned successor function is the only one admitting a flow and the
    order is the coarsest valid one.
    """
    if len(g.inputs) != len(g.outputs):
        return UnequalIO(len(g.inputs), len(g.outputs))
    eb = flow_edge_bound(g)
    if not eb.passed:
        return EdgeBoundExceeded(m=eb.m, bound=eb.bound)
    family = max_disjoint_paths(g)
    cover = to_path_cover(g, family)
    if isinstance(cover, NoCover):
        return cover
    digraph = influence_digraph(g, cover)
    witness = detect_vicious_circuit(digraph, cover)
    if witness is not None:
        return ViciousCircuit(witness=witness, scc=witness.scc, cover=cover, digraph=digraph)
    order = compute_order(g, cover, digraph)
    return Flow(g, dict(cover.successor), order, cover, digraph)


@dataclass(frozen=True)
class Violation:
    condition: str
    vertices: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.condition} at {self.vertices}"


@dataclass
class FlowCheck:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


Relation = Union[CausalOrder, Callable[[int, int], bool], Collection[tuple[int, int]]]


def _as_predicate(order: Relation) -> Callable[[int, int], bool]:
    if isinstance(order, CausalOrder):
        return order.leq
    if callable(order):
        return order
    pairs = set(order)
    return lambda x, y: (x, y) in pairs


def check_flow(g: Geometry, f: Mapping[int, int], order: Relation) -> FlowCheck:
    """Check a candidate ``(f, order)`` against the definition of a flow.

    ``order`` may be a :class:`CausalOrder`, a predicate or a collection of
    related pairs.  The partial-order axioms are checked over all vertex
    pairs and triples, so this is meant for small geometries.
    """
    le = _as_predicate(order)
    out: list[Violation] = []
    n = g.n
    for x in sorted(g.non_outputs):
        if x not in f:
            out.append(Violation("successor undefined", (x,)))
    for x, fx in sorted(f.items()):
        if x in g.outputs or not 0 <= fx < n or fx in g.inputs:
            out.append(Violation("successor out of range", (x, fx)))

    rel = [[le(x, y) for y in range(n)] for x in range(n)]
    for x in range(n):
        if not rel[x][x]:
            out.append(Violation("reflexivity", (x,)))
        for y in range(x + 1, n):
            if rel[x][y] and rel[y][x]:
                out.append(Violation("antisymmetry", (x, y)))
    for x in range(n):
        for y in range(n):
            if x == y or not rel[x][y]:
                continue
            for z in range(n):
                if rel[y][z] and not rel[x][z]:
                    out.append(Violation("transitivity", (x, y, z)))

    for x, fx in sorted(f.items()):
        if not (0 <= fx < n) or x in g.outputs:
            continue
        if not g.adjacent(x, fx):
            out.append(Violation("successor adjacency", (x, fx)))
        if not rel[x][fx]:
            out.append(Violation("successor order", (x, fx)))
        for y in g.adjacency[fx]:
            if not rel[x][y]:
                out.append(Violation("neighbour order", (x, y)))
    return FlowCheck(out)
