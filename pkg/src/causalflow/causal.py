"""Influence digraphs, vicious circuits and the natural pre-order of a path cover."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

from .geometry import Geometry
from .pathcover import DirectedPath, PathCover


class CyclicOrder(ValueError):
    """The influence digraph has a directed cycle, so no partial order exists."""


@dataclass(frozen=True)
class InfluenceDigraph:
    """Arcs ``x -> f(x)`` and ``x -> y`` for ``y`` adjacent to ``f(x)``, ``y != x``.

    ``succ[x]`` is the sorted tuple of arc heads leaving ``x``; only non-outputs
    have arcs.
    """

    n: int
    succ: tuple[tuple[int, ...], ...]

    def arcs(self) -> set[tuple[int, int]]:
        return {(x, y) for x in range(self.n) for y in self.succ[x]}

    @property
    def n_arcs(self) -> int:
        return sum(len(s) for s in self.succ)

    @cached_property
    def components(self) -> list[list[int]]:
        """Strongly connected components, sinks first."""
        return strongly_connected_components(self.n, self.succ)


@dataclass(frozen=True)
class ViciousCircuitWitness:
    """A closed influencing walk in G, with its segment decomposition.

    ``scc`` is the strongly connected component of the influence digraph the
    circuit was taken from.
    """

    circuit: tuple[int, ...]
    segments: tuple[tuple[int, ...], ...]
    scc: frozenset[int]


def influence_digraph(g: Geometry, c: PathCover) -> InfluenceDigraph:
    succ: list[tuple[int, ...]] = [()] * g.n
    adjacency = g.adjacency
    for x, fx in c.successor.items():
        heads = [y for y in adjacency[fx] if y != x]
        heads.append(fx)
        heads.sort()
        succ[x] = tuple(heads)
    return InfluenceDigraph(g.n, tuple(succ))


def strongly_connected_components(n: int, succ: Sequence[Sequence[int]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative.

    Components come out in reverse topological order of the condensation:
    every component is emitted after all components reachable from it.
    """
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, 0)]
        while work:
            v, i = work[-1]
            nbrs = succ[v]
            if i < len(nbrs):
                work[-1] = (v, i + 1)
                w = nbrs[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


# Shortest-cycle search runs a BFS from every member of the component up to
# this size, and only from the smallest member beyond it.
_EXHAUSTIVE_CYCLE_SEARCH = 256


def _shortest_cycle_through(start: int, members: frozenset[int], succ) -> list[int] | None:
    parent = {start: None}
    queue = [start]
    for u in queue:
        for w in succ[u]:
            if w not in members:
                continue
            if w == start:
                cycle = [u]
                while parent[cycle[-1]] is not None:
                    cycle.append(parent[cycle[-1]])
                cycle.reverse()
                return cycle
            if w not in parent:
                parent[w] = u
                queue.append(w)
    return None


def _expand(cycle: list[int], c: PathCover) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
    f = c.successor
    segments: list[tuple[int, ...]] = []
    for x, y in zip(cycle, cycle[1:] + cycle[:1]):
        fx = f[x]
        if y == fx:
            segments.append((x, y))
        elif f.get(fx) == y:
            # the edge f(x)-y is a cover arc, so this arc is two plain segments
            segments.extend([(x, fx), (fx, y)])
        else:
            segments.append((x, fx, y))
    walk = [segments[0][0]]
    for s in segments:
        walk.extend(s[1:])
    return tuple(walk), tuple(segments)


def detect_vicious_circuit(d: InfluenceDigraph, c: PathCover) -> ViciousCircuitWitness | None:
    """Return ``None`` when ``d`` is acyclic, else a shortest circuit witness.

    The witness comes from the non-trivial strongly connected component with
    the smallest vertex; arcs not on the cover are expanded through ``f(x)``.
    """
    comps = [comp for comp in d.components if len(comp) > 1]
    if not comps:
        return None
    members = frozenset(min(comps, key=min))
    starts = sorted(members)
    if len(starts) > _EXHAUSTIVE_CYCLE_SEARCH:
        starts = starts[:1]
    best: list[int] | None = None
    for s in starts:
        cycle = _shortest_cycle_through(s, members, d.succ)
        if cycle is not None and (best is None or len(cycle) < len(best)):
            best = cycle
    assert best is not None
    circuit, segments = _expand(best, c)
    return ViciousCircuitWitness(circuit, segments, members)


@dataclass(frozen=True)
class CausalOrder:
    """The natural pre-order of a causal path cover, stored by chains.

    ``reach[c][x]`` is the smallest position ``p`` on chain ``c`` with
    ``x <= chains[c][p]``, or ``n`` when ``x`` reaches nothing on ``c``.
    :attr:`closure` is the same table indexed ``[x][c]`` with ``None`` for
    unreachable chains.  ``layers`` partitions the vertices by the length of
    the longest chain of strict predecessors.
    """

    chains: tuple[DirectedPath, ...]
    reach: tuple[list[int], ...]
    chain_of: tuple[int, ...]
    position: tuple[int, ...]
    layers: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.chain_of)

    @cached_property
    def closure(self) -> tuple[tuple[int | None, ...], ...]:
        n = self.n
        return tuple(
            tuple(None if p == n else p for p in row) for row in zip(*self.reach)
        ) if self.reach else ((),) * n

    def leq(self, x: int, y: int) -> bool:
        return self.position[y] >= self.reach[self.chain_of[y]][x]

    def __call__(self, x: int, y: int) -> bool:
        return self.leq(x, y)

    def pairs(self) -> set[tuple[int, int]]:
        """Every related pair ``(x, y)`` with ``x <= y``; quadratic in size."""
        out = set()
        for c, chain in enumerate(self.chains):
            for x, lo in enumerate(self.reach[c]):
                out.update((x, y) for y in chain[lo:])
        return out

    def layer_of(self) -> list[int]:
        depth = [0] * self.n
        for i, layer in enumerate(self.layers):
            for v in layer:
                depth[v] = i
        return depth


def compute_order(g: Geometry, c: PathCover, d: InfluenceDigraph | None = None) -> CausalOrder:
    """Chain-decomposition closure of the influence digraph.

    One pass per chain over the arcs in reverse topological order, so
    O(k * arcs) overall.
    """
    if d is None:
        d = influence_digraph(g, c)
    comps = d.components
    if len(comps) != d.n:
        raise CyclicOrder("influence digraph contains a directed cycle")
    n, succ = d.n, d.succ
    sinks_first = [x for (x,) in comps]

    reach: list[list[int]] = []
    for ci, chain in enumerate(c.paths):
        lo = [n] * n
        for p, v in enumerate(chain):
            lo[v] = p
        for x in sinks_first:
            best = lo[x]
            for y in succ[x]:
                if lo[y] < best:
                    best = lo[y]
            lo[x] = best
        reach.append(lo)

    depth = [0] * n
    for x in reversed(sinks_first):
        nxt = depth[x] + 1
        for y in succ[x]:
            if depth[y] < nxt:
                depth[y] = nxt
    layers: list[list[int]] = [[] for _ in range(max(depth, default=-1) + 1)]
    for v, dv in enumerate(depth):
        layers[dv].append(v)

    return CausalOrder(
        chains=c.paths,
        reach=tuple(reach),
        chain_of=c.chain,
        position=c.position,
        layers=tuple(tuple(layer) for layer in layers),
    )


def leq(o: CausalOrder, x: int, y: int) -> bool:
    return o.leq(x, y)


def depth_layers(o: CausalOrder) -> tuple[tuple[int, ...], ...]:
    return o.layers
