"""Maximum families of vertex-disjoint I->O paths, and path covers.

The family is found as an integral maximum flow in a unit-capacity network
obtained by splitting every vertex ``v`` into ``v_in -> v_out``.  Node indices
are ``r = 0``, ``s = 1``, ``v_in = 2 + 2v`` and ``v_out = 3 + 2v``, so BFS over
neighbours in ascending node order gives a deterministic result.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace
from itertools import chain

import numpy as np

from .failures import NoCover
from .geometry import Geometry

DirectedPath = tuple[int, ...]

SOURCE = 0
SINK = 1


def node_in(v: int) -> int:
    return 2 + 2 * v


def node_out(v: int) -> int:
    return 3 + 2 * v


@dataclass(frozen=True)
class FlowNetwork:
    """Unit-capacity network with arcs as ``(tail, head)`` node pairs.

    ``flow`` is empty until :func:`max_flow` fills it with one 0/1 entry per arc.
    """

    n_vertices: int
    arcs: tuple[tuple[int, int], ...]
    flow: tuple[int, ...] = ()

    @property
    def n_nodes(self) -> int:
        return 2 * self.n_vertices + 2

    def label(self, node: int) -> str:
        if node == SOURCE:
            return "r"
        if node == SINK:
            return "s"
        v, side = divmod(node - 2, 2)
        return f"{v}_{'out' if side else 'in'}"

    def net_flow(self, node: int) -> int:
        """Flow into ``node`` minus flow out of it."""
        total = 0
        for (u, v), phi in zip(self.arcs, self.flow):
            if v == node:
                total += phi
            if u == node:
                total -= phi
        return total

    @property
    def value(self) -> int:
        return -self.net_flow(SOURCE) if self.flow else 0


def build_network(g: Geometry) -> FlowNetwork:
    arcs = [(SOURCE, 2 + 2 * v) for v in sorted(g.inputs)]
    outputs = g.outputs
    for v, nbrs in enumerate(g.adjacency):
        vo = 3 + 2 * v
        arcs.append((vo - 1, vo))
        arcs.extend([(vo, 2 + 2 * w) for w in nbrs])
        if v in outputs:
            arcs.append((vo, SINK))
    return FlowNetwork(n_vertices=g.n, arcs=tuple(arcs))


def max_flow(net: FlowNetwork, limit: int | None = None) -> FlowNetwork:
    """Ford-Fulkerson with BFS augmenting paths on a unit-capacity network.

    Stops early once the flow value reaches ``limit``.
    """
    n_nodes = net.n_nodes
    n_arcs = len(net.arcs)
    ends = np.fromiter(chain.from_iterable(net.arcs), dtype=np.int64, count=2 * n_arcs)
    ends = ends.reshape(-1, 2)
    tails, heads = ends[:, 0], ends[:, 1]
    # residual graph in CSR form, rows ordered by neighbour; code >= 0 is a
    # forward arc, ~code the reverse of arc code
    rows = np.concatenate([tails, heads])
    cols = np.concatenate([heads, tails])
    codes = np.concatenate([np.arange(n_arcs), ~np.arange(n_arcs)])
    perm = np.lexsort((cols, rows))
    start = np.searchsorted(rows[perm], np.arange(n_nodes + 1)).tolist()
    nbr = cols[perm].tolist()
    code = codes[perm].tolist()
    tails, heads = tails.tolist(), heads.tolist()

    flow = [0] * n_arcs
    if limit is None:
        limit = min(tails.count(SOURCE), heads.count(SINK))
    value = 0
    while value < limit:
        via = [None] * n_nodes
        via[SOURCE] = 0
        queue = [SOURCE]
        found = False
        for u in queue:
            for j in range(start[u], start[u + 1]):
                v = nbr[j]
                if via[v] is not None:
                    continue
                e = code[j]
                if e >= 0:
                    if flow[e]:
                        continue
                elif not flow[~e]:
                    continue
                via[v] = e
                if v == SINK:
                    found = True
                    break
                queue.append(v)
            if found:
                break
        if not found:
            break
        v = SINK
        while v != SOURCE:
            e = via[v]
            if e >= 0:
                flow[e] = 1
                v = tails[e]
            else:
                flow[~e] = 0
                v = heads[~e]
        value += 1
    return replace(net, flow=tuple(flow))


def decompose(net: FlowNetwork, g: Geometry) -> list[DirectedPath]:
    """Split an integral r-s flow into vertex-disjoint I->O paths.

    Flow circulations not reachable from ``r`` are dropped.  Each walk is
    trimmed to run from its last input before its first output, so paths meet
    I only at the start and O only at the end.
    """
    nxt: dict[int, int] = {}
    starts: list[int] = []
    arcs = net.arcs
    for e in [e for e, phi in enumerate(net.flow) if phi]:
        u, v = arcs[e]
        if u == SOURCE:
            starts.append(v)
        else:
            nxt[u] = v
    paths = []
    for node in sorted(starts):
        walk = []
        while node != SINK:
            if node % 2 == 0:
                walk.append((node - 2) // 2)
            node = nxt[node]
        paths.append(_trim(walk, g))
    return paths


def _trim(walk: list[int], g: Geometry) -> DirectedPath:
    first_out = next(j for j, v in enumerate(walk) if v in g.outputs)
    last_in = max(i for i in range(first_out + 1) if walk[i] in g.inputs)
    return tuple(walk[last_in : first_out + 1])


def max_disjoint_paths(g: Geometry) -> list[DirectedPath]:
    """A maximum family of vertex-disjoint I->O paths, sorted by start vertex.

    Runs the same Ford-Fulkerson search as ``max_flow(build_network(g))``,
    visiting residual neighbours in the same ascending node order, but reads
    the residual graph straight off the geometry instead of materializing the
    network.  Flow is kept per vertex: ``pred[v]`` is where the unit entering
    ``v_in`` comes from and ``succ[v]`` where the unit leaving ``v_out`` goes
    (``-1`` none, ``-2`` source or sink).
    """
    n, adjacency = g.n, g.adjacency
    inputs, outputs = g.inputs, g.outputs
    sorted_inputs = sorted(inputs)
    pred = [-1] * n
    succ = [-1] * n
    limit = min(len(inputs), len(outputs))
    value = 0
    while value < limit:
        via = [-1] * (2 * n + 2)
        via[SOURCE] = SOURCE
        queue = [SOURCE]
        found = False
        for u in queue:
            if u == SOURCE:
                nbrs = [2 + 2 * v for v in sorted_inputs if pred[v] != -2]
            elif u & 1 == 0:
                v = (u - 2) >> 1
                p = pred[v]
                nbrs = [u + 1] if p == -1 else [SOURCE if p == -2 else 3 + 2 * p]
            else:
                v = (u - 3) >> 1
                nbrs = []
                if v in outputs and succ[v] != -2:
                    nbrs.append(SINK)
                back = pred[v] != -1
                for w in adjacency[v]:
                    if back and w > v:
                        nbrs.append(u - 1)
                        back = False
                    if succ[v] != w:
                        nbrs.append(2 + 2 * w)
                if back:
                    nbrs.append(u - 1)
            for x in nbrs:
                if via[x] != -1:
                    continue
                via[x] = u
                if x == SINK:
                    found = True
                    break
                queue.append(x)
            if found:
                break
        if not found:
            break
        b = SINK
        while b != SOURCE:
            a = via[b]
            if a == SOURCE:
                pred[(b - 2) >> 1] = -2
            elif b == SINK:
                succ[(a - 3) >> 1] = -2
            elif a & 1 and b != a - 1:
                # forward a_out -> b_in
                succ[(a - 3) >> 1] = (b - 2) >> 1
                pred[(b - 2) >> 1] = (a - 3) >> 1
            elif not a & 1 and b != a + 1:
                # backward a_in -> p_out cancels the unit p sent into a
                v, p = (a - 2) >> 1, (b - 3) >> 1
                if succ[p] == v:
                    succ[p] = -1
                pred[v] = -1
            b = a
        value += 1

    paths = []
    for v in sorted_inputs:
        if pred[v] != -2:
            continue
        walk = [v]
        while succ[walk[-1]] != -2:
            walk.append(succ[walk[-1]])
        paths.append(_trim(walk, g))
    return sorted(paths)


@dataclass(frozen=True)
class PathCover:
    """Vertex-disjoint directed paths covering every vertex.

    ``successor`` maps each non-output vertex to the next vertex on its path and
    ``predecessor`` is its inverse.  ``chain[v]`` and ``position[v]`` locate ``v``.
    """

    paths: tuple[DirectedPath, ...]
    successor: dict[int, int] = field(compare=False)
    predecessor: dict[int, int] = field(compare=False)
    chain: tuple[int, ...] = field(compare=False)
    position: tuple[int, ...] = field(compare=False)

    @classmethod
    def from_paths(cls, n: int, paths: Iterable[Sequence[int]]) -> PathCover:
        paths = tuple(sorted(tuple(p) for p in paths))
        succ: dict[int, int] = {}
        pred: dict[int, int] = {}
        chain = [-1] * n
        position = [-1] * n
        for c, p in enumerate(paths):
            for i, v in enumerate(p):
                chain[v] = c
                position[v] = i
            for x, y in zip(p, p[1:]):
                succ[x] = y
                pred[y] = x
        return cls(paths, succ, pred, tuple(chain), tuple(position))

    def arcs(self) -> set[tuple[int, int]]:
        return set(self.successor.items())


def to_path_cover(g: Geometry, family: Iterable[Sequence[int]]) -> PathCover | NoCover:
    """Promote a disjoint path family to a path cover, or report what it misses.

    Inputs that are also outputs and not on any path get a trivial path.
    """
    paths = [tuple(p) for p in family]
    seen = [False] * g.n
    for p in paths:
        if not p or p[0] not in g.inputs or p[-1] not in g.outputs:
            raise ValueError(f"path {p} does not run from an input to an output")
        for i, v in enumerate(p):
            if seen[v]:
                raise ValueError(f"vertex {v} lies on two paths")
            seen[v] = True
            if i and not g.adjacent(p[i - 1], v):
                raise ValueError(f"{p[i - 1]} and {v} are not adjacent")
            if i and v in g.inputs or i < len(p) - 1 and v in g.outputs:
                raise ValueError(f"path {p} meets I or O at an interior point")
    for v in sorted(g.inputs & g.outputs):
        if not seen[v]:
            paths.append((v,))
            seen[v] = True
    uncovered = frozenset(v for v in range(g.n) if not seen[v])
    if uncovered:
        return NoCover(uncovered=uncovered, family=tuple(sorted(paths)))
    return PathCover.from_paths(g.n, paths)
