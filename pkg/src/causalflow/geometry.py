"""Geometries: an undirected entanglement graph with input and output vertex sets."""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any


class GeometryError(ValueError):
    """Base class for problems found while validating a geometry description."""


class InvalidEdge(GeometryError):
    def __init__(self, edge: Any):
        self.edge = edge
        super().__init__(f"invalid edge {edge!r}: expected a pair of vertices")


class UnknownVertex(GeometryError):
    def __init__(self, vertex: Any, where: str = ""):
        self.vertex = vertex
        self.where = where
        suffix = f" in {where}" if where else ""
        super().__init__(f"unknown vertex {vertex!r}{suffix}")


class DuplicateEdge(GeometryError):
    def __init__(self, edge: tuple[Any, Any]):
        self.edge = edge
        super().__init__(f"duplicate edge {edge[0]!r}-{edge[1]!r}")


class LoopEdge(GeometryError):
    def __init__(self, vertex: Any):
        self.vertex = vertex
        super().__init__(f"loop edge on vertex {vertex!r}")


class InvalidAngle(GeometryError):
    def __init__(self, vertex: Any, reason: str):
        self.vertex = vertex
        super().__init__(f"invalid angle for vertex {vertex!r}: {reason}")


class InvalidGeometry(GeometryError):
    """Raised by :func:`validate` with every problem it found."""

    def __init__(self, issues: list[GeometryError]):
        self.issues = issues
        super().__init__("; ".join(str(e) for e in issues))


@dataclass(frozen=True, eq=False)
class Geometry:
    """Immutable triple (G, I, O) over dense vertex indices ``0..n-1``.

    ``adjacency[v]`` is the sorted tuple of neighbours of ``v``. ``names`` holds
    the display name of each vertex (``str(v)`` when the input used plain indices).
    ``angles`` holds a measurement angle per vertex, 0.0 unless given.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    inputs: frozenset[int]
    outputs: frozenset[int]
    names: tuple[str, ...] | None = None
    angles: tuple[float, ...] = ()
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.angles:
            object.__setattr__(self, "angles", (0.0,) * self.n)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @property
    def k(self) -> int:
        return len(self.outputs)

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def non_inputs(self) -> frozenset[int]:
        return frozenset(range(self.n)) - self.inputs

    @property
    def non_outputs(self) -> frozenset[int]:
        return frozenset(range(self.n)) - self.outputs

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def name(self, v: int) -> str:
        return self.names[v] if self.names is not None else str(v)

    def index(self, label: str | int) -> int:
        """Resolve a display name or an integer index to a vertex index."""
        return _resolver(self.n, self.names)(label)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Geometry):
            return NotImplemented
        return (
            self.n == other.n
            and self.adjacency == other.adjacency
            and self.inputs == other.inputs
            and self.outputs == other.outputs
            and self.names == other.names
            and self.angles == other.angles
        )

    def __hash__(self) -> int:
        return hash((self.n, self.adjacency, self.inputs, self.outputs, self.names))

    def __repr__(self) -> str:
        return (
            f"Geometry(n={self.n}, m={self.m}, inputs={sorted(self.inputs)}, "
            f"outputs={sorted(self.outputs)})"
        )


def _resolver(n: int, names: tuple[str, ...] | None):
    lookup = {name: i for i, name in enumerate(names)} if names is not None else {}

    def resolve(label: Any) -> int:
        if isinstance(label, bool):
            raise UnknownVertex(label)
        if isinstance(label, int):
            if 0 <= label < n:
                return label
            raise UnknownVertex(label)
        if isinstance(label, str):
            if label in lookup:
                return lookup[label]
            if names is None and label.isdigit() and int(label) < n:
                return int(label)
            raise UnknownVertex(label)
        raise UnknownVertex(label)

    return resolve


def validate(raw: Mapping[str, Any]) -> Geometry:
    """Build a canonical :class:`Geometry` from a parsed description.

    ``raw`` follows the JSON geometry format: ``vertices`` is either a vertex
    count or a list of names; ``edges``, ``inputs`` and ``outputs`` refer to
    vertices by name or index; ``angles`` optionally maps vertices to radians.
    All problems are collected and raised together as :class:`InvalidGeometry`.
    """
    issues: list[GeometryError] = []
    verts = raw.get("vertices")
    names: tuple[str, ...] | None
    if isinstance(verts, int) and not isinstance(verts, bool) and verts >= 0:
        n, names = verts, None
    elif isinstance(verts, list) and all(isinstance(v, str) for v in verts):
        if len(set(verts)) != len(verts):
            raise InvalidGeometry([GeometryError("vertex names must be unique")])
        n, names = len(verts), tuple(verts)
    else:
        raise InvalidGeometry(
            [GeometryError("'vertices' must be a non-negative integer or a list of names")]
        )
    resolve = _resolver(n, names)

    adjacency: list[set[int]] = [set() for _ in range(n)]
    for edge in raw.get("edges", []):
        if not isinstance(edge, (list, tuple)) or len(edge) != 2:
            issues.append(InvalidEdge(edge))
            continue
        try:
            u, v = resolve(edge[0]), resolve(edge[1])
        except UnknownVertex as e:
            issues.append(UnknownVertex(e.vertex, f"edge {list(edge)!r}"))
            continue
        if u == v:
            issues.append(LoopEdge(edge[0]))
        elif v in adjacency[u]:
            issues.append(DuplicateEdge((edge[0], edge[1])))
        else:
            adjacency[u].add(v)
            adjacency[v].add(u)

    def vertex_set(key: str) -> frozenset[int]:
        out = set()
        for label in raw.get(key, []):
            try:
                out.add(resolve(label))
            except UnknownVertex as e:
                issues.append(UnknownVertex(e.vertex, key))
        return frozenset(out)

    inputs = vertex_set("inputs")
    outputs = vertex_set("outputs")

    angles = [0.0] * n
    for label, value in (raw.get("angles") or {}).items():
        try:
            v = resolve(label)
        except UnknownVertex as e:
            issues.append(UnknownVertex(e.vertex, "angles"))
            continue
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            issues.append(InvalidAngle(label, "not a finite number"))
        elif v in outputs:
            issues.append(InvalidAngle(label, "output vertices are not measured"))
        else:
            angles[v] = float(value)

    if issues:
        raise InvalidGeometry(issues)
    return Geometry(
        n=n,
        adjacency=tuple(tuple(sorted(a)) for a in adjacency),
        inputs=inputs,
        outputs=outputs,
        names=names,
        angles=tuple(angles),
        meta=dict(raw.get("meta") or {}),
    )


def from_edges(
    n: int,
    edges: Iterable[tuple[int, int]],
    inputs: Iterable[int],
    outputs: Iterable[int],
    names: Iterable[str] | None = None,
) -> Geometry:
    """Convenience constructor over integer indices."""
    raw: dict[str, Any] = {
        "vertices": list(names) if names is not None else n,
        "edges": [list(e) for e in edges],
        "inputs": list(inputs),
        "outputs": list(outputs),
    }
    return validate(raw)


def serialize(g: Geometry) -> dict[str, Any]:
    """Canonical JSON-ready description; ``validate(serialize(g)) == g``."""
    label = (lambda v: g.names[v]) if g.names is not None else (lambda v: v)
    out: dict[str, Any] = {
        "vertices": list(g.names) if g.names is not None else g.n,
        "edges": [[label(u), label(v)] for u, v in g.edges()],
        "inputs": [label(v) for v in sorted(g.inputs)],
        "outputs": [label(v) for v in sorted(g.outputs)],
    }
    angles = {g.name(v): a for v, a in enumerate(g.angles) if a != 0.0}
    if angles:
        out["angles"] = angles
    if g.meta:
        out["meta"] = dict(g.meta)
    return out


def load(path: str | Path) -> Geometry:
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as e:
            raise InvalidGeometry(
                [GeometryError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}")]
            ) from None
    if not isinstance(raw, dict):
        raise InvalidGeometry([GeometryError(f"{path}: top level must be an object")])
    return validate(raw)


def dump(g: Geometry, path: str | Path) -> None:
    Path(path).write_text(json.dumps(serialize(g), indent=2) + "\n")


def neighbors(g: Geometry, v: int) -> tuple[int, ...]:
    if not isinstance(v, int) or not 0 <= v < g.n:
        raise UnknownVertex(v)
    return g.adjacency[v]


@dataclass(frozen=True)
class EdgeBound:
    bound: int
    m: int

    @property
    def passed(self) -> bool:
        return self.m <= self.bound


def flow_edge_bound(g: Geometry) -> EdgeBound:
    """Largest edge count a geometry with a flow can have: ``k*n - k*(k+1)/2``, ``k = |O|``."""
    k = g.k
    return EdgeBound(bound=k * g.n - k * (k + 1) // 2, m=g.m)
