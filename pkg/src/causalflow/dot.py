"""Graphviz DOT export of influence digraphs and geometries."""

from __future__ import annotations

import re

from .causal import InfluenceDigraph, strongly_connected_components
from .geometry import Geometry
from .pathcover import PathCover


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _node_attrs(g: Geometry, v: int, filled: bool) -> str:
    attrs = [f"label={_q(g.name(v))}"]
    if v in g.inputs and v in g.outputs:
        attrs.append("shape=doubleoctagon")
    elif v in g.inputs:
        attrs.append("shape=box")
    elif v in g.outputs:
        attrs.append("shape=doublecircle")
    if filled:
        attrs.append('style=filled fillcolor="#f4a582"')
    return ", ".join(attrs)


def influence_dot(g: Geometry, cover: PathCover, d: InfluenceDigraph) -> str:
    """Cover arcs are solid, influence-only arcs dashed, and members of
    non-trivial strongly connected components filled."""
    in_scc = set()
    for comp in strongly_connected_components(d.n, d.succ):
        if len(comp) > 1:
            in_scc.update(comp)
    lines = ["digraph influence {", "  rankdir=LR;"]
    for v in range(g.n):
        lines.append(f"  {v} [{_node_attrs(g, v, v in in_scc)}];")
    for x in range(g.n):
        for y in d.succ[x]:
            style = "solid" if cover.successor.get(x) == y else "dashed"
            lines.append(f"  {x} -> {y} [style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def geometry_dot(g: Geometry, highlight: frozenset[int] = frozenset()) -> str:
    lines = ["graph geometry {"]
    for v in range(g.n):
        lines.append(f"  {v} [{_node_attrs(g, v, v in highlight)}];")
    for u, v in g.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


_NODE = re.compile(r"^\s*(\d+)\s*\[(.*)\];$")
_ARC = re.compile(r"^\s*(\d+)\s*(->|--)\s*(\d+)\s*(?:\[style=(\w+)\])?;$")
_LABEL = re.compile(r'label="((?:[^"\\]|\\.)*)"')


def parse_dot(text: str) -> dict:
    """Read back DOT produced by this module.

    Returns node labels, filled nodes, and arcs (or edges) with their style.
    Only the subset of DOT written here is understood.
    """
    labels: dict[int, str] = {}
    filled: set[int] = set()
    arcs: dict[tuple[int, int], str] = {}
    for line in text.splitlines():
        if m := _NODE.match(line):
            v = int(m.group(1))
            lab = _LABEL.search(m.group(2))
            labels[v] = re.sub(r"\\(.)", r"\1", lab.group(1)) if lab else str(v)
            if "style=filled" in m.group(2):
                filled.add(v)
        elif m := _ARC.match(line):
            arcs[(int(m.group(1)), int(m.group(3)))] = m.group(4) or "solid"
    return {"labels": labels, "filled": filled, "arcs": arcs}
