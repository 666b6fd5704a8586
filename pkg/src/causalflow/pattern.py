"""Adaptive measurement patterns derived from a flow.

A pattern is a command list over integer qubit ids.  Signal dependencies are
sets of qubit ids whose measurement outcomes are summed mod 2.  A measurement
``Measure(v, a, xs, zs)`` is performed at angle ``(-1)**sum(xs) * a + pi * sum(zs)``.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Union

from .flowcore import Flow
from .geometry import Geometry


class InvalidFlow(ValueError):
    pass


@dataclass(frozen=True)
class Prepare:
    qubit: int


@dataclass(frozen=True)
class Entangle:
    u: int
    v: int


@dataclass(frozen=True)
class Measure:
    qubit: int
    angle: float
    x_deps: frozenset[int] = frozenset()
    z_deps: frozenset[int] = frozenset()


@dataclass(frozen=True)
class Correct:
    axis: str  # "X" or "Z"
    qubit: int
    deps: frozenset[int] = frozenset()


Command = Union[Prepare, Entangle, Measure, Correct]


@dataclass(frozen=True)
class MeasurementPattern:
    n: int
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    commands: tuple[Command, ...] = field(default=())

    def measured(self) -> list[int]:
        return [c.qubit for c in self.commands if isinstance(c, Measure)]

    def count(self, kind: type) -> int:
        return sum(1 for c in self.commands if isinstance(c, kind))

    def replace_commands(self, commands: Iterable[Command]) -> MeasurementPattern:
        return MeasurementPattern(self.n, self.inputs, self.outputs, tuple(commands))

    def to_jsonl(self) -> str:
        lines = [
            json.dumps(
                {
                    "format": "causalflow-pattern",
                    "version": 1,
                    "qubits": self.n,
                    "inputs": list(self.inputs),
                    "outputs": list(self.outputs),
                }
            )
        ]
        lines.extend(json.dumps(command_to_json(c)) for c in self.commands)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> MeasurementPattern:
        rows = [json.loads(line) for line in text.splitlines() if line.strip()]
        if not rows or rows[0].get("format") != "causalflow-pattern":
            raise ValueError("missing pattern header line")
        head = rows[0]
        return cls(
            n=head["qubits"],
            inputs=tuple(head["inputs"]),
            outputs=tuple(head["outputs"]),
            commands=tuple(command_from_json(r) for r in rows[1:]),
        )


def command_to_json(c: Command) -> dict:
    if isinstance(c, Prepare):
        return {"op": "N", "qubit": c.qubit}
    if isinstance(c, Entangle):
        return {"op": "E", "qubits": [c.u, c.v]}
    if isinstance(c, Measure):
        return {
            "op": "M",
            "qubit": c.qubit,
            "angle": c.angle,
            "xdeps": sorted(c.x_deps),
            "zdeps": sorted(c.z_deps),
        }
    return {"op": c.axis, "qubit": c.qubit, "deps": sorted(c.deps)}


def command_from_json(row: Mapping) -> Command:
    op = row["op"]
    if op == "N":
        return Prepare(row["qubit"])
    if op == "E":
        u, v = row["qubits"]
        return Entangle(u, v)
    if op == "M":
        return Measure(
            row["qubit"], float(row["angle"]), frozenset(row["xdeps"]), frozenset(row["zdeps"])
        )
    if op in ("X", "Z"):
        return Correct(op, row["qubit"], frozenset(row["deps"]))
    raise ValueError(f"unknown pattern op {op!r}")


def angle_assignment(g: Geometry, angles: Mapping[int, float] | None = None) -> dict[int, float]:
    """Angles for every measured qubit, defaulting to the geometry's own."""
    out = {v: g.angles[v] for v in sorted(g.non_outputs)}
    for v, a in (angles or {}).items():
        if v not in out:
            raise ValueError(f"vertex {v} is not measured and cannot carry an angle")
        out[v] = float(a)
    return out


def _flow_conditions_hold(g: Geometry, flow: Flow) -> bool:
    f, le = flow.successor, flow.order.leq
    if set(f) != set(g.non_outputs):
        return False
    for x, fx in f.items():
        if fx in g.inputs or not g.adjacent(x, fx) or not le(x, fx):
            return False
        if not all(le(x, y) for y in g.adjacency[fx]):
            return False
    return True


def measurement_order(g: Geometry, flow: Flow) -> list[int]:
    depth = flow.order.layer_of()
    return sorted(g.non_outputs, key=lambda v: (depth[v], v))


def derive_pattern(
    g: Geometry,
    flow: Flow,
    angles: Mapping[int, float] | None = None,
    raw_corrections: bool = False,
) -> MeasurementPattern:
    """Build the measurement pattern driven by ``flow``.

    By default the byproducts of each measurement are absorbed into later
    measurement angles, leaving Pauli corrections only on the outputs.  With
    ``raw_corrections`` every measurement is instead followed directly by its
    byproduct corrections and no angle is adapted.
    """
    if not _flow_conditions_hold(g, flow):
        raise InvalidFlow("flow conditions do not hold for this geometry")
    alpha = angle_assignment(g, angles)
    f, pred = flow.successor, flow.predecessor

    commands: list[Command] = [Prepare(v) for v in sorted(g.non_inputs)]
    commands.extend(Entangle(u, v) for u, v in g.edges())
    order = measurement_order(g, flow)

    if raw_corrections:
        for v in order:
            commands.append(Measure(v, alpha[v]))
            fv = f[v]
            commands.append(Correct("X", fv, frozenset({v})))
            commands.extend(
                Correct("Z", y, frozenset({v})) for y in g.adjacency[fv] if y != v
            )
    else:
        z_from: dict[int, set[int]] = {}
        for w, fw in f.items():
            for y in g.adjacency[fw]:
                if y != w:
                    z_from.setdefault(y, set()).add(w)
        for v in order:
            xs = frozenset({pred[v]}) if v in pred else frozenset()
            commands.append(Measure(v, alpha[v], xs, frozenset(z_from.get(v, ()))))
        for o in sorted(g.outputs):
            if o in pred:
                commands.append(Correct("X", o, frozenset({pred[o]})))
            if z_from.get(o):
                commands.append(Correct("Z", o, frozenset(z_from[o])))

    return MeasurementPattern(
        n=g.n,
        inputs=tuple(sorted(g.inputs)),
        outputs=tuple(sorted(g.outputs)),
        commands=tuple(commands),
    )


def signal_shift(p: MeasurementPattern) -> MeasurementPattern:
    """Remove every Z-type dependency from measurements.

    A measurement at ``a + pi*s`` equals the measurement at ``a`` with its
    outcome flipped by ``s``.  So the signal of ``v`` is redefined as its raw
    outcome plus ``s``, and every later use of it is rewritten accordingly.
    Dependency sets then refer to raw outcomes.
    """
    expr: dict[int, frozenset[int]] = {}

    def rewrite(deps: frozenset[int]) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for w in deps:
            out = out ^ expr.get(w, frozenset({w}))
        return out

    commands: list[Command] = []
    for c in p.commands:
        if isinstance(c, Measure):
            xs, zs = rewrite(c.x_deps), rewrite(c.z_deps)
            expr[c.qubit] = frozenset({c.qubit}) ^ zs
            commands.append(Measure(c.qubit, c.angle, xs, frozenset()))
        elif isinstance(c, Correct):
            deps = rewrite(c.deps)
            if deps:
                commands.append(Correct(c.axis, c.qubit, deps))
        else:
            commands.append(c)
    return p.replace_commands(commands)


def _touched(c: Command) -> tuple[int, ...]:
    if isinstance(c, Entangle):
        return (c.u, c.v)
    return (c.qubit,)


def _deps(c: Command) -> frozenset[int]:
    if isinstance(c, Measure):
        return c.x_deps | c.z_deps
    if isinstance(c, Correct):
        return c.deps
    return frozenset()


def pattern_violations(p: MeasurementPattern) -> list[str]:
    """Check the well-formedness rules for a measurement pattern.

    Each qubit is prepared at most once and measured at most once, no signal
    is used before its qubit is measured, non-inputs start with a preparation,
    non-outputs end with a measurement, and measured qubits are not touched again.
    """
    inputs, outputs = set(p.inputs), set(p.outputs)
    out: list[str] = []
    prepared: set[int] = set()
    measured: set[int] = set()
    seen: set[int] = set()
    for i, c in enumerate(p.commands):
        for w in sorted(_deps(c)):
            if w not in measured:
                out.append(f"command {i} uses signal of {w} before it is measured")
        for q in _touched(c):
            if not 0 <= q < p.n:
                out.append(f"command {i} touches unknown qubit {q}")
                continue
            if q in measured:
                out.append(f"command {i} touches qubit {q} after its measurement")
            if q not in inputs and q not in seen and not isinstance(c, Prepare):
                out.append(f"command {i}: first operation on non-input {q} is not a preparation")
            seen.add(q)
        if isinstance(c, Prepare):
            if c.qubit in prepared or c.qubit in inputs:
                out.append(f"qubit {c.qubit} prepared twice or prepared as an input")
            prepared.add(c.qubit)
        if isinstance(c, Measure):
            if c.qubit in outputs:
                out.append(f"output qubit {c.qubit} is measured")
            measured.add(c.qubit)
    for q in range(p.n):
        if q not in outputs and q not in measured:
            out.append(f"non-output qubit {q} is never measured")
    return out
