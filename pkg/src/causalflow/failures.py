"""Failure records returned when a geometry has no flow.

Each record carries the evidence needed to check the verdict independently,
plus whatever partial artifacts were computed before the pipeline stopped.
Failures are falsy so ``if find_flow(g):`` reads naturally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from .causal import InfluenceDigraph, ViciousCircuitWitness
    from .pathcover import DirectedPath


@dataclass(frozen=True)
class FlowFailure:
    kind = "failure"

    def __bool__(self) -> bool:
        return False

    def to_json(self, names=None) -> dict[str, Any]:
        raise NotImplementedError


@dataclass(frozen=True)
class UnequalIO(FlowFailure):
    n_inputs: int
    n_outputs: int
    kind = "UnequalIO"

    def to_json(self, names=None):
        return {"variant": self.kind, "inputs": self.n_inputs, "outputs": self.n_outputs}


@dataclass(frozen=True)
class EdgeBoundExceeded(FlowFailure):
    m: int
    bound: int
    kind = "EdgeBoundExceeded"

    def to_json(self, names=None):
        return {"variant": self.kind, "m": self.m, "bound": self.bound}


@dataclass(frozen=True)
class NoCover(FlowFailure):
    """A maximum family of disjoint I->O paths that leaves ``uncovered`` untouched."""

    uncovered: frozenset[int]
    family: tuple[DirectedPath, ...] = ()
    kind = "NoCover"

    def to_json(self, names=None):
        label = _labeler(names)
        return {
            "variant": self.kind,
            "uncovered": [label(v) for v in sorted(self.uncovered)],
            "family": [[label(v) for v in p] for p in self.family],
        }


@dataclass(frozen=True)
class ViciousCircuit(FlowFailure):
    witness: ViciousCircuitWitness
    scc: frozenset[int]
    cover: Any = field(default=None, compare=False)
    digraph: InfluenceDigraph | None = field(default=None, compare=False)
    kind = "ViciousCircuit"

    def to_json(self, names=None):
        label = _labeler(names)
        out = {
            "variant": self.kind,
            "scc": [label(v) for v in sorted(self.scc)],
            "circuit": [label(v) for v in self.witness.circuit],
            "segments": [[label(v) for v in s] for s in self.witness.segments],
        }
        if self.cover is not None:
            out["successor"] = {label(x): label(y) for x, y in sorted(self.cover.successor.items())}
        return out


def _labeler(names):
    if names is None:
        return lambda v: v
    return lambda v: names[v]
