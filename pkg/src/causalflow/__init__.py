"""Find causal flows of measurement geometries with equal input and output counts."""

from .causal import (
    CausalOrder,
    CyclicOrder,
    InfluenceDigraph,
    ViciousCircuitWitness,
    compute_order,
    depth_layers,
    detect_vicious_circuit,
    influence_digraph,
    leq,
)
from .failures import EdgeBoundExceeded, FlowFailure, NoCover, UnequalIO, ViciousCircuit
from .flowcore import Flow, check_flow, find_flow
from .geometry import Geometry, flow_edge_bound, from_edges, neighbors, serialize, validate
from .pathcover import PathCover, build_network, max_disjoint_paths, max_flow, to_path_cover
from .pattern import MeasurementPattern, derive_pattern, signal_shift

__all__ = [
    "CausalOrder",
    "CyclicOrder",
    "EdgeBoundExceeded",
    "Flow",
    "FlowFailure",
    "Geometry",
    "InfluenceDigraph",
    "MeasurementPattern",
    "NoCover",
    "PathCover",
    "UnequalIO",
    "ViciousCircuit",
    "ViciousCircuitWitness",
    "build_network",
    "check_flow",
    "compute_order",
    "depth_layers",
    "derive_pattern",
    "detect_vicious_circuit",
    "find_flow",
    "flow_edge_bound",
    "from_edges",
    "influence_digraph",
    "leq",
    "max_disjoint_paths",
    "max_flow",
    "neighbors",
    "serialize",
    "signal_shift",
    "to_path_cover",
    "validate",
]
