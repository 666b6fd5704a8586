"""Desk-scale verification: a branch-by-branch statevector simulator for
measurement patterns, and brute-force oracles for flows and path families.

Nothing here depends on the flow-finding pipeline, so the oracles can be used
to check it.  State vectors over several qubits are big-endian in ascending
vertex order: the smallest input (or output) vertex is the most significant bit.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .geometry import Geometry
from .pattern import Correct, Entangle, Measure, MeasurementPattern, Prepare

_SQRT1_2 = 1 / np.sqrt(2)
_ZERO_PROBABILITY = 1e-12


class ResourceLimit(RuntimeError):
    pass


def _guard(n: int, max_qubits: int) -> None:
    if n > max_qubits:
        raise ResourceLimit(f"{n} qubits exceeds the limit of {max_qubits}")


def normalize_phase(a: np.ndarray, eps: float = 1e-10) -> np.ndarray:
    """Rotate ``a`` so its first entry of magnitude above ``eps`` is real positive."""
    flat = a.ravel()
    big = np.flatnonzero(np.abs(flat) > eps)
    if big.size == 0:
        return a
    z = flat[big[0]]
    return a * (abs(z) / z)


def phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(normalize_phase(a) - normalize_phase(b)), initial=0.0))


class _Register:
    """Batch of unnormalized states over the live qubits, one batch row per input."""

    def __init__(self, states: np.ndarray, live: Sequence[int]):
        self.psi = states.reshape((states.shape[0],) + (2,) * len(live)).astype(complex)
        self.live = list(live)

    def axis(self, q: int) -> int:
        return 1 + self.live.index(q)

    def _slice(self, q: int, bit: int) -> tuple:
        idx = [slice(None)] * self.psi.ndim
        idx[self.axis(q)] = bit
        return tuple(idx)

    def copy(self) -> _Register:
        r = _Register.__new__(_Register)
        r.psi = self.psi.copy()
        r.live = list(self.live)
        return r

    def prepare(self, q: int) -> None:
        self.psi = np.stack([self.psi, self.psi], axis=-1) * _SQRT1_2
        self.live.append(q)

    def cz(self, u: int, v: int) -> None:
        idx = [slice(None)] * self.psi.ndim
        idx[self.axis(u)] = 1
        idx[self.axis(v)] = 1
        self.psi[tuple(idx)] *= -1

    def x(self, q: int) -> None:
        self.psi = np.flip(self.psi, axis=self.axis(q)).copy()

    def z(self, q: int) -> None:
        self.psi[self._slice(q, 1)] *= -1

    def project(self, q: int, theta: float, outcome: int) -> None:
        # <+_theta| = (<0| + e^{-i theta} <1|)/sqrt2 ; outcome 1 takes the minus sign
        bra = np.array([1.0, (-1) ** outcome * np.exp(-1j * theta)]) * _SQRT1_2
        self.psi = np.tensordot(self.psi, bra, axes=([self.axis(q)], [0]))
        self.live.remove(q)

    def output(self, order: Sequence[int]) -> np.ndarray:
        perm = [0] + [self.axis(q) for q in order]
        return np.transpose(self.psi, perm).reshape(self.psi.shape[0], -1)


def _parity(deps, signals: Mapping[int, int]) -> int:
    return sum(signals[w] for w in deps) & 1


def _apply(reg: _Register, c, signals: dict[int, int], outcomes: Mapping[int, int]) -> None:
    if isinstance(c, Prepare):
        reg.prepare(c.qubit)
    elif isinstance(c, Entangle):
        reg.cz(c.u, c.v)
    elif isinstance(c, Measure):
        theta = (-1) ** _parity(c.x_deps, signals) * c.angle + np.pi * _parity(c.z_deps, signals)
        reg.project(c.qubit, theta, outcomes[c.qubit])
        signals[c.qubit] = outcomes[c.qubit]
    elif isinstance(c, Correct):
        if _parity(c.deps, signals):
            reg.x(c.qubit) if c.axis == "X" else reg.z(c.qubit)
    else:
        raise TypeError(f"unknown command {c!r}")


def _split(p: MeasurementPattern) -> int:
    """Index of the first command whose effect depends on an outcome."""
    for i, c in enumerate(p.commands):
        if isinstance(c, (Measure, Correct)):
            return i
    return len(p.commands)


def _run_branches(p: MeasurementPattern, inputs: np.ndarray, branches):
    """Yield ``(outcomes, outputs)`` for each outcome assignment, sharing the
    outcome-independent prefix of the pattern."""
    cut = _split(p)
    base = _Register(inputs, p.inputs)
    for c in p.commands[:cut]:
        _apply(base, c, {}, {})
    for outcomes in branches:
        reg = base.copy()
        signals: dict[int, int] = {}
        for c in p.commands[cut:]:
            _apply(reg, c, signals, outcomes)
        if sorted(reg.live) != sorted(p.outputs):
            raise ValueError(f"qubits {sorted(reg.live)} remain live, expected outputs")
        yield outcomes, reg.output(p.outputs)


def _outcome_map(p: MeasurementPattern, outcomes) -> dict[int, int]:
    measured = sorted(p.measured())
    if isinstance(outcomes, Mapping):
        out = {q: int(outcomes[q]) for q in measured}
    else:
        outcomes = list(outcomes)
        if len(outcomes) != len(measured):
            raise ValueError(f"expected {len(measured)} outcomes, got {len(outcomes)}")
        out = dict(zip(measured, map(int, outcomes)))
    if any(b not in (0, 1) for b in out.values()):
        raise ValueError("outcomes must be bits")
    return out


@dataclass
class BranchReport:
    outcomes: dict[int, int]
    probability: float
    state: np.ndarray | None

    @property
    def zero_probability(self) -> bool:
        return self.state is None


def simulate_branch(
    g: Geometry,
    p: MeasurementPattern,
    input_state,
    outcomes,
    max_qubits: int = 14,
) -> BranchReport:
    """Run one outcome branch of ``p`` on ``input_state``.

    ``outcomes`` is a mapping from measured qubit to bit, or a sequence of
    bits in ascending order of measured qubit.  The returned state is over the
    outputs and normalized; it is ``None`` when the branch has probability ~0.
    """
    _guard(g.n, max_qubits)
    psi = np.asarray(input_state, dtype=complex).reshape(-1)
    if psi.size != 2 ** len(p.inputs):
        raise ValueError(f"input state must have {2 ** len(p.inputs)} amplitudes")
    omap = _outcome_map(p, outcomes)
    ((_, out),) = _run_branches(p, psi[None, :], [omap])
    out = out[0]
    prob = float(np.vdot(out, out).real)
    if prob < _ZERO_PROBABILITY:
        return BranchReport(omap, prob, None)
    return BranchReport(omap, prob, out / np.sqrt(prob))


def _basis_inputs(p: MeasurementPattern) -> np.ndarray:
    return np.eye(2 ** len(p.inputs), dtype=complex)


def extract_map(g: Geometry, p: MeasurementPattern, max_qubits: int = 14) -> np.ndarray:
    """Linear map implemented by the all-zero branch, rescaled to be unitary
    when every branch is equally likely."""
    _guard(g.n, max_qubits)
    zero = {q: 0 for q in p.measured()}
    ((_, out),) = _run_branches(p, _basis_inputs(p), [zero])
    return out.T * np.sqrt(2.0 ** len(zero))


@dataclass
class VerificationReport:
    tolerance: float
    n_branches: int
    max_branch_deviation: float
    max_probability_deviation: float
    unitarity_deviation: float
    violations: list[str] = field(default_factory=list)
    branches: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "tolerance": self.tolerance,
            "checks": {
                "determinism": self.max_branch_deviation <= self.tolerance,
                "uniform_probabilities": self.max_probability_deviation <= self.tolerance,
                "unitarity": self.unitarity_deviation <= self.tolerance,
            },
            "max_branch_deviation": self.max_branch_deviation,
            "max_probability_deviation": self.max_probability_deviation,
            "unitarity_deviation": self.unitarity_deviation,
            "violations": self.violations,
            "branches": self.branches,
        }


def check_determinism_unitarity(
    g: Geometry, p: MeasurementPattern, tol: float = 1e-9, max_qubits: int = 14
) -> VerificationReport:
    """Simulate every outcome branch on every computational basis input.

    Passes when each branch implements the same linear map as the all-zero
    branch up to one global phase, every branch has probability
    ``2**-(measured qubits)`` on every input, and that map is unitary.
    """
    _guard(g.n, max_qubits)
    measured = sorted(p.measured())
    q = len(measured)
    scale = np.sqrt(2.0**q)
    target = 2.0**-q
    branches = [dict(zip(measured, bits)) for bits in itertools.product((0, 1), repeat=q)]

    reference = None
    max_dev = max_pdev = 0.0
    table: list[dict] = []
    violations: list[str] = []
    for outcomes, out in _run_branches(p, _basis_inputs(p), branches):
        probs = np.sum(np.abs(out) ** 2, axis=1)
        pdev = float(np.max(np.abs(probs - target), initial=0.0))
        u = out.T * scale
        if reference is None:
            reference = u
        dev = phase_distance(u, reference)
        max_dev = max(max_dev, dev)
        max_pdev = max(max_pdev, pdev)
        bits = "".join(str(outcomes[m]) for m in measured)
        table.append(
            {"outcomes": bits, "probability": float(probs.mean()), "deviation": dev}
        )
        if dev > tol:
            violations.append(f"branch {bits or '-'} differs from the all-zero branch by {dev:.3g}")
        if pdev > tol:
            violations.append(f"branch {bits or '-'} probability off by {pdev:.3g}")

    assert reference is not None
    udev = float(np.max(np.abs(reference.conj().T @ reference - np.eye(reference.shape[1]))))
    if udev > tol:
        violations.append(f"implemented map is not unitary: deviation {udev:.3g}")
    return VerificationReport(
        tolerance=tol,
        n_branches=len(branches),
        max_branch_deviation=max_dev,
        max_probability_deviation=max_pdev,
        unitarity_deviation=udev,
        violations=violations,
        branches=table,
    )


# -- brute-force oracles ---------------------------------------------------


def _acyclic(n: int, arcs: Sequence[Sequence[int]]) -> bool:
    indeg = [0] * n
    for heads in arcs:
        for y in heads:
            indeg[y] += 1
    ready = [v for v in range(n) if indeg[v] == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for y in arcs[v]:
            indeg[y] -= 1
            if indeg[y] == 0:
                ready.append(y)
    return seen == n


def generator_arcs(g: Geometry, f: Mapping[int, int]) -> list[list[int]]:
    """Arcs ``x -> f(x)`` and ``x -> y`` for every ``y ~ f(x)`` other than ``x``."""
    arcs: list[list[int]] = [[] for _ in range(g.n)]
    for x, fx in f.items():
        arcs[x].append(fx)
        arcs[x].extend(y for y in g.adjacency[fx] if y != x)
    return arcs


def oracle_flows(g: Geometry, max_measured: int = 8) -> list[dict[int, int]]:
    """Every successor function admitting a flow, by exhaustive search.

    Enumerates injective ``f`` from non-outputs to non-inputs with ``x ~ f(x)``
    and keeps those whose generated relation has no directed cycle.
    """
    domain = sorted(g.non_outputs)
    if len(domain) > max_measured:
        raise ResourceLimit(f"{len(domain)} measured vertices exceeds {max_measured}")
    targets = g.non_inputs
    found: list[dict[int, int]] = []
    f: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> None:
        if i == len(domain):
            if _acyclic(g.n, generator_arcs(g, f)):
                found.append(dict(f))
            return
        x = domain[i]
        for y in g.adjacency[x]:
            if y in targets and y not in used:
                f[x] = y
                used.add(y)
                extend(i + 1)
                used.discard(y)
                del f[x]

    extend(0)
    return found


def matrix_closure(n: int, arcs: Sequence[Sequence[int]]) -> np.ndarray:
    """Reflexive-transitive closure by repeated boolean matrix squaring."""
    r = np.eye(n, dtype=bool)
    for x, heads in enumerate(arcs):
        r[x, list(heads)] = True
    while True:
        r2 = (r.astype(np.int64) @ r.astype(np.int64)) > 0
        if np.array_equal(r2, r):
            return r
        r = r2


def longest_path_depths(n: int, arcs: Sequence[Sequence[int]]) -> list[int]:
    """Number of arcs on the longest path ending at each vertex of a DAG,
    from the closure: a vertex's depth is one more than its deepest strict
    predecessor."""
    closure = matrix_closure(n, arcs)
    depth = [0] * n
    # vertices with more strict predecessors can only be deeper
    for v in sorted(range(n), key=lambda v: closure[:, v].sum()):
        preds = [u for u in range(n) if u != v and closure[u, v]]
        depth[v] = 1 + max((depth[u] for u in preds), default=-1)
    return depth


def _simple_paths(g: Geometry) -> dict[int, list[tuple[int, ...]]]:
    by_start: dict[int, list[tuple[int, ...]]] = {}
    for i in sorted(g.inputs):
        found: list[tuple[int, ...]] = []
        if i in g.outputs:
            found.append((i,))
        else:
            stack = [(i,)]
            while stack:
                path = stack.pop()
                for w in g.adjacency[path[-1]]:
                    if w in path or w in g.inputs:
                        continue
                    if w in g.outputs:
                        found.append(path + (w,))
                    else:
                        stack.append(path + (w,))
        by_start[i] = sorted(found)
    return by_start


def oracle_path_families(g: Geometry, max_n: int = 10) -> list[frozenset[tuple[int, ...]]]:
    """All maximum-size families of vertex-disjoint I->O paths.

    Paths meet I only at their first vertex and O only at their last.
    """
    if g.n > max_n:
        raise ResourceLimit(f"{g.n} vertices exceeds {max_n}")
    by_start = _simple_paths(g)
    starts = sorted(g.inputs)
    best: list[frozenset[tuple[int, ...]]] = []
    best_size = 0
    chosen: list[tuple[int, ...]] = []
    used: set[int] = set()

    def search(t: int) -> None:
        nonlocal best, best_size
        if len(chosen) + len(starts) - t < best_size:
            return
        if t == len(starts):
            if len(chosen) > best_size:
                best_size, best = len(chosen), []
            best.append(frozenset(chosen))
            return
        for path in by_start[starts[t]]:
            if used.isdisjoint(path):
                chosen.append(path)
                used.update(path)
                search(t + 1)
                used.difference_update(path)
                chosen.pop()
        search(t + 1)

    search(0)
    return best


def influencing_segments(
    g: Geometry, cover_arcs: set[tuple[int, int]], walk: Sequence[int]
) -> list[tuple[int, ...]]:
    """Split ``walk`` into influencing-walk segments relative to ``cover_arcs``.

    A segment is a cover arc ``x->y``, or ``x->z->y`` with ``x->z`` a cover arc
    and ``zy`` an edge of G used by no cover arc.  A segment has the first form
    exactly when its first two edges are both cover arcs (or only one edge is
    left).  Raises ``ValueError`` if the walk is not an influencing walk.
    """
    segments: list[tuple[int, ...]] = []
    i = 0
    last = len(walk) - 1
    while i < last:
        x, z = walk[i], walk[i + 1]
        if (x, z) not in cover_arcs:
            raise ValueError(f"{x}->{z} at step {i} is not a cover arc")
        if i + 1 == last or (z, walk[i + 2]) in cover_arcs:
            segments.append((x, z))
            i += 1
            continue
        y = walk[i + 2]
        if not g.adjacent(z, y) or (y, z) in cover_arcs:
            raise ValueError(f"{z}-{y} at step {i + 1} is not an uncovered edge")
        segments.append((x, z, y))
        i += 2
    return segments
