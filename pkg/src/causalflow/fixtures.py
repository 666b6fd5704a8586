"""Deterministic geometry families used by tests, benchmarks and ``causalflow gen``."""

from __future__ import annotations

import itertools
import random

from .geometry import Geometry


class BadParams(ValueError):
    pass


def _build(n, edges, inputs, outputs, names=None, meta=None) -> Geometry:
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    return Geometry(
        n=n,
        adjacency=tuple(tuple(sorted(a)) for a in adjacency),
        inputs=frozenset(inputs),
        outputs=frozenset(outputs),
        names=tuple(names) if names is not None else None,
        meta=meta or {},
    )


def line(n: int) -> Geometry:
    """Path 0-1-...-(n-1) with input 0 and output n-1."""
    if n < 1:
        raise BadParams("line needs at least one vertex")
    return _build(n, [(i, i + 1) for i in range(n - 1)], [0], [n - 1],
                  meta={"family": "line", "params": [n]})


def ladder(length: int, width: int = 2) -> Geometry:
    """``width`` parallel lines of ``length`` vertices, with a rung between
    neighbouring lines at every position.  Inputs are the first column and
    outputs the last, so ``k = width``.  Vertex ``(row, col)`` is ``row*length + col``.
    """
    if length < 1 or width < 1:
        raise BadParams("ladder needs positive length and width")
    idx = lambda r, c: r * length + c  # noqa: E731
    edges = [(idx(r, c), idx(r, c + 1)) for r in range(width) for c in range(length - 1)]
    edges += [(idx(r, c), idx(r + 1, c)) for r in range(width - 1) for c in range(length)]
    return _build(
        width * length,
        edges,
        [idx(r, 0) for r in range(width)],
        [idx(r, length - 1) for r in range(width)],
        meta={"family": "ladder", "params": [length, width]},
    )


def cycle(size: int) -> Geometry:
    """Cycle a0 b0 a1 b1 ... with every a_i an input and every b_i an output.

    Has a path cover but no flow for any ``size = 2t`` with ``t >= 2``.
    """
    if size < 4 or size % 2:
        raise BadParams("cycle size must be even and at least 4")
    t = size // 2
    names = [f"{side}{i}" for i in range(t) for side in "ab"]
    return _build(
        size,
        [(j, (j + 1) % size) for j in range(size)],
        range(0, size, 2),
        range(1, size, 2),
        names=names,
        meta={"family": "cycle", "params": [size]},
    )


def random_geometry(n: int, m: int, k: int, seed: int) -> Geometry:
    """``m`` edges drawn uniformly without replacement and random ``I``, ``O``
    of size ``k`` each, all from one seeded generator."""
    pairs = list(itertools.combinations(range(n), 2))
    if n < 1 or not 0 <= m <= len(pairs) or not 0 <= k <= n:
        raise BadParams(f"cannot draw m={m}, k={k} on n={n} vertices")
    rng = random.Random(seed)
    edges = rng.sample(pairs, m)
    inputs = rng.sample(range(n), k)
    outputs = rng.sample(range(n), k)
    return _build(n, edges, inputs, outputs,
                  meta={"family": "random", "params": [n, m, k], "seed": seed})


FAMILIES = {
    "line": line,
    "ladder": ladder,
    "cycle": cycle,
    "random": random_geometry,
}


def generate_fixture(family: str, *params: int, seed: int | None = None) -> Geometry:
    if family not in FAMILIES:
        raise BadParams(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
    try:
        if family == "random":
            if len(params) != 3:
                raise BadParams("random takes n m k")
            return random_geometry(*params, seed=0 if seed is None else seed)
        return FAMILIES[family](*params)
    except TypeError as e:
        raise BadParams(str(e)) from None
