import random

import pytest

from causalflow import find_flow
from causalflow.fixtures import cycle, line, random_geometry
from causalflow.geometry import from_edges


@pytest.fixture
def L3():
    return line(3)


@pytest.fixture
def C6():
    return cycle(6)


@pytest.fixture
def P2x2():
    return from_edges(4, [(0, 2), (1, 3)], [0, 1], [2, 3])


@pytest.fixture
def TRIANGLE1():
    return from_edges(3, [(0, 1), (1, 2), (0, 2)], [0], [2])


@pytest.fixture
def IO_ID():
    return from_edges(1, [], [0], [0])


@pytest.fixture
def EDGE():
    return from_edges(2, [(0, 1)], [0], [1])


def flow_geometries(count, seed, max_n=10, max_k=3, keep=bool):
    """Seeded random geometries whose ``find_flow`` result satisfies ``keep``.

    Built as k disjoint paths plus a few random extra edges, so every candidate
    has a path cover and a good share of them have a flow.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, max_n)
        k = rng.randint(1, min(max_k, n // 2 if n > 1 else 1))
        order = list(range(n))
        rng.shuffle(order)
        cuts = sorted(rng.sample(range(1, n), k - 1)) if k > 1 else []
        paths = [order[a:b] for a, b in zip([0] + cuts, cuts + [n])]
        edges = {tuple(sorted(e)) for p in paths for e in zip(p, p[1:])}
        for _ in range(rng.randint(0, n)):
            u, v = rng.sample(range(n), 2)
            edges.add((min(u, v), max(u, v)))
        g = from_edges(n, sorted(edges), [p[0] for p in paths], [p[-1] for p in paths])
        if keep(find_flow(g)):
            out.append(g)
    return out


def random_equal_io(seed, max_n=8):
    rng = random.Random(seed)
    n = rng.randint(1, max_n)
    m = rng.randint(0, min(n * (n - 1) // 2, 2 * n))
    k = rng.randint(1, n)
    g = random_geometry(n, m, k, seed)
    return g
