import random

from hypothesis import given, settings
from hypothesis import strategies as st

from causalflow.failures import NoCover
from causalflow.fixtures import cycle, random_geometry
from causalflow.geometry import from_edges
from causalflow.pathcover import (
    PathCover,
    build_network,
    decompose,
    max_disjoint_paths,
    max_flow,
    to_path_cover,
)
from causalflow.simverify import oracle_path_families


def arc_labels(net):
    return {(net.label(u), net.label(v)) for u, v in net.arcs}


def test_line_network(L3):
    net = build_network(L3)
    assert net.n_nodes == 8
    assert arc_labels(net) == {
        ("r", "0_in"), ("0_in", "0_out"), ("0_out", "1_in"), ("1_out", "0_in"),
        ("1_in", "1_out"), ("1_out", "2_in"), ("2_out", "1_in"), ("2_in", "2_out"),
        ("2_out", "s"),
    }
    assert max_flow(net).value == 1


def test_flow_values(P2x2, C6):
    assert max_flow(build_network(P2x2)).value == 2
    # size of a maximum family, from brute-force enumeration
    assert {len(f) for f in oracle_path_families(C6)} == {3}
    assert max_flow(build_network(C6)).value == 3


def test_flow_is_conserved(C6):
    net = max_flow(build_network(C6))
    for node in range(2, net.n_nodes):
        assert net.net_flow(node) == 0


def test_families(L3, P2x2, C6):
    assert max_disjoint_paths(L3) == [(0, 1, 2)]
    assert max_disjoint_paths(P2x2) == [(0, 2), (1, 3)]
    family = max_disjoint_paths(C6)
    assert len(family) == 3
    assert frozenset(family) in oracle_path_families(C6)


def test_cover_of_line(L3):
    c = to_path_cover(L3, [(0, 1, 2)])
    assert isinstance(c, PathCover)
    assert c.successor == {0: 1, 1: 2}
    assert c.predecessor == {1: 0, 2: 1}


def test_uncovered_vertex():
    g = from_edges(3, [(0, 2)], [0], [2])
    result = to_path_cover(g, max_disjoint_paths(g))
    assert isinstance(result, NoCover)
    assert result.uncovered == frozenset({1})
    assert not result


def test_cycle_cover_straight(C6):
    a = [C6.index(f"a{i}") for i in range(3)]
    b = [C6.index(f"b{i}") for i in range(3)]
    c = to_path_cover(C6, [(a[i], b[i]) for i in range(3)])
    assert c.successor == {a[i]: b[i] for i in range(3)}


def test_trivial_paths_for_shared_io(IO_ID):
    c = to_path_cover(IO_ID, max_disjoint_paths(IO_ID))
    assert c.paths == ((0,),)
    assert c.successor == {}


def test_bad_family_rejected(L3):
    import pytest

    with pytest.raises(ValueError):
        to_path_cover(L3, [(0, 2)])
    with pytest.raises(ValueError):
        to_path_cover(L3, [(1, 2)])


def random_small(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 7)
    m = rng.randint(0, n * (n - 1) // 2)
    k = rng.randint(0, n)
    return random_geometry(n, m, k, seed)


def test_size_matches_enumeration():
    for seed in range(600):
        g = random_small(seed)
        fams = oracle_path_families(g)
        best = len(next(iter(fams))) if fams else 0
        assert len(max_disjoint_paths(g)) == best, seed


def test_implicit_and_explicit_networks_agree():
    for seed in range(1500):
        g = random_small(seed)
        explicit = sorted(decompose(max_flow(build_network(g)), g))
        assert max_disjoint_paths(g) == explicit, seed


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_family_paths_are_disjoint_io_walks(seed):
    g = random_small(seed)
    seen = set()
    for p in max_disjoint_paths(g):
        assert p[0] in g.inputs and p[-1] in g.outputs
        assert not any(v in g.inputs for v in p[1:])
        assert not any(v in g.outputs for v in p[:-1])
        assert all(g.adjacent(x, y) for x, y in zip(p, p[1:]))
        assert seen.isdisjoint(p)
        seen.update(p)


def test_cycles_have_two_families():
    for t in range(2, 5):
        assert len(oracle_path_families(cycle(2 * t))) == 2
