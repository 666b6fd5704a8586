import math
import random

import pytest

from causalflow import find_flow
from causalflow.fixtures import line
from causalflow.flowcore import Flow
from causalflow.pattern import (
    Correct,
    Entangle,
    InvalidFlow,
    Measure,
    MeasurementPattern,
    Prepare,
    derive_pattern,
    pattern_violations,
    signal_shift,
)
from causalflow.simverify import check_determinism_unitarity, extract_map, phase_distance

from conftest import flow_geometries

fs = frozenset


def random_angles(g, rng):
    return {v: rng.uniform(-math.pi, math.pi) for v in g.non_outputs}


def test_line_pattern(L3):
    p = derive_pattern(L3, find_flow(L3), {0: 0.3, 1: -1.1})
    assert list(p.commands) == [
        Prepare(1), Prepare(2), Entangle(0, 1), Entangle(1, 2),
        Measure(0, 0.3, fs(), fs()), Measure(1, -1.1, fs({0}), fs()),
        Correct("X", 2, fs({1})), Correct("Z", 2, fs({0})),
    ]


def test_identity_pattern_is_empty(IO_ID):
    assert derive_pattern(IO_ID, find_flow(IO_ID)).commands == ()


def test_parallel_pattern(P2x2):
    p = derive_pattern(P2x2, find_flow(P2x2))
    measures = [c for c in p.commands if isinstance(c, Measure)]
    assert measures == [Measure(0, 0.0), Measure(1, 0.0)]
    assert [c for c in p.commands if isinstance(c, Correct)] == [
        Correct("X", 2, fs({0})), Correct("X", 3, fs({1})),
    ]


def test_geometry_angles_are_default():
    from causalflow.geometry import validate

    g = validate({"vertices": 2, "edges": [[0, 1]], "inputs": [0], "outputs": [1], "angles": {"0": 0.4}})
    (m,) = [c for c in derive_pattern(g, find_flow(g)).commands if isinstance(c, Measure)]
    assert m.angle == 0.4


def test_angle_on_output_rejected(L3):
    with pytest.raises(ValueError):
        derive_pattern(L3, find_flow(L3), {2: 1.0})


def test_invalid_flow_rejected(L3):
    good = find_flow(L3)
    bad = Flow(L3, {0: 1, 1: 0}, good.order, good.cover, good.digraph)
    with pytest.raises(InvalidFlow):
        derive_pattern(L3, bad)


def test_counts_validity_and_causality():
    rng = random.Random(0)
    for g in flow_geometries(200, seed=21, max_n=10):
        flow = find_flow(g)
        for raw in (False, True):
            p = derive_pattern(g, flow, random_angles(g, rng), raw_corrections=raw)
            assert p.count(Prepare) == len(g.non_inputs)
            assert p.count(Entangle) == g.m
            assert p.count(Measure) == len(g.non_outputs)
            assert pattern_violations(p) == []
            for c in p.commands:
                deps = (c.x_deps | c.z_deps) if isinstance(c, Measure) else getattr(c, "deps", fs())
                for w in deps:
                    assert flow.leq(w, c.qubit) and w != c.qubit


def test_violations_detected(L3):
    p = derive_pattern(L3, find_flow(L3))
    swapped = list(p.commands)
    swapped[4], swapped[5] = swapped[5], swapped[4]
    assert any("before it is measured" in v for v in pattern_violations(p.replace_commands(swapped)))
    twice = list(p.commands) + [Measure(0, 0.0)]
    assert any("after its measurement" in v for v in pattern_violations(p.replace_commands(twice)))
    unprepared = list(p.commands[1:])
    assert any("not a preparation" in v for v in pattern_violations(p.replace_commands(unprepared)))


def test_jsonl_round_trip():
    rng = random.Random(1)
    for g in flow_geometries(30, seed=2):
        p = derive_pattern(g, find_flow(g), random_angles(g, rng))
        text = p.to_jsonl()
        assert MeasurementPattern.from_jsonl(text) == p
        assert MeasurementPattern.from_jsonl(text).to_jsonl() == text


def test_jsonl_line_format(L3):
    lines = derive_pattern(L3, find_flow(L3), {0: 0.0, 1: 0.5}).to_jsonl().splitlines()
    assert lines[0] == '{"format": "causalflow-pattern", "version": 1, "qubits": 3, "inputs": [0], "outputs": [2]}'
    assert lines[1] == '{"op": "N", "qubit": 1}'
    assert lines[3] == '{"op": "E", "qubits": [0, 1]}'
    assert lines[6] == '{"op": "M", "qubit": 1, "angle": 0.5, "xdeps": [0], "zdeps": []}'
    assert lines[7] == '{"op": "X", "qubit": 2, "deps": [1]}'


def test_shift_without_z_deps_is_identity(L3, P2x2):
    for g in (L3, P2x2):
        p = derive_pattern(g, find_flow(g), {v: 0.7 for v in g.non_outputs})
        assert signal_shift(p) == p


def test_shift_rewrites_downstream_signals():
    g = line(4)
    p = derive_pattern(g, find_flow(g), {0: 0.1, 1: 0.2, 2: 0.3})
    assert Measure(2, 0.3, fs({1}), fs({0})) in p.commands
    q = signal_shift(p)
    assert [c for c in q.commands if isinstance(c, Measure)] == [
        Measure(0, 0.1), Measure(1, 0.2, fs({0})), Measure(2, 0.3, fs({1})),
    ]
    # s2 now stands for raw outcome 2 plus s0, so X on 3 depends on {0, 2}
    assert Correct("X", 3, fs({0, 2})) in q.commands
    assert phase_distance(extract_map(g, p), extract_map(g, q)) < 1e-9
    assert check_determinism_unitarity(g, q, 1e-9).passed


def test_dropping_z_deps_without_rewrite_is_caught():
    g = line(4)
    p = derive_pattern(g, find_flow(g), {0: 0.1, 1: 0.2, 2: 0.3})
    naive = [Measure(c.qubit, c.angle, c.x_deps) if isinstance(c, Measure) else c for c in p.commands]
    assert not check_determinism_unitarity(g, p.replace_commands(naive), 1e-9).passed


def test_shift_and_raw_forms_match_simulator():
    rng = random.Random(4)
    for g in flow_geometries(60, seed=8, max_n=9):
        flow = find_flow(g)
        angles = random_angles(g, rng)
        p = derive_pattern(g, flow, angles)
        ref = extract_map(g, p)
        assert phase_distance(ref, extract_map(g, signal_shift(p))) < 1e-9
        assert check_determinism_unitarity(g, signal_shift(p), 1e-9).passed
        assert phase_distance(ref, extract_map(g, derive_pattern(g, flow, angles, raw_corrections=True))) < 1e-9
        assert not any(isinstance(c, Measure) and c.z_deps for c in signal_shift(p).commands)
