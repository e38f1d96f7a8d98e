from __future__ import annotations

import io
import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from efx_multigraph import (
    InstanceError,
    analyze_structure,
    build_instance,
    c4_counter,
    edge_set,
    instance_to_text,
    is_orientation,
    load_instance,
    make_allocation,
    parse_rational,
    two_coloring,
)
from efx_multigraph.model import allocation_from_json, instance_from_json


def test_parse_rational_forms():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("10") == Fraction(10)
    assert parse_rational(7) == Fraction(7)
    assert parse_rational("6/4") == Fraction(3, 2)
    for bad in ("1.5", "x", "1/0/2", True, "1e3"):
        with pytest.raises((InstanceError, ZeroDivisionError)):
            parse_rational(bad)


def test_load_running_example_shape(walkthrough):
    assert walkthrough.n == 7
    assert walkthrough.m == 18


def test_load_single_agent():
    inst = load_instance(io.StringIO('{"n": 1, "edges": []}'))
    assert inst.n == 1
    assert inst.m == 0


@pytest.mark.parametrize(
    "doc, fragment",
    [
        ('{"n": 2, "edges": [{"u": 0, "v": 1, "wu": "0", "wv": "1"}]}', "edge 0"),
        ('{"n": 2, "edges": [{"u": 0, "v": 0, "wu": "1", "wv": "1"}]}', "self-loop"),
        ('{"n": 2, "edges": [{"u": 0, "v": 5, "wu": "1", "wv": "1"}]}', "out of range"),
        ('{"n": 2, "edges": [{"u": 0, "v": 1, "wu": "a", "wv": "1"}]}', "edge 0"),
        ('{"n": 2, "edges": [{"u": 0, "v": 1, "wv": "1"}]}', "missing"),
        ('{"n": 0, "edges": []}', "positive"),
        ("[1, 2]", "object"),
        ("{", "invalid JSON"),
    ],
)
def test_load_errors(doc, fragment):
    with pytest.raises(InstanceError, match=fragment):
        load_instance(io.StringIO(doc))


def test_negative_weight_rejected():
    with pytest.raises(InstanceError, match="edge 1"):
        load_instance(io.StringIO(
            '{"n": 2, "edges": [{"u": 0, "v": 1, "wu": "1", "wv": "1"},'
            ' {"u": 0, "v": 1, "wu": "-2", "wv": "1"}]}'))


def test_edge_set(walkthrough):
    # the two edges shared by agents 1 and 4 (the pair valued 10 and 9)
    assert edge_set(walkthrough, 1, 4) == {1, 2}
    assert edge_set(walkthrough, 4, 1) == {1, 2}
    assert edge_set(walkthrough, 0, 1) == frozenset()
    with pytest.raises(ValueError):
        edge_set(walkthrough, 2, 2)


def test_edge_multiset_totals(walkthrough):
    total = sum(len(edge_set(walkthrough, i, j))
                for i in range(walkthrough.n) for j in range(i + 1, walkthrough.n))
    assert total == walkthrough.m


def test_analyze_running_example(walkthrough):
    rep = analyze_structure(walkthrough)
    assert rep.q == 2
    assert rep.family == "bipartite"
    assert rep.bipartition == ((0, 1, 2, 3), (4, 5, 6))
    assert rep.connected


def test_analyze_single_edge():
    inst = build_instance(2, [(0, 1, 3, 5)])
    rep = analyze_structure(inst)
    assert rep.q == 1
    assert rep.diameter == 1
    assert rep.family == "multi-star"


def test_analyze_c4_counter():
    rep = analyze_structure(c4_counter())
    assert rep.family == "multi-cycle"
    assert rep.q == 2
    assert rep.diameter == 2
    assert rep.longest_path == 3
    assert rep.bipartition is not None  # even cycle


def test_analyze_families():
    path4 = build_instance(4, [(0, 1, 1, 1), (1, 2, 1, 1), (2, 3, 1, 1)])
    assert analyze_structure(path4).family == "multi-tree"
    triangle = build_instance(3, [(0, 1, 1, 1), (1, 2, 1, 1), (0, 2, 1, 1)])
    assert analyze_structure(triangle).family == "multi-cycle"
    assert analyze_structure(triangle).bipartition is None
    k4_minus = build_instance(4, [(0, 1, 1, 1), (1, 2, 1, 1), (0, 2, 1, 1), (2, 3, 1, 1)])
    assert analyze_structure(k4_minus).family == "general"


def test_analyze_disconnected():
    inst = build_instance(5, [(0, 1, 1, 1), (2, 3, 1, 1), (3, 4, 2, 2), (2, 4, 1, 1)])
    rep = analyze_structure(inst)
    assert not rep.connected
    assert rep.family == "general"  # a triangle component breaks bipartiteness
    two_stars = build_instance(5, [(0, 1, 1, 1), (2, 3, 1, 1), (2, 4, 1, 1)])
    assert analyze_structure(two_stars).family == "multi-star"


def test_bipartition_two_colors(walkthrough):
    s_side, t_side = two_coloring(walkthrough)
    s_set, t_set = set(s_side), set(t_side)
    for e in walkthrough.edges:
        assert (e.u in s_set) != (e.v in s_set)
    assert s_set | t_set == set(range(walkthrough.n))
    assert not s_set & t_set
    assert 0 in s_set


def test_round_trip_canonical(walkthrough):
    text = instance_to_text(walkthrough)
    again = load_instance(io.StringIO(text))
    assert again == walkthrough
    assert instance_to_text(again) == text


def test_non_lowest_terms_normalized():
    inst = instance_from_json({"n": 2, "edges": [{"u": 0, "v": 1, "wu": "4/6", "wv": 2}]})
    assert inst.edges[0].wu == Fraction(2, 3)


def test_allocation_json_validation(walkthrough):
    alloc = allocation_from_json({"bundles": [[0], [], [], [], [], [], []]}, walkthrough)
    assert alloc.bundles[0] == {0}
    with pytest.raises(InstanceError, match="exactly 7"):
        allocation_from_json({"bundles": [[0]]}, walkthrough)
    with pytest.raises(InstanceError, match="more than one"):
        allocation_from_json({"bundles": [[0], [0], [], [], [], [], []]}, walkthrough)
    with pytest.raises(InstanceError, match="out of range"):
        allocation_from_json({"bundles": [[99], [], [], [], [], [], []]}, walkthrough)


def test_orientation_flag(walkthrough):
    orient = make_allocation(7, [{0}, {1}])
    assert is_orientation(walkthrough, orient)
    wasteful = make_allocation(7, [{8}])  # edge (2,5) given to agent 0
    assert not is_orientation(walkthrough, wasteful)


@st.composite
def instances(draw):
    n = draw(st.integers(min_value=2, max_value=6))
    m = draw(st.integers(min_value=0, max_value=10))
    edges = []
    for _ in range(m):
        u = draw(st.integers(min_value=0, max_value=n - 2))
        v = draw(st.integers(min_value=u + 1, max_value=n - 1))
        wu = Fraction(draw(st.integers(min_value=1, max_value=40)),
                      draw(st.integers(min_value=1, max_value=8)))
        wv = Fraction(draw(st.integers(min_value=1, max_value=40)),
                      draw(st.integers(min_value=1, max_value=8)))
        edges.append((u, v, wu, wv))
    return build_instance(n, edges)


@given(instances())
def test_round_trip_property(inst):
    text = instance_to_text(inst)
    assert load_instance(io.StringIO(text)) == inst
    assert json.loads(text)["n"] == inst.n
