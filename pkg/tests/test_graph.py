"""Metric-layer tests: exact distances, neighborhoods, subdivision, power graphs."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wdcolor.graph import (
    INF,
    GraphError,
    WeightedGraph,
    as_fraction,
    ceil_frac,
    neighborhood,
    parse_edge_list,
    power_graph,
    subdivision_graph,
    weak_diameter,
    write_edge_list,
)

import oracles
from strategies import rationals, weighted_graphs, random_connected_graph


def path_graph(weights):
    n = len(weights) + 1
    return WeightedGraph(range(n), [(i, i + 1, w) for i, w in enumerate(weights)])


def unit_grid(rows, cols):
    def vid(r, c):
        return r * cols + c

    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1), 1))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c), 1))
    return WeightedGraph(range(rows * cols), edges)


# -- construction and validation ------------------------------------------


def test_rejects_nonpositive_weight():
    with pytest.raises(GraphError):
        WeightedGraph([0, 1], [(0, 1, 0)])
    with pytest.raises(GraphError):
        WeightedGraph([0, 1], [(0, 1, Fraction(-1, 2))])


def test_rejects_self_loop_and_unknown_vertex():
    with pytest.raises(GraphError):
        WeightedGraph([0], [(0, 0, 1)])
    with pytest.raises(GraphError):
        WeightedGraph([0, 1], [(0, 2, 1)])


def test_parallel_edges_allowed():
    g = WeightedGraph([0, 1], [(0, 1, 2), (0, 1, 3)])
    assert len(g.edges) == 2
    assert g.shortest_distance(0, 1) == 2


def test_rejects_float_weight():
    with pytest.raises(TypeError):
        WeightedGraph([0, 1], [(0, 1, 0.5)])


# -- distances --------------------------------------------------------------


def test_path_distance_sums_weights():
    g = path_graph([Fraction(2), Fraction(3)])
    assert g.shortest_distance(0, 2) == 5
    assert g.shortest_distance(0, 0) == 0


def test_disconnected_pair_is_infinite():
    g = WeightedGraph([0, 1, 2, 3], [(0, 1, 1), (2, 3, 1)])
    d = g.shortest_distance(0, 3)
    assert d is INF
    assert d > Fraction(10**9)


def test_distance_symmetric_and_triangle_small():
    g = random_connected_graph(random.Random(7), 9, 6)
    dist = oracles.all_pairs_distances(g)
    for u in g.vertices:
        for v in g.vertices:
            assert g.shortest_distance(u, v) == dist[(u, v)]


@settings(max_examples=60, deadline=None)
@given(weighted_graphs(max_n=9))
def test_distances_match_oracle(g):
    dist = oracles.all_pairs_distances(g)
    for u in g.vertices:
        got = g.distances_from([u])
        for v in g.vertices:
            want = dist[(u, v)]
            if want is INF:
                assert v not in got
            else:
                assert got[v] == want


def test_truncated_search_respects_radius_and_subset():
    g = path_graph([1, 1, 1, 1])
    d = g.distances_from([0], radius=2)
    assert set(d) == {0, 1, 2}
    d2 = g.distances_from([0], within=frozenset({0, 1}))
    assert set(d2) == {0, 1}
    d3 = g.distances_from([0], max_weight=Fraction(1, 2))
    assert set(d3) == {0}


# -- neighborhoods ----------------------------------------------------------


def test_neighborhood_path_example():
    g = path_graph([Fraction(2), Fraction(3)])
    assert neighborhood(g, {0}, 2) == {0, 1}


def test_neighborhood_empty_seed():
    g = path_graph([1])
    assert neighborhood(g, set(), 5) == set()


def test_neighborhood_grid_center():
    g = unit_grid(3, 3)
    center = 4
    assert neighborhood(g, {center}, 1) == {1, 3, 4, 5, 7}


def test_neighborhood_zero_radius_is_seed():
    g = path_graph([1, 1])
    assert neighborhood(g, {1}, 0) == {1}


@settings(max_examples=40, deadline=None)
@given(weighted_graphs(max_n=8), rationals(), rationals())
def test_neighborhood_monotone(g, r1, r2):
    lo, hi = min(r1, r2), max(r1, r2)
    s = {g.vertices[0]}
    small = neighborhood(g, s, lo)
    big = neighborhood(g, s, hi)
    assert small <= big
    assert neighborhood(g, small, hi) >= small


# -- weak diameter ----------------------------------------------------------


def test_weak_diameter_trivial_cases():
    g = unit_grid(2, 2)
    assert weak_diameter(g, {0}) == 0
    assert weak_diameter(g, set()) == 0


def test_weak_diameter_cycle_opposite():
    g = WeightedGraph(range(4), [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)])
    assert weak_diameter(g, {0, 2}) == 2


def test_weak_diameter_across_components():
    g = WeightedGraph([0, 1, 2], [(0, 1, 1)])
    assert weak_diameter(g, {0, 2}) is INF


def test_weak_diameter_uses_host_graph():
    # two far ends of a path plus a shortcut outside the set
    g = WeightedGraph(range(4), [(0, 1, 5), (1, 2, 5), (0, 3, 1), (3, 2, 1)])
    assert weak_diameter(g, {0, 2}) == 2


@settings(max_examples=40, deadline=None)
@given(weighted_graphs(max_n=8), st.sets(st.integers(min_value=0, max_value=7)))
def test_weak_diameter_matches_oracle(g, s):
    s = {v for v in s if g.has_vertex(v)}
    assert weak_diameter(g, s) == oracles.brute_weak_diameter(g, s)


# -- subdivision graph -------------------------------------------------------


def test_subdivision_weight5_r2():
    g = WeightedGraph([0, 1], [(0, 1, 5)])
    sub = subdivision_graph(g, 2)
    p0, p1 = sub.edge_paths[0]
    assert len(p0) == 4 and len(p1) == 4  # 3 edges each
    # weights from the designated end: 1, 2, 2
    wmap = {}
    for (u, v, w) in sub.graph.edges:
        wmap[(u, v)] = w
        wmap[(v, u)] = w
    for path, end in ((p0, 0), (p1, 1)):
        assert path[0] == end
        ws = [wmap[(path[i], path[i + 1])] for i in range(3)]
        assert ws == [Fraction(1), Fraction(2), Fraction(2)]
        assert sum(ws) == 5


def test_subdivision_duplicates_when_weight_at_most_r():
    g = WeightedGraph([0, 1], [(0, 1, 2)])
    sub = subdivision_graph(g, 2)
    assert len(sub.graph) == 2
    assert sorted(w for (_, _, w) in sub.graph.edges) == [2, 2]


def test_subdivision_weights_in_range():
    g = random_connected_graph(random.Random(3), 8, 5)
    r = Fraction(3, 4)
    sub = subdivision_graph(g, r)
    assert all(0 < w <= r for (_, _, w) in sub.graph.edges)


def test_subdivision_rejects_bad_r():
    g = path_graph([1])
    with pytest.raises(GraphError):
        subdivision_graph(g, 0)


@settings(max_examples=50, deadline=None)
@given(weighted_graphs(max_n=8), rationals())
def test_subdivision_preserves_distances(g, r):
    sub = subdivision_graph(g, r)
    for u in g.vertices:
        dg = g.distances_from([u])
        ds = sub.graph.distances_from([u])
        for v in g.vertices:
            assert dg.get(v) == ds.get(v)


# -- power graph --------------------------------------------------------------


def test_power_graph_unit_path_scale2():
    g = path_graph([1, 1, 1, 1])
    p = power_graph(g, 2)
    expect = {(u, v) for u in range(5) for v in range(5) if u < v and v - u <= 2}
    assert set(p.edge_list()) == expect


def test_power_graph_single_vertex():
    g = WeightedGraph([0])
    p = power_graph(g, 7)
    assert p.vertices == (0,)
    assert p.edge_list() == []


def test_power_graph_weight3_scale1_is_six_cycle():
    g = WeightedGraph([0, 1], [(0, 1, 3)])
    p = power_graph(g, 1)
    assert len(p.vertices) == 6
    assert set(p.edge_list()) == oracles.brute_power_edges(g, Fraction(1))
    assert all(len(p.neighbors(v)) == 2 for v in p.vertices)


@settings(max_examples=40, deadline=None)
@given(weighted_graphs(max_n=6, max_extra_edges=6), rationals(max_num=6, max_den=4))
def test_power_graph_matches_brute_force(g, ell):
    p = power_graph(g, ell)
    assert set(p.edge_list()) == oracles.brute_power_edges(g, ell)


def test_hop_bound_from_metric_distance():
    # pairs at metric distance <= k are within ceil(2k/ell) power-graph hops
    rng = random.Random(11)
    for trial in range(20):
        ell = Fraction(rng.randint(1, 4), rng.randint(1, 3))
        g = random_connected_graph(rng, 8, 5, max_weight=ell)
        p = power_graph(g, ell)
        for u in g.vertices:
            dm = g.distances_from([u])
            dh = p.hop_distances([u])
            for v in g.vertices:
                k = dm[v]
                bound = ceil_frac(2 * k / ell)
                assert dh[v] <= bound


# -- edge-list round trip ------------------------------------------------------


def test_edge_list_round_trip():
    g = WeightedGraph([0, 1, 2, 5], [(0, 1, Fraction(1, 3)), (1, 2, Fraction(7, 2))])
    text = write_edge_list(g)
    h = parse_edge_list(text)
    assert h.vertices == g.vertices
    assert sorted(h.edges) == sorted(g.edges)


def test_edge_list_parses_decimals_and_comments():
    g = parse_edge_list("# demo\n0 1 0.25  # quarter\n1 2 3/2\n7\n")
    assert g.vertices == (0, 1, 2, 7)
    ws = sorted(w for (_, _, w) in g.edges)
    assert ws == [Fraction(1, 4), Fraction(3, 2)]


def test_edge_list_rejects_garbage():
    with pytest.raises(GraphError):
        parse_edge_list("0 1\n")
    with pytest.raises(GraphError):
        parse_edge_list("0 1 -2\n")


def test_as_fraction_forms():
    assert as_fraction("3/4") == Fraction(3, 4)
    assert as_fraction("0.125") == Fraction(1, 8)
    assert as_fraction(2) == 2
    with pytest.raises(TypeError):
        as_fraction(0.1)
