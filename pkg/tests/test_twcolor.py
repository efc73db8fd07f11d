"""Tree-decomposition search, adhesion constructions, two-coloring engine."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wdcolor.graph import GraphError, WeightedGraph
from wdcolor.partition import Coloring, ContractViolation
from wdcolor.patching import centered_bound, patch_bound, vertex_cover_bound
from wdcolor.treedec import RootedTreeDecomposition, con_color_bound, validate_td
from wdcolor.twcolor import (
    AdhesionConstruction,
    BagColorer,
    color_adhesion_construction,
    color_bounded_treewidth,
    compute_tree_decomposition,
    constant_bag_colorer,
    cover_bag_colorer,
    tree_extension_bound,
    treewidth_color_bound,
)

import oracles
from strategies import random_connected_graph, weighted_graphs


def unit_path(n):
    return WeightedGraph(range(n), [(i, i + 1, 1) for i in range(n - 1)])


def path_td(n):
    bags = {t: {t, t + 1} for t in range(n - 1)}
    return RootedTreeDecomposition(bags, [(t, t + 1) for t in range(n - 2)], 0)


def grid_graph(rows, cols):
    def vid(i, j):
        return i * cols + j

    edges = []
    for i in range(rows):
        for j in range(cols):
            if i + 1 < rows:
                edges.append((vid(i, j), vid(i + 1, j), 1))
            if j + 1 < cols:
                edges.append((vid(i, j), vid(i, j + 1), 1))
    return WeightedGraph(range(rows * cols), edges)


def band_graph(n, k):
    """Path power: edges (i, i+j) for j <= k; treewidth exactly k."""
    edges = [(i, i + j, 1) for i in range(n) for j in range(1, k + 1) if i + j < n]
    return WeightedGraph(range(n), edges)


def theta2() -> BagColorer:
    return cover_bag_colorer(2, 1)


# -- tree-decomposition search ---------------------------------------------


def test_td_of_tree_has_width_one():
    g = WeightedGraph(range(7), [(0, 1, 1), (0, 2, 1), (1, 3, 1), (1, 4, 1), (2, 5, 1), (2, 6, 1)])
    td = compute_tree_decomposition(g)
    assert td.width == 1
    assert validate_td(g, td)["ok"]


def test_td_of_band_graph_exact():
    for k in (1, 2, 3):
        td = compute_tree_decomposition(band_graph(12, k))
        assert td.width == k


def test_td_of_grid_exact():
    td = compute_tree_decomposition(grid_graph(4, 4))
    assert td.width == 4
    assert validate_td(grid_graph(4, 4), td)["ok"]


def test_td_of_clique():
    td = compute_tree_decomposition(WeightedGraph(range(5), [(u, v, 1) for u in range(5) for v in range(u + 1, 5)]))
    assert td.width == 4
    assert len(td) >= 1


def test_td_heuristic_beyond_exact_cap():
    g = unit_path(40)
    td = compute_tree_decomposition(g, exact_max=20)
    assert td.width == 1
    assert validate_td(g, td)["ok"]


def test_td_target_width_exact_error():
    with pytest.raises(GraphError, match="treewidth 4"):
        compute_tree_decomposition(grid_graph(4, 4), target_width=3)


def test_td_target_width_heuristic_error_mentions_user_supplied():
    g = grid_graph(5, 6)
    with pytest.raises(GraphError, match="supply a decomposition"):
        compute_tree_decomposition(g, target_width=1, exact_max=10)


def test_td_target_width_met_is_quiet():
    td = compute_tree_decomposition(unit_path(9), target_width=1)
    assert td.width == 1


def test_td_empty_and_single():
    td0 = compute_tree_decomposition(WeightedGraph([], []))
    assert len(td0) == 1 and td0.bags[td0.root] == frozenset()
    td1 = compute_tree_decomposition(WeightedGraph([3], []))
    assert td1.width == 0


def test_td_deterministic():
    g = grid_graph(3, 4)
    a = compute_tree_decomposition(g)
    b = compute_tree_decomposition(g)
    assert a.bags == b.bags and a.tree_edges == b.tree_edges and a.root == b.root


@settings(max_examples=40, deadline=None)
@given(weighted_graphs(max_n=9))
def test_td_random_graphs_valid(g):
    td = compute_tree_decomposition(g)
    rep = validate_td(g, td)
    assert rep["ok"]


@settings(max_examples=15, deadline=None)
@given(weighted_graphs(max_n=8, max_extra_edges=10))
def test_td_exact_never_wider_than_heuristic(g):
    wide = compute_tree_decomposition(g, exact_max=0).width
    tight = compute_tree_decomposition(g, exact_max=8).width
    assert tight <= wide


# -- bound calculators -------------------------------------------------------


def test_cover_colorer_bound_frozen():
    assert cover_bag_colorer(2, 1).n == 2004508
    assert cover_bag_colorer(1, 1).n == 232
    assert cover_bag_colorer(2, 1).n == max(vertex_cover_bound(2, 4, 1), 10)


def test_tree_extension_bound_frozen():
    n = cover_bag_colorer(2, 1).n
    assert tree_extension_bound(0, 2, 1, n, 2) == 202456278
    assert tree_extension_bound(1, 2, 1, n, 2) == 2267510362268
    assert tree_extension_bound(2, 2, 1, n, 2) == 25396116057450268
    assert treewidth_color_bound(1, 1) == 25396116057450268


def test_tree_extension_bound_level_zero_terms():
    n = Fraction(7)
    expect = n + centered_bound(3, 3, 1) + patch_bound(3, 3, 1, n) + 9 + 3
    assert tree_extension_bound(0, 3, 1, n, 2) == expect


def test_tree_extension_bound_recurrence():
    n = Fraction(5)
    prev = tree_extension_bound(1, 2, 1, n, 2)
    step = con_color_bound(1, patch_bound(2, 3, 1, prev), 2, 2, 0)
    assert tree_extension_bound(2, 2, 1, n, 2) == step


def test_tree_extension_bound_rejects_bad_arguments():
    with pytest.raises(GraphError):
        tree_extension_bound(3, 2, 1, 5, 2)
    with pytest.raises(GraphError):
        tree_extension_bound(1, 2, 1, 5, 1)
    with pytest.raises(GraphError):
        tree_extension_bound(1, 2, 0, 5, 2)


# -- construction validation ---------------------------------------------------


def test_construction_accepts_path_td():
    g = unit_path(6)
    con = AdhesionConstruction(path_td(6), 2, 2, theta2())
    con.validate(g)
    assert con.big_edges() == ()
    assert con.new_vertex_limit == 4


def test_construction_rejects_wide_root_bag():
    g = unit_path(4)
    td = RootedTreeDecomposition({0: {0, 1, 2}, 1: {2, 3}}, [(0, 1)], 0)
    with pytest.raises(ContractViolation, match="root bag"):
        AdhesionConstruction(td, 1, 2, theta2()).validate(g)


def test_construction_rejects_empty_root_bag_at_positive_eta():
    g = unit_path(3)
    td = RootedTreeDecomposition({9: set(), 0: {0, 1}, 1: {1, 2}}, [(9, 0), (0, 1)], 9)
    with pytest.raises(ContractViolation, match="nonempty"):
        AdhesionConstruction(td, 1, 2, theta2()).validate(g)
    AdhesionConstruction(td, 0, 2, theta2()).validate(g)


def test_construction_rejects_big_adhesion_with_children():
    g = WeightedGraph(range(4), [(0, 1, 1), (1, 2, 1), (2, 3, 1)])
    bags = {0: {0, 1}, 1: {0, 1, 2}, 2: {2, 3}}
    td = RootedTreeDecomposition(bags, [(0, 1), (1, 2)], 0)
    # adhesion of (0,1) is {0,1}, above eta=1, but node 1 has a child
    with pytest.raises(ContractViolation, match="has children"):
        AdhesionConstruction(td, 1, 2, theta2()).validate(g)


def test_construction_rejects_fat_leaf():
    g = WeightedGraph(range(4), [(0, 1, 1), (0, 2, 1), (1, 2, 1), (2, 3, 1), (1, 3, 1)])
    bags = {0: {0, 1}, 1: {0, 1, 2, 3}}
    td = RootedTreeDecomposition(bags, [(0, 1)], 0)
    con = AdhesionConstruction(td, 1, 2, theta2(), lam=1)
    with pytest.raises(ContractViolation, match="new vertices"):
        con.validate(g)


def test_construction_rejects_adhesion_above_theta():
    g = WeightedGraph(range(4), [(u, v, 1) for u in range(4) for v in range(u + 1, 4)])
    td = RootedTreeDecomposition({0: {0, 1, 2}, 1: {0, 1, 2, 3}}, [(0, 1)], 0)
    with pytest.raises(ContractViolation, match="theta"):
        AdhesionConstruction(td, 2, 2, theta2()).validate(g)


def test_construction_rejects_lam_above_theta_squared():
    with pytest.raises(ContractViolation, match="theta"):
        AdhesionConstruction(path_td(4), 2, 2, theta2(), lam=5).validate(unit_path(4))


# -- coloring an adhesion construction ------------------------------------------


def test_fully_precolored_keeps_colors():
    g = unit_path(5)
    con = AdhesionConstruction(path_td(5), 1, 2, theta2())
    pre = Coloring({v: 1 + (v % 2) for v in range(5)}, 2)
    res = color_adhesion_construction(g, 1, con, z=range(5), precoloring=pre, deep_verify=True)
    assert res.report.ok
    assert all(res.coloring.color(v) == pre.color(v) for v in range(5))


def test_flat_two_star_measured():
    # two stars joined by an empty adhesion; no guard levels needed
    g = WeightedGraph(range(6), [(0, 1, 1), (1, 2, 1), (3, 4, 1), (4, 5, 1)])
    td = RootedTreeDecomposition(
        {0: {0, 1}, 1: {1, 2}, 2: {3, 4}, 3: {4, 5}}, [(0, 1), (0, 2), (2, 3)], 0
    )
    con = AdhesionConstruction(td, 0, 2, theta2())
    res = color_adhesion_construction(g, 1, con, deep_verify=True)
    assert res.bound == 202456278
    assert res.report.max_weak_diameter_hops == 2


def test_path20_full_recursion_frozen():
    g = unit_path(20)
    con = AdhesionConstruction(path_td(20), 2, 2, theta2())
    res = color_adhesion_construction(g, 1, con, deep_verify=True)
    assert res.bound == 25396116057450268
    assert res.report.max_weak_diameter_hops == 6
    assert [res.coloring.color(v) for v in range(20)] == [
        2, 2, 2, 2, 2, 2, 2, 1, 2, 2, 2, 1, 2, 2, 2, 1, 2, 2, 2, 1,
    ]


def test_precoloring_respected_through_recursion():
    rng = random.Random(40)
    for _ in range(12):
        n = rng.randint(3, 9)
        ell = Fraction(rng.choice([1, 2]), rng.choice([1, 2]))
        g = random_connected_graph(rng, n, rng.randint(0, 3), max_weight=ell)
        td = compute_tree_decomposition(g)
        theta = td.width + 1
        con = AdhesionConstruction(td, theta, theta, cover_bag_colorer(theta, ell))
        ball = sorted(g.distances_from(sorted(td.bags[td.root]), radius=3 * ell))
        z = [v for v in ball if rng.random() < 0.5]
        pre = Coloring({v: rng.randint(1, 2) for v in z}, 2)
        res = color_adhesion_construction(g, ell, con, z=z, precoloring=pre, deep_verify=True)
        assert res.report.ok
        assert all(res.coloring.color(v) == pre.color(v) for v in z)


def test_precolored_set_must_sit_in_root_ball():
    g = unit_path(20)
    con = AdhesionConstruction(path_td(20), 2, 2, theta2())
    with pytest.raises(ContractViolation, match="3\\*ell"):
        color_adhesion_construction(g, 1, con, z=[19])


def test_heavy_edge_refused():
    g = WeightedGraph(range(2), [(0, 1, 2)])
    td = RootedTreeDecomposition({0: {0, 1}}, [], 0)
    con = AdhesionConstruction(td, 1, 2, theta2())
    with pytest.raises(GraphError, match="exceeds ell"):
        color_adhesion_construction(g, 1, con)


def test_adhesion_coloring_needs_two_colors():
    g = unit_path(3)
    con = AdhesionConstruction(path_td(3), 1, 2, theta2())
    with pytest.raises(GraphError, match="m >= 2"):
        color_adhesion_construction(g, 1, con, m=1)


def test_precoloring_domain_must_match():
    g = unit_path(4)
    con = AdhesionConstruction(path_td(4), 1, 2, theta2())
    with pytest.raises(GraphError, match="domain"):
        color_adhesion_construction(g, 1, con, z=[0], precoloring=Coloring({1: 1}, 2))


def test_lying_bag_colorer_is_caught():
    # claims hop bound 1 but colors a long path with one color
    liar = constant_bag_colorer(1)
    g = unit_path(6)
    td = RootedTreeDecomposition({0: range(6)}, [], 0)
    con = AdhesionConstruction(td, 0, 6, liar)
    with pytest.raises(ContractViolation):
        color_adhesion_construction(g, 1, con)


# -- bounded-treewidth two-coloring ----------------------------------------------


def test_single_bag_direct():
    g = WeightedGraph(range(3), [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    res = color_bounded_treewidth(g, 1, deep_verify=True)
    assert res.report.ok
    assert res.coloring.num_colors == 2
    assert res.coloring.domain == g.vertex_set()


def test_ladder_series_parallel():
    g = grid_graph(2, 8)
    res = color_bounded_treewidth(g, 1, deep_verify=True)
    assert res.width == 2
    assert res.bound == treewidth_color_bound(2, 1)
    assert res.report.ok


def test_two_colors_exactly():
    res = color_bounded_treewidth(unit_path(30), 1)
    assert res.coloring.num_colors == 2
    assert set(res.coloring.assignment.values()) <= {1, 2}


def test_disconnected_with_isolated_vertices():
    g = WeightedGraph(
        range(9),
        [(0, 1, Fraction(1, 2)), (1, 2, Fraction(1, 3)), (3, 4, 1), (4, 5, 1), (3, 5, 1)],
    )
    res = color_bounded_treewidth(g, 1, deep_verify=True)
    assert res.report.ok
    assert res.coloring.domain == g.vertex_set()


def test_empty_graph():
    res = color_bounded_treewidth(WeightedGraph([], []), 1)
    assert res.coloring.domain == frozenset()
    assert res.report.ok


def test_scale_covariance():
    base = [(i, i + 1, Fraction(j % 3 + 1, 4)) for j, i in enumerate(range(39))]
    ref = None
    for ell in (Fraction(1), Fraction(2), Fraction(4), Fraction(8)):
        g = WeightedGraph(range(40), [(u, v, w * ell) for (u, v, w) in base])
        res = color_bounded_treewidth(g, ell, deep_verify=True)
        cur = (
            tuple(sorted(res.coloring.assignment.items())),
            res.report.max_weak_diameter_hops,
        )
        if ref is None:
            ref = cur
        assert cur == ref


def test_bound_scale_invariant():
    assert treewidth_color_bound(2, 1) == treewidth_color_bound(2, Fraction(7, 3))


def test_user_supplied_td():
    g = unit_path(12)
    td = RootedTreeDecomposition.from_json_dict(path_td(12).to_json_dict())
    res = color_bounded_treewidth(g, 1, td=td, deep_verify=True)
    assert res.report.ok
    assert res.td is td


def test_user_supplied_td_must_be_valid():
    g = unit_path(4)
    td = RootedTreeDecomposition({0: {0, 1}, 1: {2, 3}}, [(0, 1)], 0)  # edge (1,2) uncovered
    with pytest.raises(GraphError, match="invalid decomposition"):
        color_bounded_treewidth(g, 1, td=td)


def test_treewidth_coloring_deterministic():
    g1 = grid_graph(3, 5)
    g2 = grid_graph(3, 5)
    a = color_bounded_treewidth(g1, 1)
    b = color_bounded_treewidth(g2, 1)
    assert a.coloring.assignment == b.coloring.assignment


def test_heavy_edge_refused_up_front():
    with pytest.raises(GraphError, match="exceeds ell"):
        color_bounded_treewidth(WeightedGraph(range(2), [(0, 1, 3)]), 2)


@settings(max_examples=20, deadline=None)
@given(weighted_graphs(max_n=9, max_extra_edges=6))
def test_random_graphs_color_and_verify(g):
    ell = g.max_edge_weight() or Fraction(1)
    res = color_bounded_treewidth(g, ell, deep_verify=True)
    assert res.report.ok
    assert res.coloring.domain == g.vertex_set()
    assert res.coloring.num_colors == 2


def test_independent_checker_small_graphs():
    """Re-verify colorings against hop components computed from scratch."""
    rng = random.Random(77)
    for _ in range(8):
        n = rng.randint(2, 12)
        ell = Fraction(rng.choice([1, 2]), rng.choice([1, 2]))
        g = random_connected_graph(rng, n, rng.randint(0, 4), max_weight=ell)
        res = color_bounded_treewidth(g, ell)
        power_edges = oracles.brute_power_edges(g, ell)
        for color in (1, 2):
            keep = {v for v, c in res.coloring.assignment.items() if c == color}
            for comp in oracles.brute_hop_components(g.vertices, power_edges, keep=keep):
                d = oracles.brute_hop_diameter(g.vertices, power_edges, comp)
                assert d <= res.bound


def test_band_graphs_all_widths():
    for k in (1, 2, 3):
        g = band_graph(40, k)
        res = color_bounded_treewidth(g, 1)
        assert res.width == k
        assert res.bound == treewidth_color_bound(k, 1)
        assert res.report.ok
