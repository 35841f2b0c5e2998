from collections import Counter

import pytest

from specmon.graph import LabelledGraph, classify_ends, distances, rooted_iso
from specmon.treecons import (
    RootInAttachSet, check_bounded_folding, check_fullness, check_overlap_free, check_tuple_edges, cycle_graph,
    depth_of, flower, fold_depth_spread, tree_of_copies,
)
from specmon.units import build_units_graph

from conftest import fixture, strategy, table

TRIANGLE = cycle_graph("abc")


def test_triangle_branch_points_double_per_level():
    t = tree_of_copies(TRIANGLE, {1, 2}, max_radius=7)
    dist = distances(t.graph)
    per_level = Counter(dist[v] for v in t.branch_points)
    assert [per_level[n] for n in range(1, 8)] == [2 ** n for n in range(1, 8)]
    assert check_tuple_edges(t) == []


def test_empty_attach_set_gives_base_graph():
    g = flower(["abc", "de"])
    t = tree_of_copies(g, set())
    assert rooted_iso(g, t.graph) is not None
    assert not t.branch_points


def test_root_cannot_be_attached():
    with pytest.raises(RootInAttachSet):
        tree_of_copies(TRIANGLE, {0, 1}, max_depth=2)
    with pytest.raises(ValueError):
        tree_of_copies(TRIANGLE, {1})


def test_flower_ladder_within_radius_three():
    t = tree_of_copies(flower(["bc"]), {1}, max_radius=3)
    assert sorted(t.tuples.values()) == [(0,), (1,), (1, 1), (1, 1, 1)]
    assert len(t.graph) == 4 and t.graph.num_edges == 6
    assert [depth_of(x) for x in sorted(t.tuples.values())] == [0, 0, 1, 2]


def test_depth_bound_and_horizon():
    t = tree_of_copies(TRIANGLE, {1, 2}, max_depth=1)
    assert max(t.depth(v) for v in t.graph.vertices) == 1
    assert len(t.graph) == 3 + 2 * 2
    assert all(t.tuples[v][-1] in t.attach for v in t.graph.horizon)


def test_triangle_tree_ends_stabilize():
    t = tree_of_copies(TRIANGLE, {1, 2}, max_radius=13)
    rep = classify_ends(t.graph, 9, 3)
    assert rep.counts[3][6:] == [2, 2, 2, 2]
    assert rep.stabilized(3)


def test_overlap_free_cross_bifix_free_flower():
    assert check_overlap_free(flower(["abc", "def"]), {1, 2, 3, 4}, 6) == (True, None)


def test_overlap_found_in_babcb_flower():
    ok, overlap = check_overlap_free(flower(["babcb"]), {1, 2, 3, 4}, 6)
    assert not ok
    assert overlap.word == "b" and overlap.from_root == (0, 1) and overlap.from_attach == (4, 0)


def test_fullness_loop_example():
    g = LabelledGraph.from_edges([(0, "a", 1), (1, "b", 2), (2, "c", 3), (3, "d", 0)], root=0)
    identity = {v: v for v in g.vertices}
    ok, witness = check_fullness(g, identity, {1, 2, 3})
    assert not ok and witness[2] in {1, 2, 3}
    assert not check_fullness(g, identity, {2})[0]  # the b-edge 1 -> 2 alone breaks it
    assert check_fullness(g, {v: 0 for v in g.vertices}, {1, 2, 3}) == (True, None)


def units(name, radius):
    return build_units_graph(fixture(name).presentation, table(name), radius, strategy(name))


@pytest.mark.parametrize("name, omega", [("bicyclic", 2), ("babcb", 3)])
def test_bounded_folding_on_units_graph(name, omega):
    u = units(name, 10)
    dist = distances(u.graph)
    inner = {v for v, d in dist.items() if d <= 6}
    rep = check_bounded_folding(u.graph, u.class_of(), u.n_set, 8, overlap_starts=inner,
                                within=inner - u.graph.horizon)
    assert rep.all_true and rep.omega == omega
    assert rep.classes_checked >= 1


def test_bicyclic_units_overlap_free_and_full():
    u = units("bicyclic", 10)
    assert check_overlap_free(u.graph, u.n_set, 8) == (True, None)
    assert check_fullness(u.graph, u.class_of(), u.n_set) == (True, None)


@pytest.mark.parametrize("name", ["bicyclic", "abc-ac", "babcb", "abc-def", "babcb-bd"])
def test_folded_tree_depth_spread_at_most_one(name):
    u = units(name, 4)
    inner = {v for v, d in distances(u.graph).items() if d <= 2} - u.graph.horizon
    assert check_overlap_free(u.graph, u.n_set, 6, starts=inner)[0]
    t = tree_of_copies(u.graph, u.n_set & inner, max_depth=2, max_radius=6)
    assert fold_depth_spread(t) <= 1
