import pytest

from specmon.graph import distances, is_deterministic
from specmon.pieces import compute_piece_table, default_strategy
from specmon.fixtures import parse_fixture
from specmon.schutz import r1_via_cayley
from specmon.treecons import check_overlap_free
from specmon.units import (
    HorizonTooSmall, build_U0, build_unit_ball, build_units_graph, embed_in_R1_check, hairy, quotient_simM,
)

from conftest import fixture, strategy, table


def integer_ball(steps, radius):
    """Elements of ℤ reachable from 0 in at most ``radius`` steps."""
    seen, layer = {0}, {0}
    for _ in range(radius):
        layer = {x + s for x in layer for s in steps} - seen
        seen |= layer
    return seen


def unit_images(name, radius, directed=False):
    fx = fixture(name)
    ub = build_unit_ball(fx.presentation, table(name), radius, strategy(name), directed=directed)
    images = [fx.integer_image(w)[0] for w in ub.words.values()]
    assert len(set(images)) == len(images)  # the image is faithful on units here
    return set(images)


def test_bicyclic_unit_ball_is_one_loop():
    ub = build_unit_ball(fixture("bicyclic").presentation, table("bicyclic"), 3, strategy("bicyclic"))
    assert len(ub.graph) == 1 and ub.graph.num_edges == 1
    assert ub.graph.out(0, "b1_1") == {0}


@pytest.mark.parametrize("radius", range(6))
def test_babcb_unit_ball_matches_integer_oracle(radius):
    assert unit_images("babcb", radius) == integer_ball((1, -1, 2, -2), radius)
    assert unit_images("babcb", radius, directed=True) == integer_ball((1, -2), radius)


def test_apa_aqa_directed_radius_one():
    assert unit_images("apa-aqa", 1, directed=True) == {0, 1, -2}
    assert unit_images("apa-aqa", 1) == {0, 1, -1, 2, -2}


def test_bicyclic_subdivision():
    u0 = build_U0(build_unit_ball(fixture("bicyclic").presentation, table("bicyclic"), 0, strategy("bicyclic")),
                  table("bicyclic"))
    assert sorted(u0.graph.edges()) == [(0, "b", 1), (1, "c", 0)]
    assert u0.prefix == {0: "", 1: "b"}


def test_abc_ac_pipeline_counts():
    p, st, pt = fixture("abc-ac").presentation, strategy("abc-ac"), table("abc-ac")
    u0 = build_U0(build_unit_ball(p, pt, 0, st), pt)
    assert len(u0.graph) == 4
    assert sorted(u0.prefix.values()) == ["", "a", "a", "ab"]
    u1 = quotient_simM(u0, p, st)
    assert len(u1.graph) == 3
    u = build_units_graph(p, pt, 3, st)
    lit = {u.prefix[v]: v for v in u.graph.vertices}
    assert sorted(u.graph.edges()) == sorted([
        (lit[""], "a", lit["a"]), (lit["a"], "b", lit["ab"]), (lit["ab"], "c", lit[""]), (lit["a"], "c", lit[""]),
    ])


def test_babcb_bd_adds_d_edges():
    p, st, pt = fixture("babcb-bd").presentation, strategy("babcb-bd"), table("babcb-bd")
    u = build_units_graph(p, pt, 6, st)
    d = p.word("d")
    sources = [v for v in set(u.graph.vertices) - u.graph.horizon if u.prefix[v] == p.word("ab")]
    assert sources
    for v in sources:
        (t,) = u.graph.out(v, d)
        assert u.prefix[t] == p.word("a") and u.unit_of[t] == u.unit_of[v]


@pytest.mark.parametrize("name", ["bicyclic", "abc-ac", "babcb", "apa-aqa", "abc-def", "babcb-bd", "zxz"])
def test_units_graph_deterministic_and_literal_paths(name):
    u = build_units_graph(fixture(name).presentation, table(name), 4, strategy(name))
    assert is_deterministic(u.graph)[0]
    pairs = [(u.unit_of[v], u.prefix[v]) for v in u.graph.vertices]
    assert len(set(pairs)) == len(pairs)
    for v in u.graph.vertices:
        assert u.graph.read(u.graph.root, u.literal(v)) in (v, None)


@pytest.mark.parametrize("name", ["bicyclic", "babcb", "abc-def", "babcb-bd"])
def test_units_graph_overlap_free(name):
    u = build_units_graph(fixture(name).presentation, table(name), 10, strategy(name))
    bound = 2 * max(len(w) for w in table(name).pieces)
    inner = {v for v, d in distances(u.graph).items() if d <= 10 - bound}
    assert check_overlap_free(u.graph, u.n_set, bound, starts=inner) == (True, None)


def test_bicyclic_hairs():
    p = fixture("bicyclic").presentation
    h = hairy(build_units_graph(p, table("bicyclic"), 3, strategy("bicyclic")), p.letters)
    assert len(h.hair_tips) == 2
    hairs = {(h.prefix[o], a) for o, a, t in h.graph.edges() if t in h.hair_tips}
    assert hairs == {("", "c"), ("b", "b")}


def test_group_has_no_interior_hairs():
    p = fixture("apa-aqa").presentation
    h = hairy(build_units_graph(p, table("apa-aqa"), 6, strategy("apa-aqa")), p.letters)
    assert not h.hair_tips


@pytest.mark.parametrize("name", ["bicyclic", "babcb", "abc-ac"])
def test_embedding_into_r1(name):
    p, st = fixture(name).presentation, strategy(name)
    u = build_units_graph(p, table(name), 4, st)
    assert embed_in_R1_check(u, r1_via_cayley(p, 5, st).graph, 4)


def test_embedding_trivial_presentation():
    fx = parse_fixture("Mon<a | a>")
    st = default_strategy(fx)
    pt = compute_piece_table(fx.presentation, st)
    u = build_units_graph(fx.presentation, pt, 2, st)
    assert embed_in_R1_check(u, r1_via_cayley(fx.presentation, 3, st).graph, 2)


def test_embedding_needs_large_enough_ball():
    p, st = fixture("babcb").presentation, strategy("babcb")
    u = build_units_graph(p, table("babcb"), 6, st)
    with pytest.raises(HorizonTooSmall):
        embed_in_R1_check(u, r1_via_cayley(p, 2, st).graph, 5)
