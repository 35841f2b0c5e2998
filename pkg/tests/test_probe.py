from specmon.probe import context_free_probe

from conftest import fixture, strategy, table


def probe(name, radius, depth, **kw):
    return context_free_probe(fixture(name).presentation, radius, depth, strategy(name), table(name), **kw)


def test_bicyclic_consistent_with_context_free():
    rep = probe("bicyclic", 6, 3)
    assert rep.consistent and all(rep.stabilized().values())
    assert rep.verdict == "consistent with context-free"
    assert rep.reports["cayley"].counts[3][3:] == [2, 2, 2, 2]


def test_zxz_counts_grow():
    rep = probe("zxz", 6, 2)
    assert rep.consistent
    assert rep.verdict == "inconsistent with context-free at this scale"
    assert rep.reports["cayley"].strictly_increasing(2)
    assert rep.reports["cayley"].counts[2] == list(range(1, 8))


def test_abc_def_stabilizes():
    rep = probe("abc-def", 3, 1, graphs=("units", "stephen"))
    assert rep.verdict == "consistent with context-free"
    small = probe("abc-def", 2, 1, window=2)
    assert small.consistent and all(small.stabilized().values())
    assert small.reports["cayley"].counts[1] == [1, 3, 3]


def test_unbuildable_graph_is_reported():
    from specmon.rewriting import Bounded

    p = fixture("bicyclic").presentation
    rep = context_free_probe(p, 2, 1, Bounded(8, 1000, fixture("bicyclic").images), table("bicyclic"),
                             graphs=("cayley", "stephen"))
    assert "cayley" in rep.errors and "stephen" in rep.reports
    assert rep.to_json()["errors"]["cayley"]
