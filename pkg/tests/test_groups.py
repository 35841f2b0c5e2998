import pytest

from specmon.groups import group_fixture, group_to_special, paired_order
from specmon.pieces import compute_piece_table, default_strategy
from specmon.presentations import PresentationError
from specmon.rewriting import CompleteRS, word_problem
from specmon.schutz import cayley_ball


@pytest.mark.parametrize("text, expected", [
    ("Gp<a | >", "Mon<a, ā | aā, āa>"),
    ("Gp<a>", "Mon<a, ā | aā, āa>"),
    ("Gp<a,b | [a,b]>", "Mon<a, b, ā, b̄ | aā, āa, bb̄, b̄b, abāb̄>"),
    ("Gp<a | aa>", "Mon<a, ā | aā, āa, aa>"),
    ("Gp<a, b | b^-1 a b a>", "Mon<a, b, ā, b̄ | aā, āa, bb̄, b̄b, b̄aba>"),
])
def test_group_to_special(text, expected):
    assert group_to_special(text).to_text() == expected


@pytest.mark.parametrize("bad", ["Mon<a | a>", "Gp<ab | >", "Gp<a | b>", "Gp<a | [a>"])
def test_group_errors(bad):
    with pytest.raises(PresentationError):
        group_to_special(bad)


def test_paired_order_interleaves_inverses():
    p = group_to_special("Gp<a,b | [a,b]>")
    assert [p.alphabet.name(c) for c in paired_order(p)] == ["a", "ā", "b", "b̄"]


def test_group_fixture_completes_and_gives_abelian_grid():
    fx = group_fixture("Gp<a,b | [a,b]>")
    st = default_strategy(fx)
    assert isinstance(st, CompleteRS)
    p = fx.presentation
    assert word_problem(p.word("ab"), p.word("ba"), p, st).equal
    assert len(cayley_ball(p, 4, st).graph) == 2 * 16 + 8 + 1


def test_free_group_units_are_everything():
    fx = group_fixture("Gp<a | >")
    pt = compute_piece_table(fx.presentation, default_strategy(fx))
    assert len(pt.pieces) == 2
