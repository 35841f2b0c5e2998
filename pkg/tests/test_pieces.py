import json

import pytest

from conftest import fixture, strategy, table
from specmon.fixtures import CORPUS, FIXTURE_DIR
from specmon.pieces import (
    Invertibility, UndecidedCut, check_biprefix, check_cross_bifix_free, compute_piece_table,
    compute_unit_presentation, factor_relator, is_invertible_prefix, unit_generators_trivial,
)
from specmon.rewriting import Bounded


def render_set(p, words):
    return sorted(p.render(w) for w in words)


def test_bicyclic_table():
    pt = table("bicyclic")
    p = pt.presentation
    assert render_set(p, pt.pieces) == ["bc"]
    assert render_set(p, pt.xi) == ["b", "bc"]
    assert render_set(p, pt.frak_p) == ["b"]
    assert pt.kappa == 1


def test_abc_ac_single_class():
    pt = table("abc-ac")
    assert render_set(pt.presentation, pt.pieces) == ["abc", "ac"]
    assert pt.kappa == 1
    assert [name for name, _ in pt.frak_b] == ["b1_1", "b1_2"]


def test_babcb_factorization():
    pt = table("babcb")
    p = pt.presentation
    assert [p.render(w) for w in pt.factorizations[0]] == ["b", "abc", "b"]
    assert pt.kappa == 2


def test_apa_aqa_classes():
    pt = table("apa-aqa")
    p = pt.presentation
    assert [[p.render(w) for w in c] for c in pt.classes] == [["a"], ["p", "q"]]
    assert pt.witnesses[p.word("q")].end == p.word("p")


def test_invertible_prefix_verdicts():
    p = fixture("bicyclic").presentation
    bc = p.relators[0]
    v = is_invertible_prefix(bc, 1, p, strategy("bicyclic"))
    assert v.status is Invertibility.NOT_INVERTIBLE
    # without a complete system or an image nothing refutes the cut
    v = is_invertible_prefix(bc, 1, p, Bounded(6, 2_000))
    assert v.status is Invertibility.NOT_CERTIFIED
    v = is_invertible_prefix(bc, 2, p, strategy("bicyclic"))
    assert v.status is Invertibility.INVERTIBLE
    v.right.validate(p.relators)
    v.left.validate(p.relators)
    with pytest.raises(ValueError):
        is_invertible_prefix(bc, 0, p, strategy("bicyclic"))


def test_undecided_cut_is_raised():
    p = fixture("bicyclic").presentation
    with pytest.raises(UndecidedCut):
        factor_relator(0, p, Bounded(4, 100))


def test_bounded_table_of_babcb_uses_images():
    fx = fixture("babcb")
    pt = compute_piece_table(fx.presentation, Bounded(12, 200_000, fx.images))
    assert pt.pieces == table("babcb").pieces
    assert pt.classes == table("babcb").classes


def test_code_checks():
    assert check_biprefix(["b", "abc"]) == (True, None)
    assert check_biprefix(["ab", "abc"])[0] is False
    assert check_cross_bifix_free(["abc", "def"])[0]
    assert not check_cross_bifix_free(["aba"])[0]


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_pieces_form_a_biprefix_code(name):
    assert check_biprefix(table(name).pieces) == (True, None)


def test_unit_presentations():
    up = compute_unit_presentation(table("bicyclic"))
    assert up.to_text() == "⟨b1_1 | b1_1=1⟩"
    assert unit_generators_trivial(up) is True
    up = compute_unit_presentation(table("babcb"))
    assert up.generators == ("b1_1", "b2_1")
    assert ("b1_1", "b2_1", "b1_1") in up.relators
    assert unit_generators_trivial(up) is False


@pytest.mark.parametrize("name", ["bicyclic", "abc-ac", "babcb", "apa-aqa", "abc-def"])
def test_golden_tables(name):
    golden = json.loads((FIXTURE_DIR / "golden" / f"pieces_{name}.json").read_text(encoding="utf-8"))
    data = table(name).to_json()
    data["unit_presentation"] = compute_unit_presentation(table(name)).to_text()
    assert data == golden
