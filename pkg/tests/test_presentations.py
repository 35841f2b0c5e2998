import pytest

from specmon.fixtures import CORPUS, fixture_names, load_fixture, parse_fixture
from specmon.presentations import PresentationError, SpecialPresentation, check_no_unit_proper_subword, parse_presentation


def test_parse_round_trip():
    p = parse_presentation("Mon<a, b, c | abc, ac>")
    assert p.letters == "abc"
    assert p.relators == ("abc", "ac")
    assert parse_presentation(p.to_text()) == p


def test_name_line_and_whitespace():
    p = parse_presentation("bicyclic:\n Mon< b ,c|\n bc >")
    assert p.name == "bicyclic"
    assert p.relators == ("bc",)


def test_parentheses_are_grouping_only():
    assert parse_presentation("Mon<a,b,c|b(abc)b>").relators == ("babcb",)


def test_multi_character_names_use_brackets():
    p = parse_presentation("Mon<x, [y1] | x[y1]x>")
    assert len(p.relators[0]) == 3
    assert p.render(p.relators[0]) == "x[y1]x"


def test_macron_letters():
    p = parse_presentation("Mon<a, ā | aā, āa>")
    assert len(p.letters) == 2
    assert all(len(r) == 2 for r in p.relators)
    assert p.render(p.relators[0]) == "aā"


@pytest.mark.parametrize("text", [
    "Mon<a | a, >",
    "Mon<a | ε>",
    "Mon<a | b>",
    "Mon<a, a | a>",
    "Mon a | a",
    "Mon<a | a> tail",
])
def test_rejects_malformed(text):
    with pytest.raises(PresentationError):
        parse_presentation(text)


def test_error_reports_position():
    with pytest.raises(PresentationError) as err:
        parse_presentation("Mon<a |\n  ab>")
    assert "line 2" in str(err.value)


def test_empty_relator_list_is_free_monoid():
    assert parse_presentation("Mon<a, b | >").relators == ()


def test_json_round_trip():
    p = parse_presentation("Mon<a, p, q | apa, aqa>")
    assert SpecialPresentation.from_json(p.to_json()) == p


def test_all_fixtures_load():
    names = fixture_names()
    assert set(CORPUS) <= set(names)
    for name in names:
        assert load_fixture(name).presentation.name == name


def test_fixture_directives():
    fx = parse_fixture("demo:\nMon<a, b | ab>\nimage: a=1, b=-1\nnote: hello\n")
    assert fx.integer_image(fx.presentation.word("aab")) == (1,)
    assert fx.notes == ("hello",)


def test_corpus_has_no_unit_proper_subword():
    for name in CORPUS:
        assert check_no_unit_proper_subword(load_fixture(name).presentation) == [], name


def test_recorded_violation_is_found():
    fx = load_fixture("b-abc")
    found = check_no_unit_proper_subword(fx.presentation)
    assert [(v.relator, v.start, v.end) for v in found] == list(fx.violations)
    v = found[0]
    v.witness.validate(fx.presentation.relators)
    assert v.witness.end == ""
