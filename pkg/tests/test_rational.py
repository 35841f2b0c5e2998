import pytest

from specmon.fixtures import FIXTURE_DIR
from specmon.rational import Nfa, RegexError, compile_regex, rational_member
from specmon.rewriting import Bounded

from conftest import fixture, strategy

P = fixture("bicyclic").presentation


def nfa(name):
    return Nfa.load(FIXTURE_DIR / f"{name}.nfa.json", P)


def replay(result, query):
    assert result.yes
    assert result.derivation.start == result.witness
    assert result.derivation.end == query
    result.derivation.validate(P.relators)


def test_bc_star_contains_identity():
    lang = nfa("bc-star")
    r = rational_member(P, lang, "", 6, strategy("bicyclic"))
    assert r.witness == "" and lang.accepts(r.witness)
    replay(r, "")


def test_b_bc_star_contains_b():
    lang = nfa("b-bc-star")
    r = rational_member(P, lang, P.word("b"), 6, strategy("bicyclic"))
    assert r.witness == P.word("b") and lang.accepts(r.witness)
    replay(r, P.word("b"))


def test_cb_not_in_bc_star():
    r = rational_member(P, nfa("bc-star"), P.word("cb"), 6, strategy("bicyclic"))
    assert r.status == "no_within_bound" and r.radius == 6
    assert r.witness is None


def test_witness_differs_from_query():
    lang = nfa("b-bc-star")
    query = P.word("bbcbc")
    r = rational_member(P, lang, query, 6, strategy("bicyclic"))
    assert lang.accepts(r.witness)
    replay(r, query)


def test_bounded_search_agrees():
    lang = nfa("b-bc-star")
    r = rational_member(P, lang, P.word("bbc"), 5, Bounded(10, 10_000, fixture("bicyclic").images))
    assert r.yes and lang.accepts(r.witness)
    replay(r, P.word("bbc"))
    miss = rational_member(P, nfa("bc-star"), P.word("cb"), 4, Bounded(10, 10_000, fixture("bicyclic").images))
    assert miss.status == "no_within_bound"


@pytest.mark.parametrize("regex, yes, no", [
    ("(bc)*", ["", "bc", "bcbc"], ["b", "cb", "bcb"]),
    ("b(bc)*", ["b", "bbc"], ["", "bc"]),
    ("b|c", ["b", "c"], ["", "bc"]),
    ("(b|c)*c", ["c", "bbc", "cc"], ["", "b", "cb"]),
    ("ε|b", ["", "b"], ["c"]),
])
def test_regex_compiler(regex, yes, no):
    lang = compile_regex(regex, P)
    assert all(lang.accepts(P.word(w)) for w in yes)
    assert not any(lang.accepts(P.word(w)) for w in no)


@pytest.mark.parametrize("bad", ["(bc", "b)", "x", "*b"])
def test_regex_errors(bad):
    with pytest.raises(RegexError):
        compile_regex(bad, P)


def test_nfa_rejects_foreign_letters():
    with pytest.raises(ValueError):
        Nfa.from_json({"states": [0], "initial": 0, "accepting": [0], "transitions": [[0, "z", 0]]}, P)
