"""Encode a group presentation as a special monoid presentation.

Every generator ``x`` gets a formal inverse ``x̄`` with relators ``xx̄`` and
``x̄x``; group relators are rewritten over the doubled alphabet.  Relator
syntax: single-character letters, ``x^-1`` or ``x̄`` for inverses, and
``[u,v]`` for the commutator ``u v u⁻¹ v⁻¹``.
"""

from __future__ import annotations

import re
import unicodedata

from .fixtures import Fixture
from .presentations import PresentationError, SpecialPresentation

MACRON = "̄"

_GROUP = re.compile(r"^\s*Gp\s*<(?P<gens>[^|>]*)(\|(?P<rels>.*))?>\s*$", re.S)


def _invert(word: list[str]) -> list[str]:
    return [x[:-1] if x.endswith(MACRON) else x + MACRON for x in reversed(word)]


def _parse_word(text: str, gens: set[str]) -> list[str]:
    out: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "[":
            depth, j = 1, i + 1
            comma = None
            while j < len(text) and depth:
                if text[j] == "[":
                    depth += 1
                elif text[j] == "]":
                    depth -= 1
                elif text[j] == "," and depth == 1:
                    comma = j
                j += 1
            if depth or comma is None:
                raise PresentationError(f"malformed commutator in {text!r}")
            u = _parse_word(text[i + 1:comma], gens)
            v = _parse_word(text[comma + 1:j - 1], gens)
            out += u + v + _invert(u) + _invert(v)
            i = j
            continue
        if ch not in gens:
            raise PresentationError(f"unknown generator {ch!r} in {text!r}")
        letter = ch
        i += 1
        if text.startswith(MACRON, i):
            letter += MACRON
            i += 1
        if text.startswith("^-1", i):
            letter = _invert([letter])[0]
            i += 3
        out.append(letter)
    return out


def _split(text: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        depth += ch == "["
        depth -= ch == "]"
        if ch == "," and depth == 0:
            parts.append(text[start:k])
            start = k + 1
    parts.append(text[start:])
    return [x.strip() for x in parts if x.strip()]


def group_to_special(text: str, name: str | None = None) -> SpecialPresentation:
    """``Gp<a, b | [a,b]>`` becomes ``Mon<a, b, ā, b̄ | aā, āa, bb̄, b̄b, abāb̄>``."""
    m = _GROUP.match(unicodedata.normalize("NFD", text))
    if not m:
        raise PresentationError("expected Gp<generators | relators>")
    gens = [g.strip() for g in m.group("gens").split(",") if g.strip()]
    if any(len(g) != 1 for g in gens):
        raise PresentationError("group generators must be single characters")
    letters = gens + [g + MACRON for g in gens]
    rels = [w for g in gens for w in (g + g + MACRON, g + MACRON + g)]
    for r in _split(m.group("rels") or ""):
        word = _parse_word(r, set(gens))
        if word:
            rels.append("".join(word))
    return SpecialPresentation.build(letters, rels, name)


def paired_order(p: SpecialPresentation) -> str:
    """Letter order with each inverse right after its generator.

    Shortlex completion of ``[a,b]`` never ends under ``a < b < ā < b̄`` but
    finishes at once under ``a < ā < b < b̄``.
    """
    by_name = {unicodedata.normalize("NFD", p.alphabet.name(c)): c for c in p.letters}
    out = []
    for name, c in by_name.items():
        if not name.endswith(MACRON):
            out.append(c)
            if name + MACRON in by_name:
                out.append(by_name[name + MACRON])
    out += [c for c in p.letters if c not in out]
    return "".join(out)


def group_fixture(text: str, name: str | None = None) -> Fixture:
    p = group_to_special(text, name)
    return Fixture(p, order=paired_order(p))
