"""Special monoid presentations ``Mon<A | R_1, ..., R_k>``.

Words are plain ``str`` values holding one code point per letter.  A letter
whose name is a single code point is stored as itself, so words of the
bicyclic monoid are ordinary strings such as ``"bbcc"``.  Longer names, either
bracketed (``[x1]``) or a base character carrying combining marks (``b̄``), are
mapped to private-use code points and rendered back on output.

>>> p = parse_presentation("Mon<b,c | bc>")
>>> p.relators
('bc',)
>>> p.to_text()
'Mon<b, c | bc>'
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable

EPSILON = "ε"
_PRIVATE_BASE = 0xE000


class PresentationError(ValueError):
    """Malformed presentation text or an invalid presentation value."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


def _is_mark(ch: str) -> bool:
    return unicodedata.combining(ch) != 0


@dataclass(frozen=True)
class Alphabet:
    """Ordered generator names.  The declared order is the shortlex order."""

    names: tuple[str, ...]
    _to_char: dict = field(init=False, repr=False, compare=False)
    _to_name: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            dup = next(n for n in self.names if self.names.count(n) > 1)
            raise PresentationError(f"duplicate alphabet letter {dup!r}")
        to_char, to_name = {}, {}
        spare = _PRIVATE_BASE
        for name in self.names:
            if not name or name == EPSILON or any(c in "[],|<>() \t\n" for c in name):
                raise PresentationError(f"invalid letter name {name!r}")
            if len(name) == 1:
                ch = name
            else:
                while chr(spare) in self.names:
                    spare += 1
                ch = chr(spare)
                spare += 1
            to_char[name] = ch
            to_name[ch] = name
        object.__setattr__(self, "_to_char", to_char)
        object.__setattr__(self, "_to_name", to_name)

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.chars)

    def __contains__(self, ch: object) -> bool:
        return ch in self._to_name

    @property
    def chars(self) -> str:
        """Internal code points in declared order."""
        return "".join(self._to_char[n] for n in self.names)

    def char(self, name: str) -> str:
        return self._to_char[unicodedata.normalize("NFC", name)]

    def name(self, ch: str) -> str:
        return self._to_name[ch]

    def render_letter(self, ch: str) -> str:
        name = self._to_name[ch]
        if len(name) == 1 or all(_is_mark(c) for c in name[1:]):
            return name
        return f"[{name}]"

    def render(self, word: str, empty: str = EPSILON) -> str:
        if not word:
            return empty
        return "".join(self.render_letter(c) for c in word)

    def parse_word(self, text: str) -> str:
        """Parse a word such as ``"ab[x1]b̄"``.  ``ε`` or blank text is the empty word.

        Parentheses are accepted as visual grouping and ignored.
        """
        text = text.strip()
        if text in ("", EPSILON):
            return ""
        out = []
        for name, col in _letter_tokens(text):
            if name not in self._to_char:
                raise PresentationError(f"letter {name!r} not in alphabet", 1, col + 1)
            out.append(self._to_char[name])
        return "".join(out)


def _letter_tokens(text: str, offset: int = 0) -> Iterable[tuple[str, int]]:
    """Split a word into letter names, yielding (name, column offset)."""
    text = unicodedata.normalize("NFC", text)
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace() or ch in "()":
            i += 1
            continue
        if ch == EPSILON:
            raise PresentationError("ε is not allowed inside a word", None, None)
        if ch == "[":
            end = text.find("]", i)
            if end < 0:
                raise PresentationError("unterminated bracketed letter", 1, offset + i + 1)
            name = text[i + 1:end]
            if not name:
                raise PresentationError("empty bracketed letter", 1, offset + i + 1)
            yield name, offset + i
            i = end + 1
            continue
        if ch in "],|<>" or _is_mark(ch):
            raise PresentationError(f"unexpected character {ch!r}", 1, offset + i + 1)
        j = i + 1
        while j < len(text) and _is_mark(text[j]):
            j += 1
        yield text[i:j], offset + i
        i = j


@dataclass(frozen=True)
class SpecialPresentation:
    alphabet: Alphabet
    relators: tuple[str, ...]
    name: str | None = None

    def __post_init__(self) -> None:
        for i, r in enumerate(self.relators):
            if not r:
                raise PresentationError(f"relator {i} is empty")
            bad = [c for c in r if c not in self.alphabet]
            if bad:
                raise PresentationError(f"relator {i} uses letter {bad[0]!r} outside the alphabet")

    @classmethod
    def build(cls, letters: Iterable[str], relators: Iterable[str], name: str | None = None) -> "SpecialPresentation":
        """Build from letter names and relator texts, e.g. ``build("bc", ["bc"])``."""
        alphabet = Alphabet(tuple(unicodedata.normalize("NFC", x) for x in letters))
        return cls(alphabet, tuple(alphabet.parse_word(r) for r in relators), name)

    @property
    def letters(self) -> str:
        return self.alphabet.chars

    def word(self, text: str) -> str:
        return self.alphabet.parse_word(text)

    def render(self, word: str) -> str:
        return self.alphabet.render(word)

    @property
    def max_relator_length(self) -> int:
        return max((len(r) for r in self.relators), default=0)

    def to_text(self) -> str:
        letters = ", ".join(self.alphabet.render_letter(c) for c in self.alphabet.chars)
        rels = ", ".join(self.render(r) for r in self.relators)
        body = f"Mon<{letters} | {rels}>"
        return f"{self.name}:\n{body}" if self.name else body

    def to_json(self) -> dict:
        return {
            "alphabet": list(self.alphabet.names),
            "relators": [self.render(r) for r in self.relators],
            "name": self.name,
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "SpecialPresentation":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.build(data["alphabet"], data["relators"], data.get("name"))

    def __str__(self) -> str:
        return self.to_text()


def _line_col(text: str, index: int) -> tuple[int, int]:
    line = text.count("\n", 0, index) + 1
    col = index - (text.rfind("\n", 0, index) + 1) + 1
    return line, col


def _split_top(text: str, start: int, end: int) -> list[tuple[str, int]]:
    """Split text[start:end] at commas outside brackets, keeping offsets."""
    parts, depth, last = [], 0, start
    for i in range(start, end):
        ch = text[i]
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append((text[last:i], last))
            last = i + 1
    parts.append((text[last:end], last))
    return parts


def parse_presentation(text: str) -> SpecialPresentation:
    """Parse ``[name:] Mon< l1, l2, ... | w1, w2, ... >``.

    Whitespace is insignificant.  An empty relator list is legal; an empty
    relator word (``Mon<a | a, >``) or ``ε`` inside a relator is rejected.
    """
    text = unicodedata.normalize("NFC", text)
    name = None
    start = text.find("Mon")
    if start < 0:
        raise PresentationError("expected 'Mon<'", *_line_col(text, 0))
    head = text[:start].strip()
    if head:
        if not head.endswith(":") or not head[:-1].strip().replace("-", "_").replace(".", "_").isidentifier():
            raise PresentationError(f"unexpected text before 'Mon': {head!r}", *_line_col(text, 0))
        name = head[:-1].strip()
    i = start + 3
    while i < len(text) and text[i].isspace():
        i += 1
    if i >= len(text) or text[i] != "<":
        raise PresentationError("expected '<' after 'Mon'", *_line_col(text, i))
    open_at = i
    bar = text.find("|", open_at)
    close = text.rfind(">")
    if bar < 0:
        raise PresentationError("expected '|' separating letters from relators", *_line_col(text, open_at))
    if close < bar:
        raise PresentationError("expected closing '>'", *_line_col(text, len(text)))
    if text[close + 1:].strip():
        raise PresentationError("trailing text after '>'", *_line_col(text, close + 1))

    names = []
    letter_parts = _split_top(text, open_at + 1, bar)
    if not (len(letter_parts) == 1 and not letter_parts[0][0].strip()):
        for chunk, off in letter_parts:
            tokens = list(_wrap_tokens(text, chunk, off))
            if len(tokens) != 1:
                raise PresentationError("each alphabet entry must be one letter", *_line_col(text, off))
            if tokens[0] in names:
                raise PresentationError(f"duplicate alphabet letter {tokens[0]!r}", *_line_col(text, off))
            names.append(tokens[0])
    alphabet = Alphabet(tuple(names))

    relators = []
    rel_parts = _split_top(text, bar + 1, close)
    if not (len(rel_parts) == 1 and not rel_parts[0][0].strip()):
        for chunk, off in rel_parts:
            if not chunk.strip() or chunk.strip() == EPSILON:
                raise PresentationError("empty relator word", *_line_col(text, off))
            word = []
            for tok, col in _letter_positions(text, chunk, off):
                if tok not in names:
                    raise PresentationError(f"letter {tok!r} not in alphabet", *_line_col(text, col))
                word.append(alphabet.char(tok))
            relators.append("".join(word))
    return SpecialPresentation(alphabet, tuple(relators), name)


def _letter_positions(full: str, chunk: str, off: int):
    try:
        for tok, col in _letter_tokens(chunk, off):
            yield tok, col
    except PresentationError as err:
        raise PresentationError(str(err).split(" (line")[0], *_line_col(full, off)) from None


def _wrap_tokens(full: str, chunk: str, off: int):
    for tok, _ in _letter_positions(full, chunk, off):
        yield tok


@dataclass(frozen=True)
class Violation:
    """A proper subword ``relator[start:end]`` shown congruent to 1."""

    relator: int
    start: int
    end: int
    witness: object  # rewriting.Derivation from the subword to ε


def check_no_unit_proper_subword(p: SpecialPresentation, max_len: int = 6, max_steps: int = 10_000) -> list[Violation]:
    """Look for proper nonempty relator subwords congruent to 1.

    An empty list means nothing was found within the budget, not that none exist.
    """
    from .rewriting import congruence_search

    found = []
    for i, r in enumerate(p.relators):
        seen = set()
        for a in range(len(r)):
            for b in range(a + 1, len(r) + 1):
                if b - a == len(r):
                    continue
                sub = r[a:b]
                if sub in seen:
                    continue
                seen.add(sub)
                verdict = congruence_search(sub, "", p, max_len, max_steps)
                if verdict.equal:
                    found.append(Violation(i, a, b, verdict.derivation))
    return found
