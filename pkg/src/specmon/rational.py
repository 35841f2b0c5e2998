"""Bounded membership in rational subsets of a monoid.

A rational subset is the image of a regular language given by an automaton
(JSON) or a small regular expression.  Membership is searched in the product
of a Cayley-graph ball with the automaton; a negative answer only covers the
ball.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from .presentations import PresentationError, SpecialPresentation, _letter_tokens
from .rewriting import CompleteRS, Derivation, normalize_with_derivation, word_problem


class RegexError(ValueError):
    pass


@dataclass
class Nfa:
    """A nondeterministic automaton over the letters of a presentation (no ε-moves)."""

    states: list[int]
    transitions: list[tuple[int, str, int]]
    initial: int
    accepting: set[int]

    def __post_init__(self) -> None:
        known = set(self.states)
        if self.initial not in known or not self.accepting <= known:
            raise ValueError("initial and accepting states must be declared")
        for s, _, t in self.transitions:
            if s not in known or t not in known:
                raise ValueError(f"transition {s}->{t} uses an undeclared state")
        self._delta: dict[int, list[tuple[str, int]]] = {s: [] for s in self.states}
        for s, a, t in self.transitions:
            self._delta[s].append((a, t))

    def moves(self, state: int):
        return self._delta[state]

    def accepts(self, word: str) -> bool:
        current = {self.initial}
        for ch in word:
            current = {t for s in current for a, t in self._delta[s] if a == ch}
        return bool(current & self.accepting)

    def check_alphabet(self, p: SpecialPresentation) -> None:
        for _, a, _ in self.transitions:
            if a not in p.alphabet:
                raise PresentationError(f"automaton letter {a!r} is not in the alphabet")

    @classmethod
    def from_json(cls, data: dict, p: SpecialPresentation) -> "Nfa":
        if "regex" in data:
            return compile_regex(data["regex"], p)
        nfa = cls(list(data["states"]), [(s, p.word(a), t) for s, a, t in data["transitions"]],
                  data["initial"], set(data["accepting"]))
        for _, a, _ in nfa.transitions:
            if len(a) != 1:
                raise PresentationError("automaton transitions must read single letters")
        return nfa

    @classmethod
    def load(cls, path: str | Path, p: SpecialPresentation) -> "Nfa":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")), p)


# --- regular expressions: letters, juxtaposition, |, *, parentheses, ε -----------------------


_EPS = object()  # the empty word, kept apart from every operator and letter


def _tokens(text: str, p: SpecialPresentation) -> list:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()|*":
            out.append(ch)
            i += 1
        elif ch == "ε":
            out.append(_EPS)
            i += 1
        else:
            j = i
            if ch == "[":
                j = text.index("]", i) + 1
            else:
                j = i + 1
                while j < len(text) and 0x300 <= ord(text[j]) < 0x370:  # combining marks
                    j += 1
            (name, _), = _letter_tokens(text[i:j])
            try:
                out.append(p.alphabet.char(name))
            except KeyError:
                raise RegexError(f"{name!r} is not a letter of the presentation") from None
            i = j
    return out


class _Thompson:
    def __init__(self):
        self.n = 0
        self.edges: list[tuple[int, str, int]] = []  # "" labels are ε-moves

    def state(self) -> int:
        self.n += 1
        return self.n - 1

    def atom(self, label: str) -> tuple[int, int]:
        s, t = self.state(), self.state()
        self.edges.append((s, label, t))
        return s, t


def compile_regex(text: str, p: SpecialPresentation) -> Nfa:
    """Thompson construction followed by ε-closure."""
    toks = _tokens(text, p)
    th = _Thompson()
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def union():
        nonlocal pos
        s, t = concat()
        while peek() == "|":
            pos += 1
            s2, t2 = concat()
            a, b = th.state(), th.state()
            th.edges += [(a, "", s), (a, "", s2), (t, "", b), (t2, "", b)]
            s, t = a, b
        return s, t

    def concat():
        s, t = th.atom("")
        while peek() is not None and peek() not in ("|", ")"):
            s2, t2 = star()
            th.edges.append((t, "", s2))
            t = t2
        return s, t

    def star():
        nonlocal pos
        s, t = atom()
        while peek() == "*":
            pos += 1
            a, b = th.state(), th.state()
            th.edges += [(a, "", s), (t, "", b), (a, "", b), (t, "", s)]
            s, t = a, b
        return s, t

    def atom():
        nonlocal pos
        tok = peek()
        if tok is None:
            raise RegexError("unexpected end of expression")
        pos += 1
        if tok == "(":
            s, t = union()
            if peek() != ")":
                raise RegexError("missing closing parenthesis")
            pos += 1
            return s, t
        if tok in ("|", ")", "*"):
            raise RegexError(f"unexpected {tok!r}")
        return th.atom("" if tok is _EPS else tok)

    start, end = union()
    if pos != len(toks):
        raise RegexError(f"unexpected {toks[pos]!r}")
    eps: dict[int, set[int]] = {s: {s} for s in range(th.n)}
    changed = True
    while changed:
        changed = False
        for s, label, t in th.edges:
            if label == "":
                for x in range(th.n):
                    if s in eps[x] and not eps[t] <= eps[x]:
                        eps[x] |= eps[t]
                        changed = True
    transitions = sorted({(x, a, t) for x in range(th.n) for s, a, t in th.edges if a and s in eps[x]})
    accepting = {x for x in range(th.n) if end in eps[x]}
    return Nfa(list(range(th.n)), transitions, start, accepting)


# --- membership -------------------------------------------------------------------------------


@dataclass(frozen=True)
class MembershipResult:
    status: str  # "yes" | "no_within_bound" | "aborted"
    witness: str | None = None
    derivation: Derivation | None = None  # witness <->* query
    radius: int | None = None
    detail: str = ""
    explored: int = field(default=0, compare=False)

    @property
    def yes(self) -> bool:
        return self.status == "yes"

    def to_json(self, render=None) -> dict:
        r = render or (lambda w: w)
        out = {"status": self.status, "radius": self.radius, "explored": self.explored}
        if self.witness is not None:
            out["witness"] = r(self.witness)
        if self.derivation is not None:
            out["derivation"] = self.derivation.to_json(render)
        if self.detail:
            out["detail"] = self.detail
        return out


def rational_member(p: SpecialPresentation, nfa: Nfa, w: str, radius: int, strategy,
                    max_words: int = 100_000) -> MembershipResult:
    """Is the element of ``w`` the image of some word accepted by ``nfa``?

    With a complete system the search runs over pairs (element, state) for
    elements whose normal form path stays in the ball of ``radius``; without
    one it tries accepted words of length at most ``radius`` one by one.
    """
    if isinstance(strategy, CompleteRS):
        return _member_complete(p, nfa, w, radius, strategy.rs)
    return _member_bounded(p, nfa, w, radius, strategy, max_words)


def _member_complete(p, nfa, w, radius, rs) -> MembershipResult:
    from .schutz import cayley_ball

    cb = cayley_ball(p, radius, CompleteRS(rs))
    target_nf, to_target = normalize_with_derivation(w, rs)
    target = cb.vertex_of(w)
    start = (cb.graph.root, nfa.initial)
    parent: dict[tuple[int, int], tuple | None] = {start: None}
    queue = deque([start])
    while queue:
        v, s = queue.popleft()
        if v == target and s in nfa.accepting:
            word = _spell(parent, (v, s))
            _, to_nf = normalize_with_derivation(word, rs)
            return MembershipResult("yes", word, to_nf.then(to_target.inverse()), radius, explored=len(parent))
        for a, t in nfa.moves(s):
            for v2 in cb.graph.out(v, a):
                if (v2, t) not in parent:
                    parent[(v2, t)] = ((v, s), a)
                    queue.append((v2, t))
    detail = "elements outside the ball were not explored"
    if target is None:
        detail = f"the query lies outside the ball ({p.render(target_nf)}); " + detail
    return MembershipResult("no_within_bound", radius=radius, detail=detail, explored=len(parent))


def _spell(parent, state) -> str:
    out = []
    while parent[state] is not None:
        state, a = parent[state]
        out.append(a)
    return "".join(reversed(out))


def _member_bounded(p, nfa, w, radius, strategy, max_words) -> MembershipResult:
    queue = deque([("", nfa.initial)])
    seen = {("", nfa.initial)}
    while queue:
        word, s = queue.popleft()
        if s in nfa.accepting:
            v = word_problem(word, w, p, strategy)
            if v.equal:
                return MembershipResult("yes", word, v.derivation, radius, explored=len(seen))
            if v.unknown:
                return MembershipResult("aborted", word, radius=radius,
                                        detail=f"cannot decide {p.render(word)} = {p.render(w)}", explored=len(seen))
        if len(word) == radius:
            continue
        for a, t in nfa.moves(s):
            if (word + a, t) not in seen:
                if len(seen) >= max_words:
                    return MembershipResult("aborted", radius=radius, detail="word budget exhausted", explored=len(seen))
                seen.add((word + a, t))
                queue.append((word + a, t))
    return MembershipResult("no_within_bound", radius=radius,
                            detail="no accepted word up to this length equals the query", explored=len(seen))
