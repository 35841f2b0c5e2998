"""String rewriting for special presentations.

Every rule carries a lazy proof: a small tree describing how ``lhs`` turns into
``rhs`` by inserting and deleting relators.  Expanding the proof of a chain of
reductions yields a :class:`Derivation` that replays step by step, so equality
claims made through a completed system stay checkable against the original
relators.
"""

from __future__ import annotations

import random
import time
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .presentations import SpecialPresentation

INSERT = "insert"
DELETE = "delete"


class InvalidDerivation(ValueError):
    pass


class RewritingError(RuntimeError):
    pass


@dataclass(frozen=True)
class Step:
    word: str  # the word after this step
    kind: str
    relator: int
    position: int


@dataclass(frozen=True)
class Derivation:
    """A witness for ``start <->* end``: one relator insertion or deletion per step."""

    start: str
    steps: tuple[Step, ...] = ()

    @property
    def end(self) -> str:
        return self.steps[-1].word if self.steps else self.start

    def __len__(self) -> int:
        return len(self.steps)

    def words(self) -> list[str]:
        return [self.start] + [s.word for s in self.steps]

    @classmethod
    def from_moves(cls, start: str, moves: Iterable[tuple[str, int, int]], relators: Sequence[str]) -> "Derivation":
        """Replay ``(kind, relator, position)`` moves from ``start``, validating each."""
        w, steps = start, []
        for kind, i, pos in moves:
            w = _apply(w, kind, i, pos, relators)
            steps.append(Step(w, kind, i, pos))
        return cls(start, tuple(steps))

    def moves(self) -> list[tuple[str, int, int]]:
        return [(s.kind, s.relator, s.position) for s in self.steps]

    def validate(self, relators: Sequence[str]) -> None:
        w = self.start
        for n, s in enumerate(self.steps):
            nxt = _apply(w, s.kind, s.relator, s.position, relators)
            if nxt != s.word:
                raise InvalidDerivation(f"step {n} records {s.word!r} but replays to {nxt!r}")
            w = nxt

    def inverse(self) -> "Derivation":
        words = self.words()
        steps = []
        for n in range(len(self.steps) - 1, -1, -1):
            s = self.steps[n]
            kind = DELETE if s.kind == INSERT else INSERT
            steps.append(Step(words[n], kind, s.relator, s.position))
        return Derivation(self.end, tuple(steps))

    def then(self, other: "Derivation") -> "Derivation":
        if other.start != self.end:
            raise InvalidDerivation("derivations do not compose")
        return Derivation(self.start, self.steps + other.steps)

    def to_json(self, render=None) -> dict:
        r = render or (lambda w: w)
        return {
            "start": r(self.start),
            "steps": [{"word": r(s.word), "direction": s.kind, "relator": s.relator, "position": s.position} for s in self.steps],
        }


def _apply(w: str, kind: str, i: int, pos: int, relators: Sequence[str]) -> str:
    if not 0 <= i < len(relators):
        raise InvalidDerivation(f"no relator {i}")
    r = relators[i]
    if kind == DELETE:
        if w[pos:pos + len(r)] != r or pos < 0:
            raise InvalidDerivation(f"relator {i} does not occur at {pos} in {w!r}")
        return w[:pos] + w[pos + len(r):]
    if kind == INSERT:
        if not 0 <= pos <= len(w):
            raise InvalidDerivation(f"insertion position {pos} outside {w!r}")
        return w[:pos] + r + w[pos:]
    raise InvalidDerivation(f"unknown step kind {kind!r}")


# Lazy proofs: ("del", i) | ("lift", proof, shift) | ("inv", proof) | ("seq", (proof, ...))
NIL = ("seq", ())


def _moves(proof) -> list[tuple[str, int, int]]:
    tag = proof[0]
    if tag == "del":
        return [(DELETE, proof[1], 0)]
    if tag == "lift":
        return [(k, i, pos + proof[2]) for k, i, pos in _moves(proof[1])]
    if tag == "inv":
        return [(DELETE if k == INSERT else INSERT, i, pos) for k, i, pos in reversed(_moves(proof[1]))]
    out = []
    for part in proof[1]:
        out.extend(_moves(part))
    return out


def _lift(proof, shift: int):
    if proof == NIL or shift == 0:
        return proof
    return ("lift", proof, shift)


def _seq(*parts):
    parts = tuple(p for p in parts if p != NIL)
    if not parts:
        return NIL
    return parts[0] if len(parts) == 1 else ("seq", parts)


def _inv(proof):
    return NIL if proof == NIL else ("inv", proof)


@dataclass(frozen=True)
class Rule:
    lhs: str
    rhs: str
    proof: tuple = field(default=NIL, compare=False, repr=False)


class ShortLex:
    """Shortlex order over a declared letter order."""

    def __init__(self, order: str):
        self.order = order
        self._table = {ord(c): n for n, c in enumerate(order)}

    def key(self, w: str) -> tuple[int, str]:
        return len(w), w.translate(self._table)

    def less(self, u: str, v: str) -> bool:
        return self.key(u) < self.key(v)


@dataclass(frozen=True)
class RewritingSystem:
    rules: tuple[Rule, ...]
    order: str
    relators: tuple[str, ...]
    complete: str = "unknown"  # "yes" | "no" | "unknown"

    def __post_init__(self) -> None:
        so = ShortLex(self.order)
        for r in self.rules:
            if not r.lhs or not so.less(r.rhs, r.lhs):
                raise RewritingError(f"rule {r.lhs!r} -> {r.rhs!r} is not shortlex decreasing")
        object.__setattr__(self, "_index", _RuleIndex(self.rules))

    @classmethod
    def special(cls, p: SpecialPresentation, order: str | None = None) -> "RewritingSystem":
        """The system ``{R_i -> ε}``, complete only once verified."""
        rules = tuple(Rule(r, "", ("del", i)) for i, r in enumerate(p.relators))
        return cls(rules, order or p.letters, p.relators)

    @property
    def shortlex(self) -> ShortLex:
        return ShortLex(self.order)

    def to_json(self, render=None) -> dict:
        r = render or (lambda w: w)
        return {
            "order": [r(c) for c in self.order],
            "complete": self.complete,
            "rules": [[r(x.lhs), r(x.rhs)] for x in self.rules],
        }


class _RuleIndex:
    """Rules bucketed by last letter, for suffix matching on a stack."""

    def __init__(self, rules: Sequence[Rule]):
        self.by_last: dict[str, list[tuple[int, Rule]]] = {}
        for n, r in enumerate(rules):
            self.by_last.setdefault(r.lhs[-1], []).append((n, r))


def reduce_once(w: str, rs: RewritingSystem) -> tuple[str, int, int] | None:
    """Rewrite the leftmost redex, lowest rule index first.  None iff ``w`` is irreducible."""
    best = None
    for n, r in enumerate(rs.rules):
        pos = w.find(r.lhs)
        if pos >= 0 and (best is None or pos < best[0]):
            best = (pos, n)
    if best is None:
        return None
    pos, n = best
    r = rs.rules[n]
    return w[:pos] + r.rhs + w[pos + len(r.lhs):], pos, n


def _reduce(w: str, rs: RewritingSystem, max_steps: int, with_proof: bool, irreducible_prefix: str = ""):
    """Reduce to an irreducible word by scanning with a stack.

    Returns (normal form, proof or NIL).  Letters move from ``pending`` onto
    ``stack``; after each push the rules whose lhs ends at the top are tried.
    The stack is irreducible throughout, so it may start from a known
    irreducible prefix.
    """
    index: _RuleIndex = rs._index  # type: ignore[attr-defined]
    stack: list[str] = list(irreducible_prefix)
    pending = list(reversed(w))
    proofs = []
    steps = 0
    while pending:
        ch = pending.pop()
        stack.append(ch)
        for _, rule in index.by_last.get(ch, ()):
            k = len(rule.lhs)
            if len(stack) >= k and "".join(stack[-k:]) == rule.lhs:
                steps += 1
                if steps > max_steps:
                    raise RewritingError(f"normalization exceeded {max_steps} steps")
                del stack[-k:]
                if with_proof:
                    proofs.append(_lift(rule.proof, len(stack)))
                pending.extend(reversed(rule.rhs))
                break
    return "".join(stack), (_seq(*proofs) if with_proof else NIL)


def normalize(w: str, rs: RewritingSystem, max_steps: int = 10**6) -> str:
    return _reduce(w, rs, max_steps, False)[0]


def normalize_product(nf: str, w: str, rs: RewritingSystem, max_steps: int = 10**6) -> str:
    """The normal form of ``nf·w`` where ``nf`` is already irreducible."""
    return _reduce(w, rs, max_steps, False, nf)[0]


def normalize_with_derivation(w: str, rs: RewritingSystem, max_steps: int = 10**6) -> tuple[str, Derivation]:
    nf, proof = _reduce(w, rs, max_steps, True)
    return nf, Derivation.from_moves(w, _moves(proof), rs.relators)


def is_irreducible(w: str, rs: RewritingSystem) -> bool:
    return all(r.lhs not in w for r in rs.rules)


@dataclass(frozen=True)
class CriticalPair:
    left: str
    right: str
    word: str
    rules: tuple[int, int]
    offset: int  # where the second rule's lhs starts in ``word``
    kind: str  # "overlap" | "inclusion"
    proof: tuple = field(default=NIL, compare=False, repr=False)


def _pairs_between(i: int, a: Rule, j: int, b: Rule) -> list[CriticalPair]:
    out = []
    # proper overlaps: a nonempty proper suffix of a.lhs equals a proper prefix of b.lhs
    for k in range(1, min(len(a.lhs), len(b.lhs))):
        if a.lhs[-k:] == b.lhs[:k]:
            off = len(a.lhs) - k
            word = a.lhs + b.lhs[k:]
            left = a.rhs + b.lhs[k:]
            right = a.lhs[:off] + b.rhs
            proof = _seq(_inv(a.proof), _lift(b.proof, off))
            out.append(CriticalPair(left, right, word, (i, j), off, "overlap", proof))
    # b.lhs occurring inside a.lhs
    if len(b.lhs) <= len(a.lhs):
        pos = a.lhs.find(b.lhs)
        while pos >= 0:
            if not (i == j and pos == 0):
                right = a.lhs[:pos] + b.rhs + a.lhs[pos + len(b.lhs):]
                proof = _seq(_inv(a.proof), _lift(b.proof, pos))
                out.append(CriticalPair(a.rhs, right, a.lhs, (i, j), pos, "inclusion", proof))
            pos = a.lhs.find(b.lhs, pos + 1)
    return out


def critical_pairs(rs: RewritingSystem) -> list[CriticalPair]:
    """All proper-overlap and inclusion pairs, as the two one-step reducts of the overlap word."""
    out = []
    for i, a in enumerate(rs.rules):
        for j, b in enumerate(rs.rules):
            out.extend(_pairs_between(i, a, j, b))
    return out


def verify_complete(rs: RewritingSystem) -> bool:
    """True iff every critical pair joins (with termination, this is confluence)."""
    return all(normalize(c.left, rs) == normalize(c.right, rs) for c in critical_pairs(rs))


@dataclass(frozen=True)
class CompletionResult:
    system: RewritingSystem
    unresolved: tuple[tuple[str, str], ...] = ()

    @property
    def complete(self) -> bool:
        return self.system.complete == "yes"


def knuth_bendix(rs: RewritingSystem, max_rules: int = 200, max_lhs_len: int = 30, max_equations: int = 20_000,
                 max_seconds: float | None = None) -> CompletionResult:
    """Shortlex Knuth-Bendix completion with explicit budgets.

    On success the returned system has ``complete == "yes"``.  When a budget
    is hit the partial system comes back with ``complete == "unknown"`` and the
    equations that could not be oriented within budget.  ``max_seconds`` bounds
    wall time, since a few thousand equations can already take minutes.
    """
    deadline = None if max_seconds is None else time.monotonic() + max_seconds
    so = ShortLex(rs.order)
    rules: list[Rule | None] = []
    equations = deque((r.lhs, r.rhs, r.proof) for r in rs.rules)
    unresolved: list[tuple[str, str]] = []
    checked = 0  # rules[:checked] already had pairwise critical pairs queued
    processed = 0

    cache: list = [None]

    def current() -> RewritingSystem:
        if cache[0] is None:
            cache[0] = RewritingSystem(tuple(r for r in rules if r is not None), rs.order, rs.relators)
        return cache[0]

    while True:
        while equations:
            processed += 1
            if processed > max_equations or (deadline is not None and time.monotonic() > deadline):
                processed = max(processed, max_equations + 1)
                unresolved.extend((s, t) for s, t, _ in equations)
                equations.clear()
                break
            s, t, proof = equations.popleft()  # proof: s -> t
            sys_now = current()
            s2, ps = _reduce(s, sys_now, 10**6, True)
            t2, pt = _reduce(t, sys_now, 10**6, True)
            if s2 == t2:
                continue
            # proof of s2 -> t2
            proof = _seq(_inv(ps), proof, pt)
            if so.less(s2, t2):
                s2, t2, proof = t2, s2, _inv(proof)
            live = sum(r is not None for r in rules)
            if live >= max_rules or len(s2) > max_lhs_len:
                unresolved.append((s2, t2))
                continue
            new = Rule(s2, t2, proof)
            # inter-reduce: rules whose lhs contains the new lhs go back to the queue
            for n, r in enumerate(rules):
                if r is None:
                    continue
                if s2 in r.lhs:
                    rules[n] = None
                    equations.append((r.lhs, r.rhs, r.proof))
                elif s2 in r.rhs:
                    rhs2, pr = _reduce(r.rhs, RewritingSystem((new,), rs.order, rs.relators), 10**6, True)
                    rules[n] = Rule(r.lhs, rhs2, _seq(r.proof, pr))
            rules.append(new)
            cache[0] = None
        live_idx = [n for n, r in enumerate(rules) if r is not None]
        fresh = []
        for n in live_idx:
            for m in live_idx:
                if n < checked and m < checked:
                    continue
                fresh.extend(_pairs_between(n, rules[n], m, rules[m]))
        checked = len(rules)
        if not fresh:
            # rhs rewriting during inter-reduction can unjoin old pairs; recheck everything
            sys_now = current()
            fresh = [c for c in critical_pairs(sys_now) if normalize(c.left, sys_now) != normalize(c.right, sys_now)]
            if not fresh:
                break
        if processed > max_equations:
            unresolved.extend((c.left, c.right) for c in fresh)
            break
        for c in fresh:
            equations.append((c.left, c.right, c.proof))
    final = current()
    status = "yes" if not unresolved and verify_complete(final) else "unknown"
    final = RewritingSystem(final.rules, final.order, final.relators, status)
    return CompletionResult(final, tuple(unresolved))


# --- equality verdicts -----------------------------------------------------------------


class Status(Enum):
    EQUAL = "equal"
    NOT_EQUAL = "not_equal"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class EqualityVerdict:
    status: Status
    derivation: Derivation | None = None
    certificate: object = None  # normal forms, image values, or search statistics

    @property
    def equal(self) -> bool:
        return self.status is Status.EQUAL

    @property
    def not_equal(self) -> bool:
        return self.status is Status.NOT_EQUAL

    @property
    def unknown(self) -> bool:
        return self.status is Status.UNKNOWN


@dataclass(frozen=True)
class SearchStats:
    expanded: int
    exhausted: bool  # every word of length <= max_len in the class was visited


def congruence_search(u: str, v: str, p: SpecialPresentation, max_len: int, max_steps: int) -> EqualityVerdict:
    """Bidirectional BFS over relator insertions and deletions.

    Words longer than ``max_len`` are never visited.  The result is Equal with
    a derivation, or Unknown; search alone never certifies inequality.
    """
    if max_len <= 0 or max_steps <= 0:
        raise ValueError("search budgets must be positive")
    if u == v:
        return EqualityVerdict(Status.EQUAL, Derivation(u))
    rels = p.relators
    # parent[w] = (previous word, kind, relator, position) along the BFS tree
    parents = ({u: None}, {v: None})
    frontiers = ([u], [v])
    expanded = 0
    while frontiers[0] and frontiers[1]:
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        mine, other = parents[side], parents[1 - side]
        nxt = []
        for w in frontiers[side]:
            expanded += 1
            if expanded > max_steps:
                return EqualityVerdict(Status.UNKNOWN, certificate=SearchStats(expanded - 1, False))
            for x, kind, i, pos in _neighbours(w, rels, max_len):
                if x in mine:
                    continue
                mine[x] = (w, kind, i, pos)
                if x in other:
                    return EqualityVerdict(Status.EQUAL, _join(x, parents, u, rels))
                nxt.append(x)
        frontiers = (nxt, frontiers[1]) if side == 0 else (frontiers[0], nxt)
    return EqualityVerdict(Status.UNKNOWN, certificate=SearchStats(expanded, True))


def _neighbours(w: str, rels: Sequence[str], max_len: int):
    for i, r in enumerate(rels):
        pos = w.find(r)
        while pos >= 0:
            yield w[:pos] + w[pos + len(r):], DELETE, i, pos
            pos = w.find(r, pos + 1)
    for i, r in enumerate(rels):
        if len(w) + len(r) <= max_len:
            for pos in range(len(w) + 1):
                yield w[:pos] + r + w[pos:], INSERT, i, pos


def _trace(x: str, parent: dict) -> list[tuple[str, str, int, int]]:
    """Edges from the BFS root to x, as (word after, kind, relator, position)."""
    out = []
    while parent[x] is not None:
        prev, kind, i, pos = parent[x]
        out.append((x, kind, i, pos))
        x = prev
    out.reverse()
    return out


def _join(meet: str, parents, u: str, rels) -> Derivation:
    from_u, from_v = _trace(meet, parents[0]), _trace(meet, parents[1])
    moves = [(k, i, pos) for _, k, i, pos in from_u]
    for _, k, i, pos in reversed(from_v):
        moves.append((DELETE if k == INSERT else INSERT, i, pos))
    return Derivation.from_moves(u, moves, rels)


@dataclass(frozen=True)
class CompleteRS:
    rs: RewritingSystem


@dataclass(frozen=True)
class Bounded:
    max_len: int = 12
    max_steps: int = 200_000
    images: tuple = ()  # HomImage objects used to refute equality


def word_problem(u: str, v: str, p: SpecialPresentation, strategy) -> EqualityVerdict:
    """Decide ``u <->* v``.

    ``CompleteRS`` compares normal forms and certifies both outcomes.
    ``Bounded`` refutes through declared homomorphic images, then searches.
    """
    if isinstance(strategy, CompleteRS):
        rs = strategy.rs
        if rs.complete != "yes":
            raise ValueError("CompleteRS strategy needs a system verified complete")
        nu, pu = _reduce(u, rs, 10**6, True)
        nv, pv = _reduce(v, rs, 10**6, True)
        if nu != nv:
            return EqualityVerdict(Status.NOT_EQUAL, certificate=("normal forms", nu, nv))
        moves = _moves(pu) + _moves(_inv(pv))
        return EqualityVerdict(Status.EQUAL, Derivation.from_moves(u, moves, rs.relators), ("normal form", nu))
    if isinstance(strategy, Bounded):
        if u == v:
            return EqualityVerdict(Status.EQUAL, Derivation(u))
        for image in strategy.images:
            a, b = image(u), image(v)
            if a != b:
                return EqualityVerdict(Status.NOT_EQUAL, certificate=("image", a, b))
        return congruence_search(u, v, p, strategy.max_len, strategy.max_steps)
    raise TypeError(f"unknown strategy {strategy!r}")


def deletion_path(w: str, target: str, p: SpecialPresentation) -> Derivation | None:
    """A deletion-only derivation ``w ->* target``, or None when none exists."""
    if len(w) < len(target):
        return None
    rels = p.relators
    parent = {w: None}
    queue = deque([w])
    while queue:
        x = queue.popleft()
        if x == target:
            return Derivation.from_moves(w, [(k, i, pos) for _, k, i, pos in _trace(x, parent)], rels)
        if len(x) <= len(target):
            continue
        for i, r in enumerate(rels):
            pos = x.find(r)
            while pos >= 0:
                y = x[:pos] + x[pos + len(r):]
                if y not in parent and len(y) >= len(target):
                    parent[y] = (x, DELETE, i, pos)
                    queue.append(y)
                pos = x.find(r, pos + 1)
    return None


def common_ancestor(d: Derivation, p: SpecialPresentation) -> str:
    """A word W with ``W ->* d.start`` and ``W ->* d.end`` using deletions only.

    Replays the derivation on a token list: inserted relator letters are added
    live right after the letter preceding the insertion point, deleted letters
    stay in place but go dead.  Dead letters between consecutive live ones
    always spell a word that deletes to ε, and inserted blocks can be removed
    in reverse order, which gives both reductions.
    """
    d.validate(p.relators)
    tokens = [[c, True] for c in d.start]  # [letter, live]
    for step in d.steps:
        live = [n for n, t in enumerate(tokens) if t[1]]
        r = p.relators[step.relator]
        if step.kind == INSERT:
            at = live[step.position - 1] + 1 if step.position > 0 else 0
            tokens[at:at] = [[c, True] for c in r]
        else:
            for n in live[step.position:step.position + len(r)]:
                tokens[n][1] = False
    return "".join(t[0] for t in tokens)


def random_maximal_reduction(w: str, rs: RewritingSystem, rng: random.Random, max_steps: int = 10**6) -> str:
    """Reduce with a random choice of redex at every step."""
    for _ in range(max_steps):
        redexes = []
        for n, r in enumerate(rs.rules):
            pos = w.find(r.lhs)
            while pos >= 0:
                redexes.append((pos, n))
                pos = w.find(r.lhs, pos + 1)
        if not redexes:
            return w
        pos, n = rng.choice(redexes)
        r = rs.rules[n]
        w = w[:pos] + r.rhs + w[pos + len(r.lhs):]
    raise RewritingError("reduction did not terminate within budget")
