"""The Schützenberger graph of the units.

Pipeline: a ball in the Cayley graph of the group of units over the piece
names, each piece-edge subdivided into a path spelling the piece, vertices
with congruent prefixes identified inside each unit's class, then the edges
forced by ``ξ·a = ζ`` added uniformly to every class.

Unit elements are keyed by one of three equality oracles: normal forms under
a complete system for the monoid, normal forms under a completed presentation
of the units over class names, or pairwise bounded search with homomorphic
images refuting inequality.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .graph import LabelledGraph, ball, distances, is_deterministic
from .pieces import PieceTable, UndecidedEquality, compute_unit_presentation
from .presentations import SpecialPresentation
from .rewriting import Bounded, CompleteRS, RewritingSystem, knuth_bendix, normalize, word_problem

log = logging.getLogger(__name__)


class HorizonTooSmall(RuntimeError):
    pass


# --- unit equality -------------------------------------------------------------------------


class UnitKeys:
    """Hashable canonical keys for unit elements given as piece sequences."""

    mode: str

    def key(self, word: str, classes: tuple[int, ...]) -> Hashable:
        raise NotImplementedError


class NormalFormKeys(UnitKeys):
    mode = "complete"

    def __init__(self, rs: RewritingSystem):
        self.rs = rs

    def key(self, word, classes):
        return normalize(word, self.rs)


class ClassPresentationKeys(UnitKeys):
    """Normal forms in a completed special presentation of the units over class names."""

    mode = "units"

    def __init__(self, rs: RewritingSystem, letters: str):
        self.rs = rs
        self.letters = letters  # class index -> letter of the class presentation

    @classmethod
    def build(cls, pt: PieceTable, max_rules: int = 100, max_lhs_len: int = 20) -> "ClassPresentationKeys | None":
        cp = compute_unit_presentation(pt).class_presentation()
        result = knuth_bendix(RewritingSystem.special(cp), max_rules, max_lhs_len)
        if not result.complete:
            return None
        return cls(result.system, "".join(cp.alphabet.char(f"b{k + 1}") for k in range(pt.kappa)))

    def key(self, word, classes):
        return normalize("".join(self.letters[k] for k in classes), self.rs)


class SearchKeys(UnitKeys):
    """Pairwise word problems against the representatives met so far."""

    mode = "bounded"

    def __init__(self, p: SpecialPresentation, strategy: Bounded):
        self.p, self.strategy = p, strategy
        self.reps: dict[tuple, list[str]] = {}

    def key(self, word, classes):
        signature = tuple(image(word) for image in self.strategy.images)
        bucket = self.reps.setdefault(signature, [])
        for rep in bucket:
            v = word_problem(word, rep, self.p, self.strategy)
            if v.equal:
                return rep
            if v.unknown:
                raise UndecidedEquality(word, rep, self.p.render)
        bucket.append(word)
        return word


def unit_keys(p: SpecialPresentation, pt: PieceTable, strategy) -> UnitKeys:
    if isinstance(strategy, CompleteRS):
        return NormalFormKeys(strategy.rs)
    keys = ClassPresentationKeys.build(pt)
    if keys is not None:
        return keys
    return SearchKeys(p, strategy)


# --- the unit ball ---------------------------------------------------------------------------


@dataclass
class UnitBall:
    graph: LabelledGraph  # labels are piece names b{i}_{j}
    keys: dict[int, Hashable]  # vertex -> unit key
    words: dict[int, str]  # vertex -> a representative product of pieces
    classes: dict[int, tuple[int, ...]]  # vertex -> the same product over class indices
    radius: int
    names: dict[str, str]  # piece name -> piece
    mode: str

    def vertex_of(self, key: Hashable) -> int | None:
        return self._index.get(key)

    def __post_init__(self) -> None:
        self._index = {k: v for v, k in self.keys.items()}


def _piece_inverses(pt: PieceTable) -> dict[str, tuple[str, tuple[int, ...]]]:
    """For each piece, a product of pieces inverse to it, from a cyclic rotation of its relator."""
    out = {}
    for fs in pt.factorizations:
        for j, w in enumerate(fs):
            if w in out:
                continue
            rest = fs[j + 1:] + fs[:j]
            out[w] = ("".join(rest), tuple(pt.class_of(x) for x in rest))
    return out


def build_unit_ball(p: SpecialPresentation, pt: PieceTable, radius: int, strategy, directed: bool = False,
                    keys: UnitKeys | None = None) -> UnitBall:
    """BFS from the identity, right-multiplying by pieces (and their inverses unless ``directed``)."""
    keys = keys or unit_keys(p, pt, strategy)
    names = dict(pt.frak_b)
    inverses = _piece_inverses(pt)
    g = LabelledGraph(0)
    vkeys: dict[int, Hashable] = {0: keys.key("", ())}
    index = {vkeys[0]: 0}
    words, cls = {0: ""}, {0: ()}
    dist = {0: 0}
    queue = deque([0] if radius > 0 else [])

    def visit(word, classes, d):
        k = keys.key(word, classes)
        v = index.get(k)
        if v is None:
            v = g.add_vertex()
            index[k] = v
            vkeys[v], words[v], cls[v], dist[v] = k, word, classes, d
            if d < radius:
                queue.append(v)
        return v

    while queue:
        v = queue.popleft()
        for name, w in names.items():
            c = pt.class_of(w)
            t = visit(words[v] + w, cls[v] + (c,), dist[v] + 1)
            g.add_edge(v, name, t)
            if not directed:
                iw, ic = inverses[w]
                visit(words[v] + iw, cls[v] + ic, dist[v] + 1)
    # edges among ball vertices that BFS did not record (from the outermost layer)
    for v in list(g.vertices):
        for name, w in names.items():
            if g.out(v, name):
                continue
            k = keys.key(words[v] + w, cls[v] + (pt.class_of(w),))
            t = index.get(k)
            if t is not None:
                g.add_edge(v, name, t)
            else:
                g.horizon.add(v)
        if dist[v] == radius and not directed:
            g.horizon.add(v)
    if not directed:
        g = ball(g, radius)
        g.horizon |= {v for v in g.vertices if dist[v] == radius}
    ub = UnitBall(g, {v: vkeys[v] for v in g.vertices}, {v: words[v] for v in g.vertices},
                  {v: cls[v] for v in g.vertices}, radius, names, keys.mode)
    return ub


# --- the units graph -------------------------------------------------------------------------


@dataclass
class UnitsGraph:
    graph: LabelledGraph
    unit_of: dict[int, int]  # vertex -> vertex of the unit ball (its ∼_i class)
    prefix: dict[int, str]  # vertex -> ξ (a representative of its prefix class)
    piece: dict[int, str | None]  # vertex -> λ before the ∼_M quotient, None afterwards
    unit_ball: UnitBall = field(repr=False)
    table: PieceTable = field(repr=False)
    hair_tips: frozenset[int] = frozenset()
    stage: str = "U0"

    @property
    def locally_invertible(self) -> set[int]:
        return {v for v, xi in self.prefix.items() if xi == "" and v not in self.hair_tips}

    @property
    def n_set(self) -> set[int]:
        return {v for v, xi in self.prefix.items() if xi != "" and v not in self.hair_tips}

    def sim_i(self, v: int) -> Hashable:
        return self.unit_ball.keys[self.unit_of[v]]

    def class_of(self) -> dict[int, Hashable]:
        return {v: self.unit_of[v] for v in self.graph.vertices}

    def literal(self, v: int) -> str:
        """The word u0·ξ reaching ``v`` from the root."""
        return self.unit_ball.words[self.unit_of[v]] + self.prefix[v]

    def to_json(self, render=None) -> dict:
        r = render or (lambda w: w)
        out = self.graph.to_json()
        out["stage"] = self.stage
        out["payload"] = {
            str(v): {"unit": r(self.unit_ball.words[self.unit_of[v]]), "xi": r(self.prefix[v]),
                     **({"lambda": r(self.piece[v])} if self.piece.get(v) else {})}
            for v in sorted(self.graph.vertices) if v not in self.hair_tips
        }
        out["hair_tips"] = sorted(self.hair_tips)
        return out

    def to_dot(self, name: str = "U") -> str:
        return self.graph.to_dot(name, highlight=self.locally_invertible)


def build_U0(ub: UnitBall, pt: PieceTable) -> UnitsGraph:
    """Replace every piece-edge by a path spelling the piece."""
    g = LabelledGraph(0)
    unit_of, prefix, piece = {}, {}, {}
    local: dict[int, int] = {}
    for m in sorted(ub.graph.vertices):
        v = 0 if m == ub.graph.root else g.add_vertex()
        local[m] = v
        unit_of[v], prefix[v], piece[v] = m, "", None
    for m in sorted(ub.graph.vertices):
        for name, w in ub.names.items():
            targets = ub.graph.out(m, name)
            prev = local[m]
            for k in range(1, len(w)):
                x = g.add_vertex()
                unit_of[x], prefix[x], piece[x] = m, w[:k], w
                g.add_edge(prev, w[k - 1], x)
                prev = x
            if targets:
                g.add_edge(prev, w[-1], local[next(iter(targets))])
            else:
                g.horizon.add(prev)
        if m in ub.graph.horizon:
            g.horizon.add(local[m])
    return UnitsGraph(g, unit_of, prefix, piece, ub, pt, stage="U0")


def prefix_partition(p: SpecialPresentation, pt: PieceTable, strategy) -> dict[str, str]:
    """Map each element of 𝔓_ε to the first congruent prefix (ε first, then by length)."""
    prefixes = sorted(pt.frak_p_eps, key=lambda w: (len(w), w))
    rep: dict[str, str] = {}
    leaders: list[str] = []
    for xi in prefixes:
        for lead in leaders:
            v = word_problem(xi, lead, p, strategy)
            if v.equal:
                rep[xi] = lead
                break
            if v.unknown:
                raise UndecidedEquality(xi, lead, p.render)
        else:
            leaders.append(xi)
            rep[xi] = xi
    return rep


def quotient_simM(u0: UnitsGraph, p: SpecialPresentation, strategy) -> UnitsGraph:
    """Identify (m, ξ, λ1) with (m, ζ, λ2) whenever ξ and ζ are congruent."""
    rep = prefix_partition(p, u0.table, strategy)
    target: dict[tuple[int, str], int] = {}
    vmap = {}
    for v in sorted(u0.graph.vertices):
        k = (u0.unit_of[v], rep[u0.prefix[v]])
        vmap[v] = target.setdefault(k, v)
    g = LabelledGraph()
    for v in set(vmap.values()):
        g.add_vertex(v)
    g.root = vmap[u0.graph.root]
    for o, label, t in u0.graph.edges():
        g.add_edge(vmap[o], label, vmap[t])
    g.horizon = {vmap[v] for v in u0.graph.horizon}
    keep = set(vmap.values())
    return UnitsGraph(g, {v: u0.unit_of[v] for v in keep}, {v: rep[u0.prefix[v]] for v in keep},
                      {v: None for v in keep}, u0.unit_ball, u0.table, stage="U'")


@dataclass(frozen=True)
class EdgeTemplate:
    """Edges forced inside every class (``into`` a prefix) or into the next unit (``piece``)."""

    source: str
    label: str
    into: str | None = None
    piece: str | None = None


def edge_templates(p: SpecialPresentation, pt: PieceTable, strategy) -> list[EdgeTemplate]:
    """All ξ·a = ζ (ζ ∈ 𝔓_ε) and ξ·a = λ (λ a piece) relations between prefix classes."""
    rep = prefix_partition(p, pt, strategy)
    leaders = sorted(set(rep.values()), key=lambda w: (len(w), w))
    out = []
    for xi in leaders:
        for a in p.letters:
            found = False
            for zeta in leaders:
                v = word_problem(xi + a, zeta, p, strategy)
                if v.unknown:
                    raise UndecidedEquality(xi + a, zeta, p.render)
                if v.equal:
                    out.append(EdgeTemplate(xi, a, into=zeta))
                    found = True
            if found:
                continue
            for lam in pt.pieces:
                v = word_problem(xi + a, lam, p, strategy)
                if v.unknown:
                    raise UndecidedEquality(xi + a, lam, p.render)
                if v.equal:
                    out.append(EdgeTemplate(xi, a, piece=lam))
                    break
    return out


def add_missing_edges(u: UnitsGraph, p: SpecialPresentation, strategy) -> UnitsGraph:
    """Add every templated edge to every class; the result is 𝔘 (restricted to the ball)."""
    pt, ub = u.table, u.unit_ball
    g = u.graph.copy()
    where: dict[tuple[int, str], int] = {(u.unit_of[v], u.prefix[v]): v for v in g.vertices}
    name_of = {w: pt.frak_b[[x for _, x in pt.frak_b].index(w)][0] for w in pt.pieces}
    for tpl in edge_templates(p, pt, strategy):
        for m in ub.graph.vertices:
            src = where.get((m, tpl.source))
            if src is None:
                continue
            if tpl.into is not None:
                g.add_edge(src, tpl.label, where[(m, tpl.into)])
                continue
            nxt = ub.graph.out(m, name_of[tpl.piece])
            if nxt:
                g.add_edge(src, tpl.label, where[(next(iter(nxt)), "")])
            else:
                g.horizon.add(src)
    ok, witness = is_deterministic(g)
    if not ok:
        raise AssertionError(f"units graph is not deterministic at {witness}")
    return UnitsGraph(g, dict(u.unit_of), dict(u.prefix), dict(u.piece), ub, pt, stage="U")


def build_units_graph(p: SpecialPresentation, pt: PieceTable, radius: int, strategy,
                      keys: UnitKeys | None = None) -> UnitsGraph:
    """The ball of radius ``radius`` in 𝔘.

    A vertex at distance d in 𝔘 lies over a unit at distance at most d in the
    unit ball (each piece is at least one letter), so a unit ball of the same
    radius is enough.
    """
    ub = build_unit_ball(p, pt, radius, strategy, keys=keys)
    full = add_missing_edges(quotient_simM(build_U0(ub, pt), p, strategy), p, strategy)
    g = ball(full.graph, radius)
    keep = set(g.vertices)
    return UnitsGraph(g, {v: full.unit_of[v] for v in keep}, {v: full.prefix[v] for v in keep},
                      {v: None for v in keep}, ub, pt, stage="U")


def hairy(u: UnitsGraph, alphabet: Iterable[str]) -> UnitsGraph:
    """Add an a-edge to a fresh tip wherever a vertex has no outgoing a-edge.

    Horizon vertices are left alone: their missing edges may simply lie
    outside the ball.  Hairs are checked to be uniform across classes.
    """
    g = u.graph.copy()
    unit_of, prefix = dict(u.unit_of), dict(u.prefix)
    tips = set()
    pattern: dict[str, set[str]] = {}
    for v in sorted(u.graph.vertices):
        if v in u.graph.horizon or v in u.hair_tips:
            continue
        missing = {a for a in alphabet if not u.graph.out(v, a)}
        known = pattern.setdefault(prefix[v], missing)
        if known != missing:
            raise AssertionError(f"hairs differ between classes at prefix {prefix[v]!r}")
        for a in sorted(missing):
            t = g.add_vertex()
            g.add_edge(v, a, t)
            tips.add(t)
            unit_of[t], prefix[t] = unit_of[v], prefix[v] + a
    return UnitsGraph(g, unit_of, prefix, {v: None for v in g.vertices}, u.unit_ball, u.table,
                      frozenset(tips), stage="U(h)")


def embed_in_R1_check(u: UnitsGraph, r1: LabelledGraph, radius: int | None = None) -> bool:
    """Check that (m, ξ) -> m·π(ξ) is injective and faithful against a ball of ℜ₁.

    The map is propagated along edges of 𝔘 from the root.  Every vertex of 𝔘
    within ``radius`` (default: the ℜ₁ ball's radius minus one) must be
    mapped; edges are compared between mapped vertices whose images are off
    the horizon of ``r1``.
    """
    du = distances(u.graph)
    dr = distances(r1)
    if radius is None:
        radius = max(dr.values(), default=0) - 1
    phi = {u.graph.root: r1.root}
    queue = deque([u.graph.root])
    while queue:
        x = queue.popleft()
        for label, y in u.graph.out_edges(x):
            if y in phi or y in u.hair_tips:
                continue
            img = r1.out(phi[x], label)
            if img:
                phi[y] = next(iter(img))
                queue.append(y)
        for label, y in u.graph.in_edges(x):
            if y in phi:
                continue
            cands = r1.inn(phi[x], label)
            if len(cands) == 1:
                phi[y] = next(iter(cands))
                queue.append(y)
    wanted = [v for v, d in du.items() if d <= radius and v not in u.hair_tips]
    if any(v not in phi for v in wanted):
        raise HorizonTooSmall("some vertices of the units graph have no image in the ℜ₁ ball")
    images = [phi[v] for v in wanted]
    if len(set(images)) != len(images):
        return False
    inverse = {phi[v]: v for v in wanted}
    for v in wanted:
        x = phi[v]
        if x in r1.horizon or v in u.graph.horizon:
            continue
        for label, y in u.graph.out_edges(v):
            if y in inverse.values() and y in phi and phi[y] not in r1.out(x, label):
                return False
        for label, z in r1.out_edges(x):
            if z in inverse and inverse[z] not in u.graph.out(v, label):
                return False
    return True
