"""The Schützenberger graph of 1, three ways, and Cayley-graph balls.

``stephen_ball`` expands relator loops and folds; ``r1_via_tree`` folds a
tree of copies of the units graph; ``right_invertible_subgraph`` restricts a
Cayley-graph ball built from normal forms.  The three are independent and
are compared against each other in the tests.
"""

from __future__ import annotations

import logging
from bisect import bisect_right
from collections import deque
from dataclasses import dataclass, field

import networkx as nx

from .graph import LabelledGraph, ball, distances, fold, fold_in_place, is_deterministic, rooted_iso
from .pieces import PieceTable
from .presentations import SpecialPresentation
from .rewriting import CompleteRS, normalize, normalize_product
from .treecons import tree_of_copies
from .units import HorizonTooSmall, UnitsGraph, build_units_graph

log = logging.getLogger(__name__)

CERTIFIED = "certified"
HEURISTIC = "heuristic"


@dataclass
class SchutzBall:
    graph: LabelledGraph
    radius: int
    method: str  # "stephen" | "tree" | "cayley"
    saturation: str
    rounds: int = 0
    margin: int = 0

    def to_json(self) -> dict:
        out = self.graph.to_json()
        out.update(radius=self.radius, method=self.method, saturation=self.saturation,
                   rounds=self.rounds, margin=self.margin)
        return out


# --- Stephen expansion ---------------------------------------------------------------------


def _read(g: LabelledGraph, v: int, word: str) -> tuple[int, int]:
    """Follow ``word`` from ``v`` as far as the graph allows: (last vertex, letters read)."""
    k = 0
    while k < len(word):
        nxt = g.step(v, word[k])
        if nxt is None:
            break
        v, k = nxt, k + 1
    return v, k


def expand(g: LabelledGraph, scope, relators, closed: set[int] | None = None) -> tuple[LabelledGraph, bool, dict[int, int]]:
    """One round: close a relator loop at every vertex of ``scope``, folding ``g`` in place.

    A relator read in full from ``v`` to another vertex identifies the two
    at once, so later expansions in the round see the merged graph.
    Vertices in ``closed`` already read every relator back to themselves and
    stay that way under folding, so they are skipped.  Returns the graph,
    whether anything changed, and the surviving vertex of each merged one.
    """
    closed = set() if closed is None else closed
    alias: dict[int, int] = {}
    changed = False
    out, inn = g._out, g._in  # the inner loop is hot enough to bypass the accessors
    for v in sorted(scope):
        if v in closed or v not in out:
            continue
        for r in relators:
            x, k = v, 0
            while k < len(r):
                ts = out[x].get(r[k])
                if not ts:
                    break
                (x,) = ts
                k += 1
            if k == len(r):
                if x != v:
                    merged = fold_in_place(g, [(x, v)], dirty=())
                    alias.update(merged)
                    changed = True
                    if v in merged:
                        break
                continue
            changed = True
            for ch in r[k:-1]:
                y = g._next
                g._next += 1
                out[y], inn[y] = {}, {ch: {x}}
                out[x][ch] = {y}
                x = y
            out[x][r[-1]] = {v}
            inn[v].setdefault(r[-1], set()).add(x)
        else:
            closed.add(v)

    def find(x: int) -> int:
        while x in alias:
            x = alias[x]
        return x

    return g, changed, {x: find(x) for x in alias}


def stephen_ball(p: SpecialPresentation, radius: int, stabilization_rounds: int = 1, margin: int | None = None,
                 max_vertices: int = 2_000_000, max_rounds: int = 1000) -> SchutzBall:
    """Expand from a single vertex until the ball of ``radius`` stops changing.

    Vertices within ``radius + margin`` are expanded (margin defaults to the
    longest relator).  If a round changes nothing and every vertex was in
    scope the graph is closed under expansion and the result is certified.
    """
    if radius < 0 or stabilization_rounds < 1:
        raise ValueError("radius must be non-negative and stabilization_rounds positive")
    margin = max(map(len, p.relators), default=0) if margin is None else margin
    g = LabelledGraph(0)
    previous = ball(g, radius)
    stable = 0
    closed: set[int] = set()
    for rounds in range(1, max_rounds + 1):
        scope = distances(g, limit=radius + margin)
        g, changed, merged = expand(g, [v for v, d in scope.items() if d <= radius + margin], p.relators, closed)
        closed = {merged.get(v, v) for v in closed}
        current = ball(g, radius)
        if not changed and len(scope) == len(g):
            return SchutzBall(current, radius, "stephen", CERTIFIED, rounds, margin)
        if rooted_iso(previous, current) is not None:
            stable += 1
            if stable >= stabilization_rounds:
                return SchutzBall(current, radius, "stephen", HEURISTIC, rounds, margin)
        else:
            stable = 0
        previous = current
        if len(g) > max_vertices:
            raise RuntimeError(f"Stephen expansion exceeded {max_vertices} vertices")
    raise RuntimeError(f"Stephen expansion did not stabilize within {max_rounds} rounds")


# --- folding the tree of copies ------------------------------------------------------------


def r1_via_tree(u: UnitsGraph, radius: int, margin: int | None = None) -> SchutzBall:
    """Fold the tree of copies of ``u`` (attached at its non-locally-invertible vertices).

    ``u`` must be a units-graph ball of radius at least ``radius + margin``.
    The margin defaults to twice the longest piece plus the longest relator.
    """
    p = u.table.presentation
    if margin is None:
        margin = 2 * u.table.max_piece_length + max(map(len, p.relators), default=0)
    reach = max(distances(u.graph).values())
    if reach < radius + margin and u.graph.horizon:
        raise HorizonTooSmall(f"units ball reaches {reach}, need {radius + margin}")
    tree = tree_of_copies(u.graph, u.n_set, max_radius=radius + margin)
    folded, _ = fold(tree.graph)
    return SchutzBall(ball(folded, radius), radius, "tree", HEURISTIC, 0, margin)


def _deterministic_tree(p, pt, radius, strategy) -> SchutzBall | None:
    """The tree of copies itself when it is already deterministic, else None.

    The tree is deterministic iff the base is and no attachment vertex has an
    out-label in common with the root; then folding is the identity and the
    ball of the tree is exact.
    """
    u = build_units_graph(p, pt, radius + 1, strategy)
    g = u.graph
    if not is_deterministic(g)[0]:
        return None
    root_labels = g.out_labels(g.root)
    for x in u.n_set:
        if x in g.horizon and distances(g, limit=radius).get(x, radius + 1) <= radius:
            return None
        if g.out_labels(x) & root_labels:
            return None
    tree = tree_of_copies(g, u.n_set, max_radius=radius)
    return SchutzBall(tree.graph, radius, "tree", CERTIFIED, 0, 0)


class TreeFolder:
    """The fold of the tree of copies, built by attaching copies to the partly folded graph.

    Folding is confluent, so attaching a copy of the base at every
    attachment vertex of the current quotient and folding again reaches the
    same limit as folding the whole tree.  Each copy is cut at the depth
    still inside the current reach.  When a vertex comes closer to the root
    after a merge, or the reach grows, its copy is deepened in place: the
    images of its old vertices are found through the merge history.
    """

    def __init__(self, u: UnitsGraph):
        self.u = u
        base = u.graph
        self.base_dist = distances(base)
        self.attach_base = u.n_set
        # base vertices and edges in order of the depth at which a copy first contains them
        self.layers = sorted((d, b) for b, d in self.base_dist.items() if b != base.root)
        self.edge_layers = sorted((max(self.base_dist[o], self.base_dist[t]), o, label, t)
                                  for o, label, t in base.edges())
        self.g = LabelledGraph(0)
        self.attach: set[int] = set()
        self.copies: dict[int, tuple[int, dict[int, int]]] = {}  # site -> (depth, base vertex -> image)
        self.alias: dict[int, int] = {}
        self.dirty: set[int] = set()  # sources of edges added since the last fold
        self.rounds = 0

    @property
    def base_reach(self) -> float:
        return max(self.base_dist.values()) if self.u.graph.horizon else float("inf")

    def find(self, x: int) -> int:
        root = x
        while root in self.alias:
            root = self.alias[root]
        while x in self.alias and self.alias[x] != root:
            self.alias[x], x = root, self.alias[x]
        return root

    def graft(self, at: int, depth: int) -> None:
        old, image = self.copies.get(at, (-1, None))
        if image is None:
            image = {self.u.graph.root: at}
        g, find = self.g, self.find
        for d, b in self.layers[bisect_right(self.layers, (old, float("inf"))):]:
            if d > depth:
                break
            image[b] = v = g.add_vertex()
            if b in self.attach_base:
                self.attach.add(v)
        for d, o, label, t in self.edge_layers[bisect_right(self.edge_layers, (old, float("inf"))):]:
            if d > depth:
                break
            src = image[o] = find(image[o])
            g.add_edge(src, label, find(image[t]))
            self.dirty.add(src)
        self.copies[at] = (depth, image)

    def extend(self, reach: int, max_rounds: int = 10_000) -> LabelledGraph:
        """Attach and fold until every site within ``reach`` carries a deep enough copy."""
        if self.base_reach < reach:
            raise HorizonTooSmall(f"units ball reaches {self.base_reach}, need {reach}")
        g = self.g
        for _ in range(max_rounds):
            dist = distances(g, limit=reach)
            todo = [(x, reach - d) for x, d in dist.items()
                    if (x in self.attach or x == g.root) and reach - d > self.copies.get(x, (-1,))[0]]
            if not todo:
                return g
            self.rounds += 1
            for x, depth in todo:
                self.graft(x, depth)
            merged = fold_in_place(g, dirty=self.dirty)
            self.dirty = set()
            if not merged:
                continue
            self.alias.update(merged)
            self.attach = {self.find(a) for a in self.attach}
            copies: dict[int, tuple[int, dict[int, int]]] = {}
            for x, entry in self.copies.items():
                y = self.find(x)
                if y not in copies or entry[0] > copies[y][0]:
                    copies[y] = entry
            self.copies = copies
        raise RuntimeError(f"tree fold did not settle within {max_rounds} rounds")


def r1_via_tree_lazy(u: UnitsGraph, radius: int, margin: int) -> SchutzBall:
    """The ball of ``radius`` in the fold of the tree of copies cut at ``radius + margin``."""
    folder = TreeFolder(u)
    g = folder.extend(radius + margin)
    return SchutzBall(ball(g, radius), radius, "tree", HEURISTIC, folder.rounds, margin)


def r1_ball_via_tree(p: SpecialPresentation, pt: PieceTable, radius: int, strategy,
                     start_margin: int | None = None, max_margin: int = 40, settle: int = 1) -> SchutzBall:
    """The lazy tree fold with the margin grown until the ball of ``radius`` is unchanged.

    A fixed margin of twice the longest piece plus the longest relator is
    safe but costly, since the ball of ℜ₁ grows exponentially; most
    presentations settle far sooner.  The margin starts at the longest piece
    (smaller margins can look stable while still wrong) and stops growing
    once ``settle`` consecutive increments leave the ball unchanged.
    """
    exact = _deterministic_tree(p, pt, radius, strategy)
    if exact is not None:
        return exact
    span = 12
    u = build_units_graph(p, pt, radius + span, strategy)
    folder = TreeFolder(u)
    m = pt.max_piece_length if start_margin is None else start_margin
    previous, same = None, 0
    while m <= max_margin:
        if radius + m > folder.base_reach:
            span *= 2
            u = build_units_graph(p, pt, radius + span, strategy)
            folder = TreeFolder(u)
        current = ball(folder.extend(radius + m), radius)
        if previous is not None and rooted_iso(previous, current) is not None:
            same += 1
            if same >= settle:
                return SchutzBall(current, radius, "tree", HEURISTIC, folder.rounds, m)
        else:
            same = 0
        previous = current
        m += 1
    raise HorizonTooSmall(f"tree fold did not settle with margin up to {max_margin}")


# --- Cayley-graph balls ----------------------------------------------------------------------


@dataclass
class CayleyBall:
    graph: LabelledGraph
    radius: int
    words: dict[int, str]  # vertex -> normal form
    system: object = field(repr=False, default=None)

    def vertex_of(self, word: str) -> int | None:
        return self._index.get(normalize(word, self.system))

    def __post_init__(self) -> None:
        self._index = {w: v for v, w in self.words.items()}

    def to_json(self, render=None) -> dict:
        r = render or (lambda w: w)
        out = self.graph.to_json()
        out["radius"] = self.radius
        out["words"] = {str(v): r(w) for v, w in sorted(self.words.items())}
        return out


def _require_complete(strategy):
    if not isinstance(strategy, CompleteRS):
        raise ValueError("Cayley balls need a complete rewriting system")
    return strategy.rs


def predecessors(y: str, p: SpecialPresentation, rs) -> set[tuple[str, str]]:
    """All (x, a) with x·a = y, as normal forms.

    An edge inside a strong component lies on a closed walk spelling a
    relator, so ``x`` is ``y`` times the rest of a rotated relator; the one
    edge entering a component is the last letter of the entry's normal form.
    """
    out = set()
    if y:
        out.add((y[:-1], y[-1]))
    for r in p.relators:
        for j, a in enumerate(r):
            x = normalize_product(y, r[j + 1:] + r[:j], rs)
            if normalize_product(x, a, rs) == y:
                out.add((x, a))
    return out


def cayley_ball(p: SpecialPresentation, radius: int, strategy) -> CayleyBall:
    """The undirected ball of the right Cayley graph, one vertex per normal form."""
    rs = _require_complete(strategy)
    letters = p.letters
    g = LabelledGraph(0)
    index = {"": 0}
    words = {0: ""}
    dist = {0: 0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        y, d = words[v], dist[v]
        nbrs = [(True, a, normalize_product(y, a, rs)) for a in letters]
        nbrs += [(False, a, x) for x, a in predecessors(y, p, rs)]
        for forward, a, w in nbrs:
            t = index.get(w)
            if t is None:
                if d == radius:
                    g.horizon.add(v)
                    continue
                t = g.add_vertex()
                index[w], words[t], dist[t] = t, w, d + 1
                queue.append(t)
            if forward:
                g.add_edge(v, a, t)
            else:
                g.add_edge(t, a, v)
    return CayleyBall(g, radius, words, rs)


def _inside(x: str, a: str, y: str, relators, rs) -> bool:
    """Whether the edge x -a-> y stays in its strong component: x·a·w = x for a rotated relator a·w."""
    return any(normalize_product(y, r[j + 1:] + r[:j], rs) == x
               for r in relators for j, ch in enumerate(r) if ch == a)


def right_unit_flags(cb: CayleyBall, p: SpecialPresentation) -> dict[int, bool]:
    """Which vertices of the ball are right invertible, decided exactly.

    Along the normal form of ``y`` the path from 1 never re-enters a strong
    component it has left, so ``y`` is right invertible iff every edge of
    that path stays inside its component.
    """
    rs = cb.system
    memo: dict[str, bool] = {"": True}

    def flag(y: str) -> bool:
        if y not in memo:
            memo[y] = flag(y[:-1]) and _inside(y[:-1], y[-1], y, p.relators, rs)
        return memo[y]

    for w in sorted(cb.words.values(), key=len):
        flag(w)
    return {v: memo[w] for v, w in cb.words.items()}


def right_invertible_subgraph(cb: CayleyBall, p: SpecialPresentation) -> tuple[LabelledGraph, list[int]]:
    """The subgraph induced on right-invertible vertices, plus undecided vertices (always none here)."""
    flags = right_unit_flags(cb, p)
    g = cb.graph.induced(v for v, ok in flags.items() if ok)
    return g, []


def r1_via_cayley(p: SpecialPresentation, radius: int, strategy) -> SchutzBall:
    g, _ = right_invertible_subgraph(cayley_ball(p, radius, strategy), p)
    return SchutzBall(g, radius, "cayley", CERTIFIED)


# --- condensation ----------------------------------------------------------------------------


@dataclass
class Condensation:
    dag: nx.DiGraph  # nodes are component indices; node attribute "members"
    component_of: dict[int, int]
    entering: dict[int, list[tuple[int, str, int]]]
    interior: set[int]
    root_component: int

    @property
    def acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.dag)

    @property
    def unique_entry(self) -> bool:
        """Every interior component other than the root's has exactly one entering edge."""
        return all(len(self.entering[c]) == 1 for c in self.interior if c != self.root_component)

    def violations(self) -> list[int]:
        return sorted(c for c in self.interior if c != self.root_component and len(self.entering[c]) != 1)

    def to_json(self) -> dict:
        return {
            "components": self.dag.number_of_nodes(),
            "acyclic": self.acyclic,
            "unique_entry": self.unique_entry,
            "interior": len(self.interior),
            "entering_counts": {str(c): len(e) for c, e in sorted(self.entering.items())},
        }


def condensation(cb: CayleyBall) -> Condensation:
    """Strong components of the Cayley graph met by the ball, and the edges entering each.

    A ball can cut a component into pieces that are only strongly connected
    through vertices outside it, so components are not read off the ball.
    Each edge is classified exactly as internal or not (``x·a·w = x`` for a
    rotated relator ``a·w``), internal edges are merged, and every vertex is
    merged with the target of the last non-internal edge on its normal-form
    path, which lies in its component.  Entering edges are counted only at
    vertices off the horizon, whose in-edges are all present; a component is
    interior when some member lies strictly inside the ball.
    """
    g, rs = cb.graph, cb.system
    relators = rs.relators
    words, index = cb.words, cb._index
    uf = nx.utils.UnionFind(g.vertices)
    crossing = []
    for o, label, t in g.edges():
        if _inside(words[o], label, words[t], relators, rs):
            uf.union(o, t)
        else:
            crossing.append((o, label, t))
    entry: dict[str, str] = {"": ""}  # normal form -> normal form where its component was entered

    def entered_at(y: str) -> str:
        if y not in entry:
            x = y[:-1]
            entry[y] = entered_at(x) if _inside(x, y[-1], y, relators, rs) else y
        return entry[y]

    for v, w in sorted(words.items(), key=lambda item: len(item[1])):
        t = index.get(entered_at(w))
        if t is not None:
            uf.union(v, t)
    comps = [set(c) for c in uf.to_sets()]
    component_of = {v: i for i, c in enumerate(comps) for v in c}
    dag = nx.DiGraph()
    dag.add_nodes_from((i, {"members": c}) for i, c in enumerate(comps))
    entering: dict[int, list] = {i: [] for i in range(len(comps))}
    for o, label, t in crossing:
        dag.add_edge(component_of[o], component_of[t])
        if t not in g.horizon:
            entering[component_of[t]].append((o, label, t))
    dist = distances(g)
    interior = {i for i, c in enumerate(comps) if min(dist[v] for v in c) < cb.radius}
    return Condensation(dag, component_of, entering, interior, component_of[g.root])


__all__ = [
    "SchutzBall", "CayleyBall", "Condensation", "stephen_ball", "expand", "r1_via_tree", "r1_ball_via_tree",
    "cayley_ball", "predecessors", "right_unit_flags", "right_invertible_subgraph", "r1_via_cayley",
    "condensation", "is_deterministic", "CERTIFIED", "HEURISTIC",
]
