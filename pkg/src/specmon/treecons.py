"""Trees of copies of a rooted graph and the hypotheses that keep their folds tame.

A vertex of the tree of copies is a tuple ``(u0, ..., uk)``: every entry but
the last is an attachment vertex of the base graph, and for ``k > 0`` the last
entry is not the root (that vertex is the attachment point itself).  Each
attachment vertex is a cut vertex, so the distance of a tuple from the root is
the sum of the base-graph distances of its entries.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from .graph import LabelledGraph, distances, fold, induced_isomorphic, is_deterministic

TreeVertex = tuple[int, ...]


class RootInAttachSet(ValueError):
    pass


def depth_of(v: TreeVertex) -> int:
    return len(v) - 1


@dataclass
class TreeOfCopies:
    base: LabelledGraph
    attach: frozenset[int]
    graph: LabelledGraph
    tuples: dict[int, TreeVertex]  # materialized vertex id -> tuple
    ids: dict[TreeVertex, int] = field(repr=False)
    max_depth: int | None
    max_radius: int | None

    def depth(self, v: int) -> int:
        return depth_of(self.tuples[v])

    @property
    def branch_points(self) -> set[int]:
        return {v for v, t in self.tuples.items() if t[-1] in self.attach}

    def to_json(self) -> dict:
        out = self.graph.to_json()
        out["tuples"] = {str(v): list(t) for v, t in sorted(self.tuples.items())}
        return out


def _canonical(prefix: TreeVertex, u: int, root: int) -> TreeVertex:
    # the root of an attached copy is the attachment vertex itself
    if u == root and prefix:
        return prefix
    return prefix + (u,)


def tree_of_copies(g: LabelledGraph, attach: Iterable[int], max_depth: int | None = None,
                   max_radius: int | None = None) -> TreeOfCopies:
    """Materialize the tuples within ``max_radius`` of the root and of depth at most ``max_depth``.

    Vertices with a neighbour that was not materialized are put on the horizon,
    as are those sitting over horizon vertices of ``g``.
    """
    root = g.root
    attach = frozenset(attach)
    if root in attach:
        raise RootInAttachSet("the root cannot be an attachment vertex")
    if max_depth is None and max_radius is None and attach:
        raise ValueError("an infinite tree of copies needs a depth or radius bound")
    dist = distances(g)

    def weight(t: TreeVertex) -> int:
        return sum(dist[u] for u in t)

    def admissible(t: TreeVertex) -> bool:
        return (max_depth is None or depth_of(t) <= max_depth) and (max_radius is None or weight(t) <= max_radius)

    def neighbours(t: TreeVertex):
        """Undirected neighbours as (label, other tuple, outgoing?) in the infinite tree."""
        prefix, u = t[:-1], t[-1]
        roles = [(prefix, u)]
        if u in attach:
            roles.append((t, root))  # t is the root of the copy attached at t
        for pre, local in roles:
            for label, w in g.out_edges(local):
                yield label, _canonical(pre, w, root), True
            for label, w in g.in_edges(local):
                yield label, _canonical(pre, w, root), False

    tg = LabelledGraph()
    ids: dict[TreeVertex, int] = {}
    tuples: dict[int, TreeVertex] = {}

    def vid(t: TreeVertex) -> int:
        if t not in ids:
            ids[t] = tg.add_vertex(len(ids))
            tuples[ids[t]] = t
        return ids[t]

    start = (root,)
    tg.root = vid(start)
    queue = deque([start])
    while queue:
        t = queue.popleft()
        v = ids[t]
        if t[-1] in g.horizon:
            tg.horizon.add(v)
        for label, other, outgoing in neighbours(t):
            if not admissible(other):
                tg.horizon.add(v)
                continue
            fresh = other not in ids
            w = vid(other)
            if outgoing:
                tg.add_edge(v, label, w)
            else:
                tg.add_edge(w, label, v)
            if fresh:
                queue.append(other)
    return TreeOfCopies(g, attach, tg, tuples, ids, max_depth, max_radius)


def check_tuple_edges(tree: TreeOfCopies) -> list[tuple[int, str, int]]:
    """Edges that fit none of the three shapes: same copy, into a new copy, back to an attachment vertex."""
    g, root, attach = tree.base, tree.base.root, tree.attach
    bad = []
    for o, label, t in tree.graph.edges():
        u, w = tree.tuples[o], tree.tuples[t]
        same = len(u) == len(w) and u[:-1] == w[:-1] and t in tree.graph and w[-1] in g.out(u[-1], label)
        down = len(w) == len(u) + 1 and w[:-1] == u and u[-1] in attach and w[-1] in g.out(root, label)
        up = len(u) == len(w) + 1 and u[:-1] == w and w[-1] in attach and root in g.out(u[-1], label)
        loop = u == w and u[-1] in attach and root in g.out(root, label)
        if not (same or down or up or loop):
            bad.append((o, label, t))
    return bad


# --- hypotheses ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Overlap:
    word: str
    from_root: tuple[int, ...]
    from_attach: tuple[int, ...]


def check_overlap_free(g: LabelledGraph, attach: Iterable[int], max_path_len: int,
                       starts: Iterable[int] | None = None) -> tuple[bool, Overlap | None]:
    """Search for a nonempty word read from the root and from an attachment vertex into a non-attachment vertex.

    Walks are explored in lockstep as pairs of vertices, so each pair is
    visited once per length at most.  ``starts`` restricts the attachment
    vertices used as origins (e.g. to those away from a ball's horizon).
    """
    attach = set(attach)
    starts = attach if starts is None else set(starts) & attach
    root = g.root
    parent: dict[tuple[int, int], tuple[tuple[int, int] | None, str]] = {}
    frontier = []
    for s in sorted(starts):
        parent[(root, s)] = (None, "")
        frontier.append((root, s))
    for _ in range(max_path_len):
        nxt = []
        for x, y in frontier:
            for label, x2 in g.out_edges(x):
                for y2 in g.out(y, label):
                    state = (x2, y2)
                    if state in parent:
                        continue
                    parent[state] = ((x, y), label)
                    if y2 not in attach:
                        return False, _overlap(parent, state)
                    nxt.append(state)
        frontier = nxt
        if not frontier:
            break
    return True, None


def _overlap(parent, state) -> Overlap:
    word, p1, p2 = [], [state[0]], [state[1]]
    while parent[state][0] is not None:
        state, label = parent[state]
        word.append(label)
        p1.append(state[0])
        p2.append(state[1])
    return Overlap("".join(reversed(word)), tuple(reversed(p1)), tuple(reversed(p2)))


def check_fullness(g: LabelledGraph, class_of: Mapping[int, Hashable], attach: Iterable[int]) -> tuple[bool, tuple[int, str, int] | None]:
    """Every edge between distinct classes must end outside the attachment set."""
    attach = set(attach)
    for o, label, t in sorted(g.edges()):
        if class_of[o] != class_of[t] and t in attach:
            return False, (o, label, t)
    return True, None


@dataclass(frozen=True)
class BoundedFoldingReport:
    classes_finite_and_uniform: bool
    full: bool
    overlap_free_up_to_bound: bool
    omega: int
    full_witness: tuple | None = None
    overlap_witness: Overlap | None = None
    classes_checked: int = 0

    @property
    def all_true(self) -> bool:
        return self.classes_finite_and_uniform and self.full and self.overlap_free_up_to_bound

    def to_json(self) -> dict:
        return {
            "classes_finite_and_uniform": self.classes_finite_and_uniform,
            "full": self.full,
            "overlap_free_up_to_bound": self.overlap_free_up_to_bound,
            "omega": self.omega,
            "classes_checked": self.classes_checked,
        }


def check_bounded_folding(g: LabelledGraph, class_of: Mapping[int, Hashable], attach: Iterable[int],
                          max_path_len: int, overlap_starts: Iterable[int] | None = None,
                          within: Iterable[int] | None = None) -> BoundedFoldingReport:
    """Shape uniformity of the classes, fullness and overlap-freeness in one report.

    Uniformity stands in for almost-transitivity: every class must induce a
    labelled subgraph isomorphic to the root's class, by a map that respects
    membership of the attachment set.  With ``within`` only classes lying
    entirely in that vertex set are compared, since a ball truncates the
    classes on its horizon.
    """
    attach = set(attach)
    members: dict[Hashable, list[int]] = {}
    for v in g.vertices:
        members.setdefault(class_of[v], []).append(v)
    if within is not None:
        within = set(within)
        members = {k: vs for k, vs in members.items() if all(v in within for v in vs)}
    if class_of[g.root] not in members:
        raise ValueError("the root's class does not lie inside the checked region")
    template = members[class_of[g.root]]
    uniform = all(
        len(vs) == len(template) and induced_isomorphic(g, template, g, vs, marked=attach)
        for vs in members.values()
    )
    full, witness = check_fullness(g, class_of, attach)
    free, overlap = check_overlap_free(g, attach, max_path_len, overlap_starts)
    return BoundedFoldingReport(uniform, full, free, len(template), witness, overlap, len(members))


def fold_depth_spread(tree: TreeOfCopies) -> int:
    """The largest depth spread among vertices of one attached copy after folding.

    For each copy (tuples sharing a prefix) the depth of a folded class is the
    least depth of its members; the spread is max minus min over the copy.
    """
    folded, vmap = fold(tree.graph)
    class_depth: dict[int, int] = {}
    for v, t in tree.tuples.items():
        c = vmap[v]
        class_depth[c] = min(class_depth.get(c, depth_of(t)), depth_of(t))
    copies: dict[TreeVertex, list[int]] = {}
    for v, t in tree.tuples.items():
        copies.setdefault(t[:-1], []).append(class_depth[vmap[v]])
    return max((max(ds) - min(ds) for ds in copies.values()), default=0)


# --- small graphs used by examples and tests ------------------------------------------------


def flower(words: Iterable[str]) -> LabelledGraph:
    """A root with one petal (closed path) per word."""
    g = LabelledGraph(0)
    for w in words:
        prev = 0
        for k, ch in enumerate(w):
            nxt = 0 if k == len(w) - 1 else g.add_vertex()
            g.add_edge(prev, ch, nxt)
            prev = nxt
    return g


def cycle_graph(word: str) -> LabelledGraph:
    """A single directed cycle through the root spelling ``word``."""
    return flower([word])


__all__ = [
    "RootInAttachSet", "TreeOfCopies", "TreeVertex", "tree_of_copies", "depth_of", "check_tuple_edges",
    "Overlap", "check_overlap_free", "check_fullness", "BoundedFoldingReport", "check_bounded_folding",
    "fold_depth_spread", "flower", "cycle_graph", "is_deterministic",
]
