"""Rooted edge-labelled digraphs.

Vertices are opaque integers, edges are ``(origin, label, terminus)`` triples
and parallel edges with the same label are one edge.  Vertices of a truncated
ball that may have neighbours outside it carry a horizon flag, which end
computations use to refuse answers they cannot back up.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

BAR = "̄"  # combining macron marks reversed edges in lud


class IncompleteEnd(RuntimeError):
    pass


class LabelledGraph:
    def __init__(self, root: int | None = None):
        self._out: dict[int, dict[str, set[int]]] = {}
        self._in: dict[int, dict[str, set[int]]] = {}
        self.horizon: set[int] = set()
        self._next = 0
        self.root = None
        if root is not None:
            self.add_vertex(root)
            self.root = root

    # --- building -------------------------------------------------------------------

    def add_vertex(self, v: int | None = None) -> int:
        if v is None:
            v = self._next
        if v not in self._out:
            self._out[v] = {}
            self._in[v] = {}
            if v >= self._next:
                self._next = v + 1
        return v

    def add_edge(self, o: int, label: str, t: int) -> None:
        if o not in self._out:
            self.add_vertex(o)
        if t not in self._out:
            self.add_vertex(t)
        self._out[o].setdefault(label, set()).add(t)
        self._in[t].setdefault(label, set()).add(o)

    def remove_vertex(self, v: int) -> None:
        for label, ts in self._out.pop(v).items():
            for t in ts:
                if t != v:
                    self._in[t][label].discard(v)
                    if not self._in[t][label]:
                        del self._in[t][label]
        for label, os in self._in.pop(v).items():
            for o in os:
                if o != v:
                    self._out[o][label].discard(v)
                    if not self._out[o][label]:
                        del self._out[o][label]
        self.horizon.discard(v)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, str, int]], root: int | None = None, vertices: Iterable[int] = ()) -> "LabelledGraph":
        g = cls(root)
        for v in vertices:
            g.add_vertex(v)
        for o, label, t in edges:
            g.add_edge(o, label, t)
        return g

    def copy(self) -> "LabelledGraph":
        return self.induced(self.vertices)

    # --- queries ----------------------------------------------------------------------

    @property
    def vertices(self) -> list[int]:
        return list(self._out)

    def __contains__(self, v: object) -> bool:
        return v in self._out

    def __len__(self) -> int:
        return len(self._out)

    def edges(self) -> Iterator[tuple[int, str, int]]:
        for o, by_label in self._out.items():
            for label, ts in by_label.items():
                for t in ts:
                    yield o, label, t

    @property
    def num_edges(self) -> int:
        return sum(len(ts) for by in self._out.values() for ts in by.values())

    @property
    def labels(self) -> set[str]:
        return {label for by in self._out.values() for label in by}

    def out(self, v: int, label: str) -> set[int]:
        return self._out[v].get(label, set())

    def inn(self, v: int, label: str) -> set[int]:
        return self._in[v].get(label, set())

    def out_edges(self, v: int) -> Iterator[tuple[str, int]]:
        for label, ts in self._out[v].items():
            for t in ts:
                yield label, t

    def in_edges(self, v: int) -> Iterator[tuple[str, int]]:
        for label, os in self._in[v].items():
            for o in os:
                yield label, o

    def out_labels(self, v: int) -> set[str]:
        return set(self._out[v])

    def step(self, v: int, label: str) -> int | None:
        """The unique ``label``-successor of ``v``, or None.  Raises if there are several."""
        ts = self._out[v].get(label)
        if not ts:
            return None
        if len(ts) > 1:
            raise ValueError(f"vertex {v} has several {label!r}-edges")
        return next(iter(ts))

    def read(self, v: int, word: Iterable[str]) -> int | None:
        """Follow a path of labels from ``v`` in a deterministic graph."""
        for label in word:
            v = self.step(v, label)
            if v is None:
                return None
        return v

    def neighbours(self, v: int) -> set[int]:
        out = set()
        for ts in self._out[v].values():
            out |= ts
        for os in self._in[v].values():
            out |= os
        return out

    def induced(self, keep: Iterable[int]) -> "LabelledGraph":
        keep = set(keep)
        g = LabelledGraph()
        for v in self._out:
            if v in keep:
                g.add_vertex(v)
        for o in keep:
            for label, ts in self._out.get(o, {}).items():
                for t in ts:
                    if t in keep:
                        g.add_edge(o, label, t)
        if self.root in keep:
            g.root = self.root
        g.horizon = self.horizon & keep
        g._next = self._next
        return g

    def relabelled(self, mapping: Mapping[int, int]) -> "LabelledGraph":
        g = LabelledGraph()
        for v in self._out:
            g.add_vertex(mapping[v])
        for o, label, t in self.edges():
            g.add_edge(mapping[o], label, mapping[t])
        if self.root is not None:
            g.root = mapping[self.root]
        g.horizon = {mapping[v] for v in self.horizon}
        return g

    # --- export -----------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": sorted(self._out),
            "edges": sorted([o, label, t] for o, label, t in self.edges()),
            "root": self.root,
            "horizon": sorted(self.horizon),
        }

    def to_dot(self, name: str = "G", frontier: Iterable[int] = (), vertex_label: Callable[[int], str] | None = None,
               highlight: Iterable[int] = ()) -> str:
        frontier, highlight = set(frontier), set(highlight)
        lines = [f"digraph {name} {{"]
        for v in sorted(self._out):
            attrs = [f'label="{vertex_label(v) if vertex_label else v}"']
            if v == self.root:
                attrs.append("shape=doublecircle")
            if v in frontier:
                attrs.append('style=filled fillcolor="lightblue"')
            elif v in highlight:
                attrs.append('style=filled fillcolor="palegreen"')
            if v in self.horizon:
                attrs.append("peripheries=2" if v != self.root else "")
            lines.append(f"  {v} [{' '.join(a for a in attrs if a)}];")
        for o, label, t in sorted(self.edges()):
            lines.append(f'  {o} -> {t} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines)


# --- folding ----------------------------------------------------------------------------


def fold(g: LabelledGraph, identify: Iterable[tuple[int, int]] = ()) -> tuple[LabelledGraph, dict[int, int]]:
    """Quotient by the least congruence making ``g`` deterministic.

    ``identify`` lists extra pairs of vertices forced into one class.  The
    root's class is named by the root, every other class by its smallest
    member.  Returns the quotient and the map from old to new vertices.
    """
    h = g.copy()
    merged = fold_in_place(h, identify)
    return h, {v: merged.get(v, v) for v in g.vertices}


def fold_in_place(g: LabelledGraph, identify: Iterable[tuple[int, int]] = (),
                  dirty: Iterable[int] | None = None) -> dict[int, int]:
    """Fold ``g`` itself; returns the surviving vertex for every removed one.

    Two vertices are merged by moving the edges of one onto the other, so the
    cost is proportional to the degrees of merged vertices.  A clash between
    out-edges with one label queues another pair.  When ``dirty`` is given,
    only those vertices are scanned for initial clashes.
    """
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        root = x
        while root in parent:
            root = parent[root]
        while x in parent and parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def clash(ts: set[int]) -> None:
        if len(ts) > 1:
            it = iter(ts)
            pending.append((next(it), next(it)))

    pending = list(identify)
    scan = g._out.values() if dirty is None else (g._out[v] for v in dirty if v in g._out)
    for by_label in scan:
        for ts in by_label.values():
            clash(ts)
    out, inn = g._out, g._in
    while pending:
        a, b = pending.pop()
        a, b = find(a), find(b)
        if a == b:
            continue
        if b == g.root or (a != g.root and b < a):
            a, b = b, a
        parent[b] = a
        b_out, b_in = out.pop(b), inn.pop(b)
        for label, ts in b_out.items():
            for t in ts:
                if t == b:
                    t = a
                else:
                    _discard(inn[t], label, b)
                targets = out[a].setdefault(label, set())
                targets.add(t)
                inn[t].setdefault(label, set()).add(a)
                clash(targets)
        for label, os in b_in.items():
            for o in os:
                if o == b:
                    continue  # a loop at b, moved with the out-edges
                targets = out[o][label]
                targets.discard(b)
                targets.add(a)
                inn[a].setdefault(label, set()).add(o)
                clash(targets)
        if b in g.horizon:
            g.horizon.discard(b)
            g.horizon.add(a)
    return {v: find(v) for v in parent}


def _discard(by_label: dict[int, set[int]], label: str, v: int) -> None:
    ts = by_label.get(label)
    if ts is not None:
        ts.discard(v)
        if not ts:
            del by_label[label]


def is_deterministic(g: LabelledGraph) -> tuple[bool, tuple[int, str, int, int] | None]:
    for v in g.vertices:
        for label, ts in g._out[v].items():
            if len(ts) > 1:
                a, b = sorted(ts)[:2]
                return False, (v, label, a, b)
    return True, None


def bar(label: str) -> str:
    return label[:-1] if label.endswith(BAR) else label + BAR


def lud(g: LabelledGraph) -> LabelledGraph:
    """Add a reversed edge labelled with the barred label for every edge."""
    h = g.copy()
    for o, label, t in list(g.edges()):
        h.add_edge(t, bar(label), o)
    return h


# --- metric -------------------------------------------------------------------------------


def distances(g: LabelledGraph, source: int | None = None, limit: int | None = None) -> dict[int, int]:
    """Undirected BFS distances from ``source`` (the root by default)."""
    source = g.root if source is None else source
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        d = dist[v]
        if limit is not None and d >= limit:
            continue
        for w in g.neighbours(v):
            if w not in dist:
                dist[w] = d + 1
                queue.append(w)
    return dist


def ball(g: LabelledGraph, radius: float, center: int | None = None) -> LabelledGraph:
    """Induced subgraph on vertices within undirected distance ``radius``.

    ``ball(g, 0)`` is the root alone.  Vertices with a neighbour outside the
    result, or already on the horizon of ``g``, are flagged.
    """
    center = g.root if center is None else center
    dist = distances(g, center, None if radius == float("inf") else int(radius) + 1)
    keep = {v for v, d in dist.items() if d <= radius}
    h = g.induced(keep)
    h.root = center
    for v in keep:
        if v in g.horizon or any(w not in keep for w in g.neighbours(v)):
            h.horizon.add(v)
    return h


# --- ends -----------------------------------------------------------------------------------


@dataclass(frozen=True)
class EndSpace:
    """The component of ``v`` after removing vertices closer to the root than ``v``.

    With a ``depth`` the component is taken inside the annulus of vertices at
    distance ``|v|`` to ``|v| + depth``.
    """

    host: LabelledGraph = field(repr=False)
    base: int
    vertices: frozenset[int]
    frontier: frozenset[int]
    complete: bool
    level: int
    depth: int | None = None
    dist: Mapping[int, int] = field(default_factory=dict, repr=False, compare=False)

    def graph(self) -> LabelledGraph:
        return self.host.induced(self.vertices)

    def truncated(self, depth: int) -> "EndSpace":
        if self.depth is not None and depth > self.depth:
            raise IncompleteEnd("cannot deepen a truncated end")
        return end_space(self.host, self.base, depth, self.dist)


def end_space(g: LabelledGraph, v: int, depth: int | None = None, dist: Mapping[int, int] | None = None) -> EndSpace:
    if g.root is None:
        raise ValueError("end spaces need a rooted graph")
    dist = distances(g) if dist is None else dist
    n = dist[v]
    top = None if depth is None else n + depth
    seen = {v}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        for y in g.neighbours(x):
            if y not in seen and dist.get(y, -1) >= n and (top is None or dist[y] <= top):
                seen.add(y)
                queue.append(y)
    frontier = frozenset(x for x in seen if dist[x] == n)
    if top is None:
        complete = not (seen & g.horizon)
    else:
        complete = not any(x in g.horizon and dist[x] < top for x in seen)
    return EndSpace(g, v, frozenset(seen), frontier, complete, n, depth, dist)


def _colour_refine(g: LabelledGraph, verts: set[int], base: Mapping[int, Hashable], rounds: int = 3) -> dict[int, Hashable]:
    """Weisfeiler-Leman style colours of ``verts`` using edges inside ``verts``."""
    colour = {v: hash(("base", base[v])) for v in verts}
    for _ in range(rounds):
        new = {}
        for v in verts:
            outs = sorted((label, colour[t]) for label, t in g.out_edges(v) if t in verts)
            ins = sorted((label, colour[o]) for label, o in g.in_edges(v) if o in verts)
            new[v] = hash((colour[v], tuple(outs), tuple(ins)))
        colour = new
    return colour


def _match(g1: LabelledGraph, v1: set[int], g2: LabelledGraph, v2: set[int],
           c1: Mapping[int, Hashable], c2: Mapping[int, Hashable], seeds: Sequence[tuple[int, int]] = ()) -> dict[int, int] | None:
    """Find a label- and colour-preserving isomorphism between induced subgraphs.

    Backtracking over candidate images; out- and in-neighbours of mapped
    vertices are matched label by label, and forced choices are propagated
    before branching.
    """
    if len(v1) != len(v2):
        return None
    if Counter(c1[v] for v in v1) != Counter(c2[v] for v in v2):
        return None
    e1 = [(o, label, t) for o, label, t in g1.edges() if o in v1 and t in v1]
    e2 = {(o, label, t) for o, label, t in g2.edges() if o in v2 and t in v2}
    if len(e1) != len(e2):
        return None
    if not v1:
        return {}

    def adj(g, verts, v):
        out = {}
        for label, t in g.out_edges(v):
            if t in verts:
                out.setdefault(("o", label), set()).add(t)
        for label, o in g.in_edges(v):
            if o in verts:
                out.setdefault(("i", label), set()).add(o)
        return out

    a1 = {v: adj(g1, v1, v) for v in v1}
    a2 = {v: adj(g2, v2, v) for v in v2}

    def consistent(fwd, bwd, x, y) -> bool:
        if c1[x] != c2[y]:
            return False
        ax, ay = a1[x], a2[y]
        if ax.keys() != ay.keys():
            return False
        for key, xs in ax.items():
            ys = ay[key]
            if len(xs) != len(ys):
                return False
            for x2 in xs:
                y2 = fwd.get(x2)
                if y2 is not None and y2 not in ys:
                    return False
        return True

    def propagate(fwd, bwd, stack) -> bool:
        while stack:
            x = stack.pop()
            y = fwd[x]
            for key, xs in a1[x].items():
                free_x = [x2 for x2 in xs if x2 not in fwd]
                if not free_x:
                    continue
                free_y = [y2 for y2 in a2[y][key] if y2 not in bwd]
                if len(free_x) != len(free_y):
                    return False
                if len(free_x) == 1:
                    x2, y2 = free_x[0], free_y[0]
                    if not consistent(fwd, bwd, x2, y2):
                        return False
                    fwd[x2], bwd[y2] = y2, x2
                    stack.append(x2)
        return True

    def search(fwd, bwd):
        if len(fwd) == len(v1):
            return fwd
        # most constrained unmapped vertex next to the mapped part
        best = None
        for x in fwd:
            y = fwd[x]
            for key, xs in a1[x].items():
                free_x = [x2 for x2 in xs if x2 not in fwd]
                if free_x:
                    cands = [y2 for y2 in a2[y][key] if y2 not in bwd]
                    if best is None or len(cands) < len(best[1]):
                        best = (free_x[0], cands)
        if best is None:  # disconnected remainder: start a new component
            x = min((x for x in v1 if x not in fwd), key=lambda z: sum(1 for w in v1 if c1[w] == c1[z]))
            best = (x, [y for y in v2 if y not in bwd and c2[y] == c1[x]])
        x, cands = best
        for y in cands:
            if not consistent(fwd, bwd, x, y):
                continue
            f2, b2 = dict(fwd), dict(bwd)
            f2[x], b2[y] = y, x
            if propagate(f2, b2, [x]):
                found = search(f2, b2)
                if found is not None:
                    return found
        return None

    fwd, bwd = {}, {}
    for x, y in seeds:
        if not consistent(fwd, bwd, x, y) or (x in fwd and fwd[x] != y) or (y in bwd and bwd[y] != x):
            return None
        fwd[x], bwd[y] = y, x
    if not propagate(fwd, bwd, list(fwd)):
        return None
    result = search(fwd, bwd)
    if result is None:
        return None
    if any((result[o], label, result[t]) not in e2 for o, label, t in e1):
        return None
    return result


def _invariant(g: LabelledGraph, verts: set[int], marked: set[int]) -> tuple:
    base = {v: (v in marked) for v in verts}
    colours = _colour_refine(g, verts, base)
    return len(verts), len(marked), tuple(sorted(Counter(colours.values()).values())), frozenset(Counter(colours.values()).items())


def end_isomorphic(e1: EndSpace, e2: EndSpace, depth: int | None = None) -> bool:
    """Label-preserving isomorphism of the two ends mapping frontier onto frontier."""
    if depth is not None:
        e1, e2 = e1.truncated(depth), e2.truncated(depth)
    if not (e1.complete and e2.complete):
        raise IncompleteEnd("end space meets the horizon of its host graph")
    v1, v2 = set(e1.vertices), set(e2.vertices)
    if len(v1) != len(v2) or len(e1.frontier) != len(e2.frontier):
        return False
    c1 = _colour_refine(e1.host, v1, {v: v in e1.frontier for v in v1})
    c2 = _colour_refine(e2.host, v2, {v: v in e2.frontier for v in v2})
    return _match(e1.host, v1, e2.host, v2, c1, c2) is not None


def rooted_iso(g1: LabelledGraph, g2: LabelledGraph) -> dict[int, int] | None:
    """A label- and root-preserving isomorphism, or None."""
    if len(g1) != len(g2) or g1.num_edges != g2.num_edges:
        return None
    if g1.root is None or g2.root is None:
        raise ValueError("rooted_iso needs rooted graphs")
    if is_deterministic(g1)[0] and is_deterministic(g2)[0]:
        fast = _canonical_bfs_iso(g1, g2)
        if fast is not False:
            return fast
    v1, v2 = set(g1.vertices), set(g2.vertices)
    c1 = _colour_refine(g1, v1, {v: v == g1.root for v in v1})
    c2 = _colour_refine(g2, v2, {v: v == g2.root for v in v2})
    return _match(g1, v1, g2, v2, c1, c2, [(g1.root, g2.root)])


def _canonical_bfs_iso(g1: LabelledGraph, g2: LabelledGraph):
    """Match two deterministic graphs by walking out-edges from the roots in lockstep.

    Returns the bijection, None when the graphs differ, or False when some
    vertex is not reachable along out-edges (the caller falls back to search).
    """
    fwd = {g1.root: g2.root}
    bwd = {g2.root: g1.root}
    queue = deque([g1.root])
    while queue:
        x = queue.popleft()
        y = fwd[x]
        if g1.out_labels(x) != g2.out_labels(y):
            return None
        for label in sorted(g1.out_labels(x)):
            x2, y2 = g1.step(x, label), g2.step(y, label)
            if x2 in fwd or y2 in bwd:
                if fwd.get(x2) != y2 or bwd.get(y2) != x2:
                    return None
                continue
            fwd[x2], bwd[y2] = y2, x2
            queue.append(x2)
    if len(fwd) != len(g1):
        return False
    e2 = set(g2.edges())
    if any((fwd[o], label, fwd[t]) not in e2 for o, label, t in g1.edges()):
        return None
    return fwd


@dataclass
class EndClassReport:
    radius: int
    depths: tuple[int, ...]
    assignment: dict[int, dict[int, int]]  # depth -> vertex -> class id
    counts: dict[int, list[int]]  # depth -> classes met among vertices with |v| <= n, for n = 0..radius
    frontier_sizes: dict[int, list[list[int]]]  # depth -> per level, sizes of the ends' frontiers
    window: int = 3

    def stabilized(self, depth: int | None = None) -> bool:
        """Counts constant over the last ``window`` radii (a heuristic, never a proof)."""
        c = self.counts[self.depths[-1] if depth is None else depth]
        tail = c[-self.window:]
        return len(tail) == self.window and len(set(tail)) == 1

    def strictly_increasing(self, depth: int | None = None) -> bool:
        c = self.counts[self.depths[-1] if depth is None else depth]
        return all(a < b for a, b in zip(c, c[1:]))

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "depths": list(self.depths),
            "counts": {str(d): c for d, c in self.counts.items()},
            "frontier_sizes": {str(d): s for d, s in self.frontier_sizes.items()},
            "stabilized": {str(d): self.stabilized(d) for d in self.depths},
        }


def classify_ends(g: LabelledGraph, radius: int, depth: int | Sequence[int], window: int = 3) -> EndClassReport:
    """Partition the vertices with ``|v| <= radius`` by end-isomorphism at each truncation depth."""
    depths = (depth,) if isinstance(depth, int) else tuple(depth)
    dist = distances(g)
    assignment, counts, fsizes = {}, {}, {}
    for d in depths:
        reps: list[tuple[tuple, EndSpace]] = []
        assign: dict[int, int] = {}
        seen_classes: set[int] = set()
        count_row, size_row = [], []
        by_level: dict[int, list[int]] = {}
        for v, n in dist.items():
            by_level.setdefault(n, []).append(v)
        for n in range(radius + 1):
            sizes = []
            for v in sorted(by_level.get(n, [])):
                if v in assign:
                    continue
                e = end_space(g, v, d, dist)
                if not e.complete:
                    raise IncompleteEnd(f"end of vertex {v} at level {n} needs a larger host (depth {d})")
                inv = _invariant(g, set(e.vertices), set(e.frontier))
                cls = None
                for k, (inv2, e2) in enumerate(reps):
                    if inv2 == inv and end_isomorphic(e, e2):
                        cls = k
                        break
                if cls is None:
                    cls = len(reps)
                    reps.append((inv, e))
                for u in e.frontier:
                    assign[u] = cls
                seen_classes.add(cls)
                sizes.append(len(e.frontier))
            count_row.append(len(seen_classes))
            size_row.append(sorted(sizes))
        assignment[d], counts[d], fsizes[d] = assign, count_row, size_row
    return EndClassReport(radius, depths, assignment, counts, fsizes, window)


def induced_isomorphic(g1: LabelledGraph, verts1: Iterable[int], g2: LabelledGraph, verts2: Iterable[int],
                       marked: Iterable[int] = ()) -> bool:
    """Label-preserving isomorphism between induced subgraphs that maps marked vertices to marked ones."""
    v1, v2, marked = set(verts1), set(verts2), set(marked)
    c1 = _colour_refine(g1, v1, {v: v in marked for v in v1})
    c2 = _colour_refine(g2, v2, {v: v in marked for v in v2})
    return _match(g1, v1, g2, v2, c1, c2) is not None
