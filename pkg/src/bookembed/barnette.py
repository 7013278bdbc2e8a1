"""Three-page dispersable embeddings of embedded 3-connected cubic bipartite plane graphs.

Pipeline: colour the faces with three colours by forced propagation, give each
edge the colour missing from its two faces, take a spanning tree of the
green/blue part of the dual rooted at a blue leaf, then grow a cycle face by
face along the tree. The final cycle orders the spine; red, blue and green
edges become pages 0, 1 and 2.
"""

from __future__ import annotations

import enum
import logging
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from bookembed.embedding import BookEmbedding, verify
from bookembed.graph import Bipartition, Graph, bipartition, is_regular, is_three_connected
from bookembed.planar import Face, RotationSystem, face_of_dart, faces

log = logging.getLogger(__name__)


class Color(enum.IntEnum):
    RED = 0
    GREEN = 1
    BLUE = 2


class BarnetteError(ValueError):
    pass


class NotBarnette(BarnetteError):
    pass


class ColoringConflict(BarnetteError):
    pass


class PropagationStalled(BarnetteError):
    pass


class BgNotConnected(BarnetteError):
    pass


class InvariantViolated(RuntimeError):
    def __init__(self, step: int, invariant: str, detail: str = ""):
        super().__init__(f"step {step}: {invariant} violated {detail}".rstrip())
        self.step = step
        self.invariant = invariant


class InternalError(RuntimeError):
    pass


@dataclass(frozen=True)
class FaceColoring:
    color_of: tuple[Color, ...]

    def faces_of(self, c: Color) -> list[int]:
        return [f for f, x in enumerate(self.color_of) if x == c]

    def swapped(self, a: Color, b: Color) -> "FaceColoring":
        perm = {a: b, b: a}
        return FaceColoring(tuple(perm.get(c, c) for c in self.color_of))


@dataclass(frozen=True)
class EdgeColoring:
    color_of: tuple[Color, ...]

    def edges_of(self, c: Color) -> list[int]:
        return [e for e, x in enumerate(self.color_of) if x == c]


@dataclass(frozen=True)
class BgSpanningTree:
    root: int
    parent: dict[int, tuple[int, int]]  # face -> (parent face, red edge id)
    tree_edges: frozenset[int]  # T_r
    non_tree_edges: frozenset[int]  # N_r
    face_coloring: FaceColoring  # may differ from the input by a green/blue swap

    @property
    def nodes(self) -> list[int]:
        return [self.root] + sorted(self.parent)

    def children(self) -> dict[int, list[tuple[int, int]]]:
        out: dict[int, list[tuple[int, int]]] = {f: [] for f in self.nodes}
        for q, (p, e) in self.parent.items():
            out[p].append((q, e))
        return out


@dataclass
class SubhamiltonianCycle:
    cycle: tuple[int, ...]
    edges_on: frozenset[int]  # graph edges joining consecutive cycle vertices
    chords_inside: frozenset[int]
    chords_outside: frozenset[int]
    virtual: tuple[tuple[int, int], ...]  # consecutive pairs that are not graph edges


# --- colourings -------------------------------------------------------------


def _corner_faces(rs: RotationSystem, where: dict) -> list[list[int]]:
    g = rs.graph
    return [[where[(v, w)] for w in (rs.other(e, v) for e in rs.rotation[v])] for v in range(g.n)]


def check_barnette(rs: RotationSystem) -> list[Face]:
    g = rs.graph
    if not is_regular(g, 3):
        raise NotBarnette("graph is not 3-regular")
    if not isinstance(bipartition(g), Bipartition):
        raise NotBarnette("graph is not bipartite")
    fs = faces(rs)
    if not is_three_connected(g):
        raise NotBarnette("graph is not 3-connected")
    return fs


def color_faces(rs: RotationSystem, fs: Optional[Sequence[Face]] = None) -> FaceColoring:
    """Three-colour the faces so the three faces at every vertex differ.

    Seeds vertex 0 and propagates the forced third colour. The result is
    canonical: red is the largest class, green the remaining class holding the
    smaller face id.
    """
    fs = faces(rs) if fs is None else fs
    corners = _corner_faces(rs, face_of_dart(fs))
    incident: list[list[int]] = [[] for _ in fs]
    for v, fc in enumerate(corners):
        if len(set(fc)) != len(fc):
            raise ColoringConflict(f"a face meets vertex {v} twice")
        for f in fc:
            incident[f].append(v)
    color: list[Optional[int]] = [None] * len(fs)
    queue: deque[int] = deque()

    def assign(f, c):
        if color[f] is None:
            color[f] = c
            queue.extend(incident[f])
        elif color[f] != c:
            raise ColoringConflict(f"face {f} needs colours {color[f]} and {c}")

    if rs.graph.n:
        for f, c in zip(corners[0], (0, 1, 2)):
            assign(f, c)
    while queue:
        v = queue.popleft()
        known = [color[f] for f in corners[v] if color[f] is not None]
        if len(set(known)) != len(known):
            raise ColoringConflict(f"two faces at vertex {v} share a colour")
        if len(known) == 2:
            missing = ({0, 1, 2} - set(known)).pop()
            for f in corners[v]:
                if color[f] is None:
                    assign(f, missing)
    if any(c is None for c in color):
        raise PropagationStalled("some faces were never reached")
    # canonical labels
    classes = sorted(range(3), key=lambda c: (-color.count(c), color.index(c)))
    red = classes[0]
    rest = sorted(classes[1:], key=lambda c: color.index(c))
    relabel = {red: Color.RED, rest[0]: Color.GREEN, rest[1]: Color.BLUE}
    return FaceColoring(tuple(relabel[c] for c in color))


def color_edges(rs: RotationSystem, fc: FaceColoring, fs: Optional[Sequence[Face]] = None) -> EdgeColoring:
    """Each edge gets the colour absent from its two incident faces."""
    fs = faces(rs) if fs is None else fs
    where = face_of_dart(fs)
    out = []
    for u, v in rs.graph.edges:
        a, b = fc.color_of[where[(u, v)]], fc.color_of[where[(v, u)]]
        if a == b:
            raise ColoringConflict(f"edge ({u}, {v}) has both sides coloured {a.name}")
        out.append(Color(3 - a - b))
    return EdgeColoring(tuple(out))


def build_bg_tree(rs: RotationSystem, fc: FaceColoring, seed: Optional[int] = None,
                  fs: Optional[Sequence[Face]] = None) -> BgSpanningTree:
    """BFS spanning tree of the green/blue dual subgraph, re-rooted at a blue leaf.

    The dual edges of that subgraph are exactly the red primal edges. If no
    leaf is blue, green and blue are swapped throughout.
    """
    fs = faces(rs) if fs is None else fs
    where = face_of_dart(fs)
    adj: dict[int, list[tuple[int, int]]] = {
        f: [] for f in range(len(fs)) if fc.color_of[f] != Color.RED
    }
    red = []
    for e, (u, v) in enumerate(rs.graph.edges):
        a, b = where[(u, v)], where[(v, u)]
        if fc.color_of[a] != Color.RED and fc.color_of[b] != Color.RED:
            adj[a].append((b, e))
            adj[b].append((a, e))
            red.append(e)
    blues = [f for f in sorted(adj) if fc.color_of[f] == Color.BLUE]
    if not blues:
        raise BgNotConnected("no blue faces")
    start = blues[0] if seed is None else random.Random(seed).choice(blues)
    tree: dict[int, list[tuple[int, int]]] = {f: [] for f in adj}
    seen = {start}
    queue = deque([start])
    while queue:
        f = queue.popleft()
        for h, e in adj[f]:
            if h not in seen:
                seen.add(h)
                tree[f].append((h, e))
                tree[h].append((f, e))
                queue.append(h)
    if len(seen) != len(adj):
        raise BgNotConnected(f"{len(adj) - len(seen)} green/blue faces unreachable")
    leaves = [f for f in sorted(tree) if len(tree[f]) == 1]
    if not any(fc.color_of[f] == Color.BLUE for f in leaves):
        fc = fc.swapped(Color.GREEN, Color.BLUE)
    root = next(f for f in leaves if fc.color_of[f] == Color.BLUE)
    parent: dict[int, tuple[int, int]] = {}
    stack = [root]
    visited = {root}
    while stack:
        f = stack.pop()
        for h, e in tree[f]:
            if h not in visited:
                visited.add(h)
                parent[h] = (f, e)
                stack.append(h)
    t_r = frozenset(e for _, e in parent.values())
    return BgSpanningTree(root, parent, t_r, frozenset(red) - t_r, fc)


# --- cycle construction -----------------------------------------------------


class _Cycle:
    """Cyclic vertex order with O(1) splicing; segments remember real vs virtual."""

    def __init__(self, vertices: Sequence[int]):
        self.nxt: dict[int, int] = {}
        self.prv: dict[int, int] = {}
        k = len(vertices)
        for i, v in enumerate(vertices):
            self.nxt[v] = vertices[(i + 1) % k]
            self.prv[vertices[(i + 1) % k]] = v

    def __contains__(self, v: int) -> bool:
        return v in self.nxt

    def adjacent(self, a: int, b: int) -> bool:
        return self.nxt.get(a) == b or self.nxt.get(b) == a

    def replace(self, path: Sequence[int]) -> None:
        """Replace the segment path[0]--path[-1] by the vertices of ``path``."""
        if self.nxt[path[0]] != path[-1]:
            path = list(reversed(path))
        for a, b in zip(path, path[1:]):
            self.nxt[a] = b
            self.prv[b] = a

    def order(self, start: int) -> list[int]:
        out = [start]
        v = self.nxt[start]
        while v != start:
            out.append(v)
            v = self.nxt[v]
        return out

    def pairs(self):
        for a, b in self.nxt.items():
            yield a, b


def _path_around(face: Face, u: int, v: int) -> list[int]:
    """Boundary of ``face`` from u to v, not using the edge uv."""
    vs = face.vertices
    k = len(vs)
    i = vs.index(u)
    step = -1 if vs[(i + 1) % k] == v else 1
    out = [u]
    while out[-1] != v:
        i = (i + step) % k
        out.append(vs[i])
    return out


@dataclass
class _State:
    rs: RotationSystem
    fs: Sequence[Face]
    fc: FaceColoring
    ec: EdgeColoring
    tree: BgSpanningTree
    cycle: _Cycle
    processed: set[int] = field(default_factory=set)
    virtual: dict[tuple[int, int], int] = field(default_factory=dict)  # chord -> face it crosses
    real_on_cycle: set[int] = field(default_factory=set)

    def seg_edge(self, a: int, b: int) -> Optional[int]:
        """Graph edge drawn as cycle segment a-b, or None for a virtual chord."""
        key = (a, b) if a < b else (b, a)
        if key in self.virtual:
            return None
        return self.rs.graph.edge_id(a, b)


def _classify(st: _State) -> tuple[set[int], set[int], set[int]]:
    """Split graph edges into on-cycle, inside and outside sets.

    Builds the plane map of the graph plus the virtual chords, traces its faces,
    and floods the side containing the root face without crossing the cycle.
    """
    g = st.rs.graph
    rot: list[list[tuple[int, object]]] = []
    for v in range(g.n):
        rot.append([(st.rs.other(e, v), e) for e in st.rs.rotation[v]])
    for (a, b), q in st.virtual.items():
        face = st.fs[q]
        for x, y in ((a, b), (b, a)):
            # the corner of q at x is entered by the dart (prev, x)
            prev = next(d[0] for d in face.boundary if d[1] == x)
            i = next(k for k, (w, tag) in enumerate(rot[x]) if w == prev and isinstance(tag, int))
            rot[x].insert(i + 1, (y, ("v", a, b)))
    pos = {}
    for v in range(g.n):
        for k, (w, tag) in enumerate(rot[v]):
            pos[(v, w, tag)] = k
    darts = list(pos)
    region = {}
    nreg = 0
    for d in darts:
        if d in region:
            continue
        cur = d
        while cur not in region:
            region[cur] = nreg
            a, b, tag = cur
            k = pos[(b, a, tag)]
            w, t2 = rot[b][(k + 1) % len(rot[b])]
            cur = (b, w, t2)
        nreg += 1
    edges_aug = len(darts) // 2
    if g.n - edges_aug + nreg != 2:
        raise InternalError("cycle drawing is not plane")
    on_cycle_tags = set()
    for a, b in st.cycle.pairs():
        e = st.seg_edge(a, b)
        on_cycle_tags.add(e if e is not None else ("v", min(a, b), max(a, b)))
    # regions adjacent across non-cycle darts
    links: dict[int, set[int]] = {r: set() for r in range(nreg)}
    for (a, b, tag), r in region.items():
        if tag not in on_cycle_tags:
            links[r].add(region[(b, a, tag)])
    root_dart = st.fs[st.tree.root].boundary[0]
    start = region[(root_dart[0], root_dart[1], st.rs.graph.edge_id(*root_dart))]
    inside = {start}
    queue = deque([start])
    while queue:
        r = queue.popleft()
        for s in links[r]:
            if s not in inside:
                inside.add(s)
                queue.append(s)
    on = set(t for t in on_cycle_tags if isinstance(t, int))
    ins, outs = set(), set()
    for e, (u, v) in enumerate(g.edges):
        if e in on:
            continue
        (ins if region[(u, v, e)] in inside else outs).add(e)
    return on, ins, outs


def _check_invariants(st: _State, step: int) -> None:
    on, ins, outs = _classify(st)
    g = st.rs.graph
    tree, fc, ec = st.tree, st.fc, st.ec
    # edges bounding processed faces; the induced subgraph is too large mid-way
    ep = sorted({g.edge_id(a, b) for f in st.processed for a, b in st.fs[f].boundary})
    for q, (p, e) in tree.parent.items():
        if p in st.processed and q not in st.processed and e not in on:
            raise InvariantViolated(step, "I.1", f"tree edge {g.edges[e]} not on cycle")
    for e in ep:
        c = ec.color_of[e]
        if e in tree.tree_edges and e in outs:
            raise InvariantViolated(step, "I.2", f"tree edge {g.edges[e]} outside")
        if c == Color.BLUE and e in ins:
            raise InvariantViolated(step, "I.3", f"blue edge {g.edges[e]} inside")
        if c == Color.GREEN and e not in on:
            raise InvariantViolated(step, "I.4", f"green edge {g.edges[e]} off the cycle")
    where = face_of_dart(st.fs)
    for e in tree.non_tree_edges:
        u, v = g.edges[e]
        for h, h2 in ((where[(u, v)], where[(v, u)]), (where[(v, u)], where[(u, v)])):
            if h in st.processed and h2 not in st.processed:
                hits = (u in st.cycle) + (v in st.cycle)
                if fc.color_of[h] == Color.BLUE and hits != 2:
                    raise InvariantViolated(step, "I.5.i", f"edge {g.edges[e]}")
                if fc.color_of[h] == Color.GREEN and hits != 0:
                    raise InvariantViolated(step, "I.5.ii", f"edge {g.edges[e]}")


def construct_cycle(rs: RotationSystem, fc: FaceColoring, ec: EdgeColoring, tree: BgSpanningTree,
                    fs: Optional[Sequence[Face]] = None, check_invariants: bool = True,
                    trace: Optional[Callable[[str], None]] = None) -> SubhamiltonianCycle:
    """Grow the cycle from the root face through the tree in preorder."""
    fs = faces(rs) if fs is None else fs
    g = rs.graph
    root = fs[tree.root]
    st = _State(rs, fs, fc, ec, tree, _Cycle(root.vertices))
    st.processed.add(tree.root)
    if trace:
        trace(f"0 face={tree.root} color=BLUE base cycle={len(root)}")
    if check_invariants:
        _check_invariants(st, 0)
    children = tree.children()

    def edge_rank(parent: int, e: int) -> int:
        u, v = g.edges[e]
        return next(i for i, d in enumerate(fs[parent].boundary) if set(d) == {u, v})

    order = []
    stack = [tree.root]
    while stack:
        f = stack.pop()
        order.append(f)
        kids = sorted(children[f], key=lambda qe: edge_rank(f, qe[1]))
        stack.extend(q for q, _ in reversed(kids))

    for step, q in enumerate(order[1:], start=1):
        _, e = tree.parent[q]
        u, v = g.edges[e]
        if not st.cycle.adjacent(u, v) or st.seg_edge(u, v) != e:
            raise InvariantViolated(step, "I.1", f"edge {(u, v)} missing from cycle")
        around = _path_around(fs[q], u, v)
        if fc.color_of[q] == Color.BLUE:
            path = around
            summary = f"blue splice +{len(path) - 2}"
        else:
            ws = []
            for a, b in zip(around, around[1:]):
                if g.edge_id(a, b) in tree.tree_edges:
                    ws += [a, b]
            path = [u] + ws + [v] if ws else []
            if path:
                for a, b in zip(path[::2], path[1::2]):
                    if (a, b) not in zip(around, around[1:]):
                        st.virtual[(min(a, b), max(a, b))] = q
            summary = f"green splice +{len(ws)}" if ws else "green leaf"
        if path:
            fresh = path[1:-1]
            if any(w in st.cycle for w in fresh) or len(set(fresh)) != len(fresh):
                raise InvariantViolated(step, "simple", f"face {q} revisits a vertex")
            st.cycle.replace(path)
        st.processed.add(q)
        if trace:
            trace(f"{step} face={q} color={fc.color_of[q].name} {summary}")
        if check_invariants:
            _check_invariants(st, step)

    if len(st.cycle.nxt) != g.n:
        raise InvariantViolated(len(order), "spanning", f"cycle has {len(st.cycle.nxt)} of {g.n} vertices")
    on, ins, outs = _classify(st)
    return SubhamiltonianCycle(
        tuple(st.cycle.order(min(st.cycle.nxt))),
        frozenset(on),
        frozenset(ins),
        frozenset(outs),
        tuple(sorted(st.virtual)),
    )


# --- book embeddings --------------------------------------------------------


PAGE = {Color.RED: 0, Color.BLUE: 1, Color.GREEN: 2}


def _spine(cycle: SubhamiltonianCycle) -> tuple[int, ...]:
    c = list(cycle.cycle)
    k = c.index(min(c))
    return tuple(c[k:] + c[:k])


def to_dispersable(g: Graph, cycle: SubhamiltonianCycle, ec: EdgeColoring) -> BookEmbedding:
    emb = BookEmbedding(_spine(cycle), tuple(PAGE[c] for c in ec.color_of), 3)
    report = verify(g, emb, dispersable=True)
    if not report.valid:
        raise InternalError(f"3-page embedding fails verification: {report.violations[:3]}")
    return emb


def to_two_page(g: Graph, cycle: SubhamiltonianCycle, ec: EdgeColoring,
                merge_target: Color = Color.RED) -> BookEmbedding:
    """Ordinary 2-page embedding with the green edges merged into ``merge_target``."""
    if merge_target not in (Color.RED, Color.BLUE):
        raise ValueError("green edges merge into red or blue")
    page = {Color.RED: 0, Color.BLUE: 1, Color.GREEN: PAGE[merge_target]}
    emb = BookEmbedding(_spine(cycle), tuple(page[c] for c in ec.color_of), 2)
    report = verify(g, emb, dispersable=False)
    if not report.valid:
        raise InternalError(f"2-page embedding fails verification: {report.violations[:3]}")
    return emb


@dataclass
class BarnetteResult:
    faces: list[Face]
    face_coloring: FaceColoring
    edge_coloring: EdgeColoring
    tree: BgSpanningTree
    cycle: SubhamiltonianCycle
    embedding: BookEmbedding


def dispersable_embedding(rs: RotationSystem, check_invariants: bool = True, seed: Optional[int] = None,
                          trace: Optional[Callable[[str], None]] = None) -> BarnetteResult:
    """Run the whole pipeline and return every intermediate object."""
    fs = check_barnette(rs)
    fc = color_faces(rs, fs)
    tree = build_bg_tree(rs, fc, seed, fs)
    fc = tree.face_coloring
    ec = color_edges(rs, fc, fs)
    cyc = construct_cycle(rs, fc, ec, tree, fs, check_invariants, trace)
    emb = to_dispersable(rs.graph, cyc, ec)
    return BarnetteResult(fs, fc, ec, tree, cyc, emb)
