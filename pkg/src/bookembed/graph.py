"""Simple undirected graphs, bipartition, connectivity and named generators."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional


class GraphError(ValueError):
    pass


class LoopEdge(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class EndpointOutOfRange(GraphError):
    pass


class UnknownName(GraphError):
    pass


class BadParameter(GraphError):
    pass


Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    Edges are stored sorted with the smaller endpoint first; an edge's id is its
    index in :attr:`edges`. Labels are for display only.
    """

    n: int
    edges: tuple[Edge, ...]
    labels: Optional[tuple[str, ...]] = None
    _adj: tuple[tuple[int, ...], ...] = field(default=(), repr=False, compare=False)
    _eid: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "_eid", {e: i for i, e in enumerate(self.edges)})

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def edge_id(self, u: int, v: int) -> int:
        """Id of edge {u, v}; raises KeyError if absent."""
        return self._eid[(u, v) if u < v else (v, u)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._eid

    def incident_edges(self, v: int) -> list[int]:
        return [self.edge_id(v, w) for w in self._adj[v]]

    def label(self, v: int) -> str:
        if self.labels is None:
            return str(v)
        return self.labels[v]

    def vertex_by_label(self, name: str) -> int:
        if self.labels is None:
            return int(name)
        try:
            return self.labels.index(name)
        except ValueError:
            raise UnknownName(name) from None


def make_graph(n: int, edges: Iterable[tuple[int, int]], labels: Optional[Iterable[str]] = None) -> Graph:
    if n < 0:
        raise EndpointOutOfRange(f"negative vertex count {n}")
    canon: set[Edge] = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise EndpointOutOfRange(f"edge ({u}, {v}) outside 0..{n - 1}")
        if u == v:
            raise LoopEdge(f"loop at vertex {u}")
        e = (u, v) if u < v else (v, u)
        if e in canon:
            raise DuplicateEdge(f"edge {e} given twice")
        canon.add(e)
    lab = None
    if labels is not None:
        lab = tuple(labels)
        if len(lab) != n:
            raise GraphError(f"{len(lab)} labels for {n} vertices")
    return Graph(n, tuple(sorted(canon)), lab)


# --- structural queries -----------------------------------------------------


class NotBipartite(Exception):
    """Returned (not raised) by :func:`bipartition`; carries an odd cycle."""

    def __init__(self, odd_cycle: list[int]):
        super().__init__(f"odd cycle {odd_cycle}")
        self.odd_cycle = odd_cycle


@dataclass(frozen=True)
class Bipartition:
    side_of: tuple[int, ...]

    def side(self, s: int) -> list[int]:
        return [v for v, x in enumerate(self.side_of) if x == s]


def bipartition(g: Graph) -> Bipartition | NotBipartite:
    """2-colour every component by BFS, first vertex of each component on side 0."""
    side = [-1] * g.n
    parent = [-1] * g.n
    for s in range(g.n):
        if side[s] != -1:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if side[w] == -1:
                    side[w] = 1 - side[u]
                    parent[w] = u
                    queue.append(w)
                elif side[w] == side[u]:
                    return NotBipartite(_odd_cycle(parent, u, w))
    return Bipartition(tuple(side))


def _odd_cycle(parent: list[int], u: int, w: int) -> list[int]:
    # u and w are same-side BFS-tree vertices joined by an edge
    def path(x):
        out = [x]
        while parent[x] != -1:
            x = parent[x]
            out.append(x)
        return out

    pu, pw = path(u), path(w)
    on_pw = set(pw)
    lca = next(x for x in pu if x in on_pw)
    left = pu[: pu.index(lca) + 1]
    right = pw[: pw.index(lca)]
    return left + right[::-1]


def max_degree(g: Graph) -> int:
    return max((g.degree(v) for v in range(g.n)), default=0)


def is_regular(g: Graph, k: int) -> bool:
    return all(g.degree(v) == k for v in range(g.n))


def components(g: Graph, removed: frozenset[int] = frozenset()) -> list[list[int]]:
    seen = set(removed)
    out = []
    for s in range(g.n):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        out.append(comp)
    return out


def is_connected(g: Graph) -> bool:
    return len(components(g)) <= 1


def articulation_points(g: Graph, removed: int = -1) -> set[int]:
    """Cut vertices of ``g`` with vertex ``removed`` deleted (iterative Tarjan)."""
    disc = [-1] * g.n
    low = [0] * g.n
    cuts: set[int] = set()
    t = 0
    for root in range(g.n):
        if root == removed or disc[root] != -1:
            continue
        disc[root] = low[root] = t
        t += 1
        root_children = 0
        stack = [(root, -1, iter(g.neighbors(root)))]
        while stack:
            u, par, it = stack[-1]
            advanced = False
            for w in it:
                if w == removed or w == par:
                    continue
                if disc[w] == -1:
                    disc[w] = low[w] = t
                    t += 1
                    if u == root:
                        root_children += 1
                    stack.append((w, u, iter(g.neighbors(w))))
                    advanced = True
                    break
                low[u] = min(low[u], disc[w])
            if advanced:
                continue
            stack.pop()
            if par != -1:
                low[par] = min(low[par], low[u])
                if par != root and low[u] >= disc[par]:
                    cuts.add(par)
        if root_children > 1:
            cuts.add(root)
    return cuts


def is_three_connected(g: Graph) -> bool:
    """True iff g has more than 3 vertices and no separating set of size <= 2."""
    if g.n <= 3 or not is_connected(g):
        return False
    for v in range(g.n):
        rest = components(g, frozenset([v]))
        if len(rest) > 1 or articulation_points(g, removed=v):
            return False
    return True


# --- generators -------------------------------------------------------------


def cycle(k: int) -> Graph:
    if k < 3:
        raise BadParameter(f"cycle needs length >= 3, got {k}")
    return make_graph(k, [(i, (i + 1) % k) for i in range(k)])


def complete(k: int) -> Graph:
    if k < 1:
        raise BadParameter(f"complete graph needs k >= 1, got {k}")
    return make_graph(k, combinations(range(k), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise BadParameter(f"complete bipartite needs a, b >= 1, got {a}, {b}")
    return make_graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def prism(k: int) -> Graph:
    """Circular ladder: outer cycle 0..k-1, inner cycle k..2k-1, spokes i -- k+i."""
    if k < 3:
        raise BadParameter(f"prism needs k >= 3, got {k}")
    edges = []
    for i in range(k):
        edges.append((i, (i + 1) % k))
        edges.append((k + i, k + (i + 1) % k))
        edges.append((i, k + i))
    return make_graph(2 * k, edges)


def cube() -> Graph:
    """The 3-cube Q3 on vertices 0..7, edges between ids at Hamming distance 1."""
    return make_graph(8, [(v, v ^ (1 << b)) for v in range(8) for b in range(3) if v < v ^ (1 << b)])


def heawood() -> Graph:
    edges = [(i, (i + 1) % 14) for i in range(14)]
    edges += [(i, (i + 5) % 14) for i in range(0, 14, 2)]
    return make_graph(14, edges)


def folkman() -> Graph:
    """Folkman graph: K5 with subdivided edges, each original vertex doubled.

    Twins ``A1 A2 .. E1 E2`` are vertices 0..9, connectors ``ab .. de`` 10..19.
    """
    letters = "abcde"
    labels = [f"{x.upper()}{i}" for x in letters for i in (1, 2)]
    edges = []
    for k, (x, y) in enumerate(combinations(range(5), 2)):
        c = 10 + k
        labels.append(letters[x] + letters[y])
        for t in (2 * x, 2 * x + 1, 2 * y, 2 * y + 1):
            edges.append((t, c))
    return make_graph(20, edges, labels)


def gray() -> Graph:
    """Gray graph from three subdivided copies of K3,3 tied together at the subdivision vertices.

    Copy ``i`` has sides ``a_i b_i c_i`` and ``d_i e_i f_i``; the vertex on edge
    X_i Y_i is ``xy_i`` and the hub joining ``xy_1, xy_2, xy_3`` is ``xy``.
    """
    labels: list[str] = []
    index: dict[str, int] = {}

    def vertex(name: str) -> int:
        if name not in index:
            index[name] = len(labels)
            labels.append(name)
        return index[name]

    edges = []
    for i in (1, 2, 3):
        for x in "abc":
            for y in "def":
                s = vertex(f"{x}{y}_{i}")
                edges.append((vertex(f"{x}_{i}"), s))
                edges.append((vertex(f"{y}_{i}"), s))
    for x in "abc":
        for y in "def":
            hub = vertex(f"{x}{y}")
            for i in (1, 2, 3):
                edges.append((hub, index[f"{x}{y}_{i}"]))
    return make_graph(len(labels), edges, labels)


def named_graph(name: str, parameter: Optional[int] = None, second: Optional[int] = None) -> Graph:
    """Build a graph by name: heawood, cube, folkman, gray, prism, cycle, complete, complete_bipartite."""
    name = name.lower()
    fixed = {"heawood": heawood, "cube": cube, "folkman": folkman, "gray": gray}
    if name in fixed:
        return fixed[name]()
    if name in ("prism", "cycle", "complete", "complete_bipartite", "truncated_octahedron"):
        if name == "truncated_octahedron":
            from bookembed.planar import truncated_octahedron

            return truncated_octahedron().graph
        if parameter is None:
            raise BadParameter(f"{name} needs a parameter")
        if name == "prism":
            return prism(parameter)
        if name == "cycle":
            if parameter < 4 or parameter % 2:
                raise BadParameter(f"cycle length must be even and >= 4, got {parameter}")
            return cycle(parameter)
        if name == "complete":
            return complete(parameter)
        return complete_bipartite(parameter, parameter if second is None else second)
    raise UnknownName(name)


# --- text format ------------------------------------------------------------


def write_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    if g.labels is not None:
        lines += [f"# label {v} {g.labels[v]}" for v in range(g.n)]
    return "\n".join(lines) + "\n"


def read_graph(text: str) -> Graph:
    labels: dict[int, str] = {}
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 3 and parts[0] == "label":
                labels[int(parts[1])] = parts[2]
            continue
        rows.append(line.split())
    if not rows or len(rows[0]) != 2:
        raise GraphError("missing 'n m' header")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(r[0]), int(r[1])) for r in rows[1:]]
    except (ValueError, IndexError) as exc:
        raise GraphError(f"malformed graph file: {exc}") from None
    if any(len(r) != 2 for r in rows[1:]):
        raise GraphError("edge lines must have exactly two fields")
    if len(edges) != m:
        raise GraphError(f"header says {m} edges, found {len(edges)}")
    lab = None
    if labels:
        lab = [labels.get(v, str(v)) for v in range(n)]
    return make_graph(n, edges, lab)
