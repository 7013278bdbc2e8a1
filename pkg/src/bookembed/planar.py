"""Rotation systems (combinatorial plane embeddings), faces and duals.

Rotations list each vertex's incident edge ids clockwise. A face is traced by
leaving every vertex along the clockwise successor of the edge it was entered
by, so each face lies to the left of its darts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Sequence

from bookembed.graph import Graph, bipartition, Bipartition, is_connected, is_regular, is_three_connected, make_graph, prism


class NotPlanarEmbedding(ValueError):
    pass


class BadRotation(ValueError):
    pass


Dart = tuple[int, int]


@dataclass(frozen=True)
class RotationSystem:
    graph: Graph
    rotation: tuple[tuple[int, ...], ...]  # vertex -> incident edge ids, clockwise
    _succ: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        g = self.graph
        if len(self.rotation) != g.n:
            raise BadRotation(f"{len(self.rotation)} rotations for {g.n} vertices")
        succ = {}
        for v, rot in enumerate(self.rotation):
            if sorted(rot) != sorted(g.incident_edges(v)):
                raise BadRotation(f"rotation at {v} is not a permutation of its edges")
            nbrs = [self.other(e, v) for e in rot]
            for i, w in enumerate(nbrs):
                succ[(v, w)] = nbrs[(i + 1) % len(nbrs)]
        object.__setattr__(self, "_succ", succ)

    def other(self, e: int, v: int) -> int:
        a, b = self.graph.edges[e]
        return b if a == v else a

    def next_dart(self, d: Dart) -> Dart:
        u, v = d
        return (v, self._succ[(v, u)])


@dataclass(frozen=True)
class Face:
    id: int
    boundary: tuple[Dart, ...]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(u for u, _ in self.boundary)

    def __len__(self) -> int:
        return len(self.boundary)


@dataclass(frozen=True)
class DualGraph:
    face_count: int
    dual_edges: tuple[tuple[int, int, int], ...]  # (left face, right face, primal edge id)

    def degree(self, f: int) -> int:
        return sum((a == f) + (b == f) for a, b, _ in self.dual_edges)


def rotation_from_lists(g: Graph, rotation: Sequence[Sequence[int]]) -> RotationSystem:
    return RotationSystem(g, tuple(tuple(r) for r in rotation))


def faces(rs: RotationSystem) -> list[Face]:
    """Trace all faces; raises NotPlanarEmbedding unless V - E + F = 2."""
    g = rs.graph
    if not is_connected(g):
        raise NotPlanarEmbedding("graph is not connected")
    seen: set[Dart] = set()
    out: list[Face] = []
    for u, v in g.edges:
        for d in ((u, v), (v, u)):
            if d in seen:
                continue
            walk = []
            while d not in seen:
                seen.add(d)
                walk.append(d)
                d = rs.next_dart(d)
            out.append(Face(len(out), tuple(walk)))
    if g.m == 0:
        out.append(Face(0, ()))
    if g.n - g.m + len(out) != 2:
        raise NotPlanarEmbedding(f"Euler check failed: V - E + F = {g.n - g.m + len(out)}")
    return out


def face_of_dart(fs: Sequence[Face]) -> dict[Dart, int]:
    return {d: f.id for f in fs for d in f.boundary}


def dual(rs: RotationSystem, fs: Sequence[Face] | None = None) -> DualGraph:
    fs = faces(rs) if fs is None else fs
    where = face_of_dart(fs)
    edges = tuple((where[(u, v)], where[(v, u)], e) for e, (u, v) in enumerate(rs.graph.edges))
    return DualGraph(len(fs), edges)


def is_barnette(rs: RotationSystem) -> bool:
    g = rs.graph
    if not is_regular(g, 3) or not isinstance(bipartition(g), Bipartition):
        return False
    try:
        faces(rs)
    except NotPlanarEmbedding:
        return False
    return is_three_connected(g)


# --- rotations from geometry ------------------------------------------------


def rotation_from_positions(g: Graph, pos: Sequence[tuple[float, float]]) -> RotationSystem:
    """Rotation of a straight-line plane drawing (y axis up)."""
    rot = []
    for v in range(g.n):
        x0, y0 = pos[v]

        def angle(e, v=v, x0=x0, y0=y0):
            w = g.edges[e][0] if g.edges[e][1] == v else g.edges[e][1]
            return math.atan2(pos[w][1] - y0, pos[w][0] - x0)

        rot.append(sorted(g.incident_edges(v), key=angle, reverse=True))
    return rotation_from_lists(g, rot)


def rotation_from_polytope(g: Graph, coords: Sequence[tuple[float, float, float]]) -> RotationSystem:
    """Rotation of a convex polytope centred at the origin, seen from outside."""
    rot = []
    for v in range(g.n):
        n = coords[v]
        norm = math.sqrt(sum(c * c for c in n))
        n = tuple(c / norm for c in n)
        # any direction not parallel to n gives a tangent basis
        ref = (1.0, 0.0, 0.0) if abs(n[0]) < 0.9 else (0.0, 1.0, 0.0)
        e1 = _unit(_sub(ref, _scale(n, _dot(ref, n))))
        e2 = _cross(n, e1)

        def angle(e, v=v, e1=e1, e2=e2):
            w = g.edges[e][0] if g.edges[e][1] == v else g.edges[e][1]
            d = _sub(coords[w], coords[v])
            return math.atan2(_dot(d, e2), _dot(d, e1))

        rot.append(sorted(g.incident_edges(v), key=angle, reverse=True))
    return rotation_from_lists(g, rot)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _scale(a, s):
    return tuple(x * s for x in a)


def _unit(a):
    n = math.sqrt(_dot(a, a))
    return tuple(x / n for x in a)


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


# --- embedded instances -----------------------------------------------------


def embedded_prism(k: int) -> RotationSystem:
    g = prism(k)
    pos = []
    for r in (2.0, 1.0):
        pos += [(r * math.cos(2 * math.pi * i / k), r * math.sin(2 * math.pi * i / k)) for i in range(k)]
    return rotation_from_positions(g, pos)


def embedded_cube() -> RotationSystem:
    from bookembed.graph import cube

    g = cube()
    coords = [tuple(1.0 if v >> b & 1 else -1.0 for b in range(3)) for v in range(8)]
    return rotation_from_polytope(g, coords)


def truncated_octahedron() -> RotationSystem:
    """24 vertices: permutations of (0, +-1, +-2); edges join points at distance sqrt(2)."""
    pts = sorted({p for base in product((1, -1), (2, -2)) for p in permutations((0,) + base)})
    edges = [(i, j) for i, j in combinations(range(len(pts)), 2)
             if sum((a - b) ** 2 for a, b in zip(pts[i], pts[j])) == 2]
    g = make_graph(len(pts), edges)
    return rotation_from_polytope(g, [tuple(map(float, p)) for p in pts])


def embedded_named(name: str, parameter: int | None = None) -> RotationSystem:
    name = name.lower()
    if name == "cube":
        return embedded_cube()
    if name in ("hexagonal_prism", "hex_prism"):
        return embedded_prism(6)
    if name == "prism":
        if parameter is None:
            raise ValueError("prism needs k")
        return embedded_prism(parameter)
    if name == "truncated_octahedron":
        return truncated_octahedron()
    raise ValueError(f"no embedded instance named {name!r}")


# --- text format ------------------------------------------------------------


def write_rotation(rs: RotationSystem) -> str:
    return "".join(f"{v}: {' '.join(map(str, rot))}\n" for v, rot in enumerate(rs.rotation))


def read_rotation(g: Graph, text: str) -> RotationSystem:
    rot: dict[int, list[int]] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        try:
            rot[int(head)] = [int(x) for x in rest.split()]
        except ValueError:
            raise BadRotation(f"malformed rotation line {raw!r}") from None
    if sorted(rot) != list(range(g.n)):
        raise BadRotation("rotation file must list every vertex exactly once")
    return rotation_from_lists(g, [rot[v] for v in range(g.n)])
