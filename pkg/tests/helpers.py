"""Shared corpora and generators for the tests."""

import random
from functools import lru_cache

import networkx as nx

from bookembed.graph import Graph, make_graph
from bookembed.planar import RotationSystem, embedded_cube, faces, is_barnette, rotation_from_lists


@lru_cache(maxsize=None)
def atlas_connected(max_n: int = 7) -> tuple[Graph, ...]:
    """Every connected graph on 1..max_n vertices, one per isomorphism class."""
    out = []
    for h in nx.graph_atlas_g():
        if 1 <= h.number_of_nodes() <= max_n and nx.is_connected(h):
            out.append(make_graph(h.number_of_nodes(), h.edges()))
    return tuple(out)


def to_networkx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def planar_rotation(g: Graph) -> RotationSystem:
    """Rotation of some plane embedding (unique up to mirroring when 3-connected)."""
    ok, emb = nx.check_planarity(to_networkx(g))
    assert ok
    rot = [[g.edge_id(v, w) for w in emb.neighbors_cw_order(v)] for v in range(g.n)]
    return rotation_from_lists(g, rot)


def insert_ladder(rs: RotationSystem, rng: random.Random) -> RotationSystem:
    """Grow a Barnette graph by a rung across a random face.

    Two edges a-b and c-d on one face, with a and c on the same side, become
    paths a-x1-x2-b and c-y1-y2-d, joined by x1-y2 and x2-y1 inside the face.
    """
    g = rs.graph
    side = nx.bipartite.color(to_networkx(g))
    fs = faces(rs)
    while True:
        face = rng.choice(fs)
        darts = [d for d in face.boundary]
        (a, b), (c, d) = rng.sample(darts, 2)
        if side[a] == side[c]:
            break
    n = g.n
    x1, x2, y1, y2 = n, n + 1, n + 2, n + 3
    edges = [e for e in g.edges if set(e) not in ({a, b}, {c, d})]
    edges += [(a, x1), (x1, x2), (x2, b), (c, y1), (y1, y2), (y2, d), (x1, y2), (x2, y1)]
    h = make_graph(n + 4, edges)
    out = planar_rotation(h)
    assert is_barnette(out)
    return out


def random_barnette(seed: int, steps: int) -> RotationSystem:
    rng = random.Random(seed)
    rs = embedded_cube()
    for _ in range(steps):
        rs = insert_ladder(rs, rng)
    return rs
