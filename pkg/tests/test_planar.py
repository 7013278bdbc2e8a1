import pytest
from hypothesis import given, settings, strategies as st

from bookembed.graph import complete, cube, cycle, make_graph
from bookembed.planar import (
    BadRotation, NotPlanarEmbedding, dual, embedded_cube, embedded_named, embedded_prism, faces, is_barnette,
    read_rotation, rotation_from_lists, truncated_octahedron, write_rotation,
)

from helpers import planar_rotation, random_barnette


def k4_rotation():
    return planar_rotation(complete(4))


def test_face_examples():
    assert sorted(map(len, faces(embedded_cube()))) == [4] * 6
    c4 = cycle(4)
    rs = rotation_from_lists(c4, [c4.incident_edges(v) for v in range(4)])
    assert sorted(map(len, faces(rs))) == [4, 4]
    assert sorted(map(len, faces(k4_rotation()))) == [3] * 4


def test_dual_examples():
    d = dual(embedded_cube())
    assert d.face_count == 6 and len(d.dual_edges) == 12
    assert all(d.degree(f) == 4 for f in range(6))
    c4 = cycle(4)
    d = dual(rotation_from_lists(c4, [c4.incident_edges(v) for v in range(4)]))
    assert d.face_count == 2 and len(d.dual_edges) == 4
    assert {frozenset((a, b)) for a, b, _ in d.dual_edges} == {frozenset((0, 1))}
    assert dual(embedded_prism(6)).face_count == 8


def test_named_embeddings():
    for name, k, sizes in [("cube", None, [4] * 6), ("hex_prism", None, [4] * 6 + [6] * 2),
                           ("prism", 12, [4] * 12 + [12] * 2),
                           ("truncated_octahedron", None, [4] * 6 + [6] * 8)]:
        rs = embedded_named(name, k)
        assert sorted(map(len, faces(rs))) == sizes
        assert is_barnette(rs)
    assert truncated_octahedron().graph.n == 24
    with pytest.raises(ValueError):
        embedded_named("heawood")


def test_non_planar_rotation_rejected():
    # a K4 rotation with one vertex reversed traces too few faces
    rs = k4_rotation()
    rot = [list(r) for r in rs.rotation]
    rot[0].reverse()
    with pytest.raises(NotPlanarEmbedding):
        faces(rotation_from_lists(rs.graph, rot))
    k33 = make_graph(6, [(a, b) for a in range(3) for b in range(3, 6)])
    rs = rotation_from_lists(k33, [k33.incident_edges(v) for v in range(6)])
    with pytest.raises(NotPlanarEmbedding):
        faces(rs)


def test_disconnected_rejected():
    g = make_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    with pytest.raises(NotPlanarEmbedding):
        faces(rotation_from_lists(g, [g.incident_edges(v) for v in range(6)]))


def test_bad_rotation():
    g = cube()
    with pytest.raises(BadRotation):
        rotation_from_lists(g, [[0, 1, 2]] * 8)
    with pytest.raises(BadRotation):
        read_rotation(g, "0: 0 1 2\n")


def test_rotation_text_roundtrip():
    rs = truncated_octahedron()
    assert read_rotation(rs.graph, write_rotation(rs)) == rs


def test_not_barnette():
    assert not is_barnette(embedded_prism(5))  # odd prism is not bipartite
    assert not is_barnette(k4_rotation())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 6))
def test_face_dual_roundtrip(seed, steps):
    rs = random_barnette(seed, steps)
    fs = faces(rs)
    g = rs.graph
    assert sum(map(len, fs)) == 2 * g.m
    assert len(dual(rs, fs).dual_edges) == g.m
    assert g.n - g.m + len(fs) == 2
    assert is_barnette(rs)
