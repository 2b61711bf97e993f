import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from embthick.embedding import (
    Embedding,
    add_edge_in_face,
    check_embedding,
    delete_edges,
    homology_signatures,
    normalize_orientation,
    reembed_edge,
    validate_embedding,
)
from embthick.errors import EmbeddingError
from embthick.generators import random_embedding


def test_k7_is_a_torus_triangulation(k7):
    assert k7.n == 7 and k7.m == 21
    assert sorted(f.size for f in k7.faces) == [3] * 14
    assert k7.chi == 0
    assert k7.surface.orientable and k7.genus == 1


def test_heawood_is_bipartite_hexagonal(heawood):
    assert (heawood.n, heawood.m, heawood.chi) == (14, 21, 0)
    assert sorted(f.size for f in heawood.faces) == [6] * 7
    colour = {0: 0}
    stack = [0]
    adj = heawood.graph.adjacency()
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in colour:
                colour[y] = 1 - colour[x]
                stack.append(y)
            assert colour[y] != colour[x]


def test_bouquet_has_one_face_on_torus(bouquet):
    assert len(bouquet.faces) == 1
    assert bouquet.faces[0].size == 4
    assert bouquet.surface.label() == "S_1"


def test_twisted_loop_is_projective_plane():
    emb = check_embedding(Embedding.build(1, [(0, 0)], [[(0, 0), (0, 1)]], {0: -1}, allow_multi=True))
    assert not emb.orientable
    assert emb.genus == 1
    assert len(emb.faces) == 1


def test_planar_k4(k4):
    assert k4.surface.label() == "sphere"
    assert len(k4.faces) == 4


def test_validate_reports_missing_and_duplicate_darts():
    emb = Embedding.build(3, [(0, 1), (1, 2)], [[(0, 0)], [(0, 1), (1, 0), (0, 1)], []])
    problems = validate_embedding(emb)
    assert any("appears twice" in p for p in problems)
    assert any("dart absent: 1.1" in p for p in problems)


def test_validate_rejects_empty_graph():
    assert "empty graph" in validate_embedding(Embedding.build(0, [], []))


def test_contractible_loop_rejected():
    emb = Embedding.build(2, [(0, 1), (0, 0)], [[(0, 0), (1, 0), (1, 1)], [(0, 1)]], allow_multi=True)
    assert any("contractible" in p for p in validate_embedding(emb))


def test_homology_faces_vanish(k7):
    table = homology_signatures(k7)
    assert table.rank == 2
    for f in k7.faces:
        assert table.evaluate_darts(f.darts) == (0, 0)


def test_homology_bouquet_generators(bouquet):
    table = homology_signatures(bouquet)
    vecs = {table.canonical(v) for v in table.vectors.values()}
    assert vecs == {(1, 0), (0, 1)}


def test_add_edge_splits_face(k4):
    face = max(k4.faces, key=lambda f: f.size)
    big = Embedding.build(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], [
        [(4, 1), (0, 0)], [(0, 1), (1, 0)], [(1, 1), (2, 0)], [(2, 1), (3, 0)], [(3, 1), (4, 0)]])
    assert len(big.faces) == 2 and face.size == 3
    out, new = add_edge_in_face(big, 0, 0, 2)
    assert len(out.faces) == 3
    assert new in out.helpers
    assert out.chi == big.chi


def test_add_edge_refuses_duplicates(k4):
    f = k4.faces[0]
    with pytest.raises(EmbeddingError):
        add_edge_in_face(k4, f, 0, 1)


def test_reembed_keeps_edge_id(k7):
    e = 0
    u, v = k7.edges[e]
    removed = delete_edges(k7, [e])
    face = next(f for f in removed.faces if {removed.vertex_of(d) for d in f.darts} >= {u, v})
    cu = next(removed.corner_of(st) for st in face.steps if removed.vertex_of(st[0]) == u)
    cv = next(removed.corner_of(st) for st in face.steps if removed.vertex_of(st[0]) == v)
    out = reembed_edge(k7, e, cu, cv)
    assert out.edges[e] == (u, v)
    assert out.surface.euler_genus <= k7.surface.euler_genus
    assert not validate_embedding(out)


def _random_rotation(n, pairs, rng_seed, signs=False):
    import random

    rng = random.Random(rng_seed)
    rot = [[] for _ in range(n)]
    for e, (u, v) in enumerate(pairs):
        rot[u].append((e, 0))
        rot[v].append((e, 1))
    for r in rot:
        rng.shuffle(r)
    sg = {e: rng.choice((1, -1)) for e in range(len(pairs))} if signs else None
    return Embedding.build(n, pairs, rot, sg)


@given(st.integers(3, 7), st.integers(0, 10**6), st.booleans())
def test_euler_characteristic_consistency(n, seed, twisted):
    pairs = list(itertools.combinations(range(n), 2))
    emb = _random_rotation(n, pairs, seed, twisted)
    s = emb.surface
    # every dart state lies on exactly one face walk (up to mirroring)
    assert sum(f.size for f in emb.faces) == 2 * emb.m
    assert s.chi == 2 - s.euler_genus
    if s.orientable:
        assert s.chi % 2 == 0


@given(st.integers(3, 7), st.integers(0, 10**6))
def test_normalize_orientation_preserves_faces(n, seed):
    pairs = list(itertools.combinations(range(n), 2))
    emb = _random_rotation(n, pairs, seed)
    flipped = list(emb.rotation)
    signs = dict(emb.signs)
    # flip vertex 0 locally: reverse its rotation and negate its edge signs
    flipped[0] = tuple(reversed(flipped[0]))
    for e, (u, v) in emb.edges.items():
        if 0 in (u, v):
            signs[e] = -signs[e]
    twin = emb.replace(rotation=tuple(flipped), signs=signs)
    assert twin.orientable
    assert len(twin.faces) == len(emb.faces)
    norm = normalize_orientation(twin)
    assert all(s == 1 for s in norm.signs.values())
    assert len(norm.faces) == len(emb.faces)


@given(st.integers(5, 9), st.integers(1, 2), st.integers(0, 10**6))
def test_homology_of_faces_is_zero(n, g, seed):
    emb = random_embedding(n, g, seed)
    table = homology_signatures(emb)
    assert table.rank == 2 * g
    for f in emb.faces:
        walk = normalize_orientation(emb).faces[f.index].darts
        assert not any(table.evaluate_darts(walk))
