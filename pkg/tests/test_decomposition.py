import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from embthick.decomposition import (
    bounds_for_surface,
    bounds_report,
    choose_method,
    classify_essential_edges,
    decompose,
    degeneracy_peel,
    degeneracy_threshold,
    forest_partition,
    split_core,
)
from embthick.disk import build_spanning_disk
from embthick.embedding import Embedding, Graph, check_embedding
from embthick.errors import DecompositionError
from embthick.generators import kn, random_embedding
from embthick.oracle import verify_decomposition
from embthick.planarity import layer_ok


def methods_for(emb, goal):
    s = emb.surface
    if s.genus == 0:
        return ["planar", "genus-peel"]
    out = ["degeneracy"]
    if s.orientable:
        out.append("genus-peel")
        if s.genus == 1 and goal == "outerthickness":
            out.append("torus")
    return out


def run_checked(emb, goal, method):
    dec = decompose(emb, goal, method)
    report = verify_decomposition(emb.graph.subgraph(emb.original_edges()), dec)
    assert report.ok, report.problems
    assert dec.count <= dec.bound
    return dec


# bounds --------------------------------------------------------------------


@pytest.mark.parametrize(
    "orientable,genus,goal,method,expected",
    [
        (True, 1, "thickness", "genus-peel", 2),
        (True, 2, "thickness", "degeneracy", 4),  # floor(3 + sqrt 3)
        (True, 3, "thickness", "degeneracy", 5),  # floor(3 + sqrt 5)
        (True, 1, "outerthickness", "torus", 3),
        (True, 1, "outerthickness", "degeneracy", 5),  # floor(4 + sqrt 1.5)
        (True, 2, "outerthickness", "genus-peel", 6),
        (False, 1, "thickness", "degeneracy", 2),  # square case x = 0
        (False, 2, "thickness", "degeneracy", 3),  # square case x = 1
        (False, 3, "outerthickness", "degeneracy", 5),  # floor(4 + sqrt 3)
    ],
)
def test_effective_bounds(orientable, genus, goal, method, expected):
    assert bounds_for_surface(orientable, genus).for_method(method, goal).effective == expected


def test_bounds_of_named_embeddings(k7, k4):
    rep = bounds_report(k7)
    assert rep.surface == "S_1"
    assert (rep.best("thickness"), rep.best("outerthickness")) == (2, 3)
    assert bounds_report(k4).best("thickness") == 1


@pytest.mark.parametrize("orientable,genus", [(True, g) for g in range(1, 8)] + [(False, k) for k in range(1, 8)])
def test_threshold_plus_extra_layers_matches_bound(orientable, genus):
    rep = bounds_for_surface(orientable, genus)
    assert degeneracy_threshold(orientable, genus, "thickness") + 1 == rep.for_method("degeneracy", "thickness").effective
    assert degeneracy_threshold(orientable, genus, "outerthickness") + 2 == rep.for_method("degeneracy", "outerthickness").effective


def test_threshold_needs_positive_genus():
    with pytest.raises(DecompositionError):
        degeneracy_threshold(True, 0, "thickness")


# peel and forests ----------------------------------------------------------


def complete_graph(n):
    return Graph(n, dict(enumerate(itertools.combinations(range(n), 2))))


def test_peel_k5_below_degree_keeps_everything():
    rec = degeneracy_peel(complete_graph(5), 3)
    assert rec.removed == []
    assert rec.core_vertices == (0, 1, 2, 3, 4)
    assert len(rec.core_edges) == 10


def test_peel_k5_at_degree_removes_everything():
    rec = degeneracy_peel(complete_graph(5), 4)
    assert [v for v, _ in rec.removed] == [0, 1, 2, 3, 4]
    assert [len(es) for _, es in rec.removed] == [4, 3, 2, 1, 0]
    assert rec.core_vertices == ()
    forests = forest_partition(rec)
    assert sorted(len(f) for f in forests) == [1, 2, 3, 4]


def test_peel_path():
    rec = degeneracy_peel(Graph(3, {0: (0, 1), 1: (1, 2)}), 1)
    assert [v for v, _ in rec.removed] == [0, 1, 2]
    assert forest_partition(rec) == [[1, 0]]


def test_peel_rejects_loops():
    with pytest.raises(ValueError):
        degeneracy_peel(Graph(1, {0: (0, 0)}), 1)


def _acyclic(edges, pairs):
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            x = parent[x]
        return x

    for e in edges:
        a, b = find(pairs[e][0]), find(pairs[e][1])
        if a == b:
            return False
        parent[a] = b
    return True


def _components(edges, pairs):
    adj = {}
    for e in edges:
        u, v = pairs[e]
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    seen, comps = set(), []
    for s in adj:
        if s in seen:
            continue
        comp, stack = {s}, [s]
        while stack:
            for y in adj[stack.pop()]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        comps.append(comp)
    return comps


@st.composite
def graph_and_threshold(draw):
    n = draw(st.integers(1, 12))
    all_pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.sets(st.sampled_from(all_pairs), max_size=len(all_pairs))) if all_pairs else set()
    return Graph(n, dict(enumerate(sorted(chosen)))), draw(st.integers(1, 6))


@given(graph_and_threshold())
def test_forests_are_acyclic_and_hang_off_the_core(case):
    g, d = case
    rec = degeneracy_peel(g, d)
    forests = forest_partition(rec)
    assert len(forests) == d
    core = set(rec.core_vertices)
    placed = sorted(e for f in forests for e in f)
    assert placed == sorted(set(g.edges) - set(rec.core_edges))
    for f in forests:
        assert _acyclic(f, g.edges)
        for comp in _components(f, g.edges):
            assert len(comp & core) <= 1


def test_split_core_on_complete_core():
    g = complete_graph(7)
    layers, how = split_core(7, g.edges, tuple(range(7)), tuple(g.edges), 3, "outerplanar")
    assert how == "K7 pattern"
    assert all(layer_ok("outerplanar", [g.edges[e] for e in layer]) for layer in layers)
    with pytest.raises(DecompositionError):
        split_core(5, complete_graph(5).edges, tuple(range(5)), tuple(range(10)), 1, "planar")


# torus classification ------------------------------------------------------


def test_k7_classes(k7):
    classes = classify_essential_edges(build_spanning_disk(k7))
    assert len(classes) == 3
    assert sorted(len(c.edges) for c in classes) == [3, 3, 3]


def test_bouquet_classes(bouquet):
    classes = classify_essential_edges(build_spanning_disk(bouquet))
    assert sorted(c.signature for c in classes) == [(0, 1), (1, 0)]


@given(st.integers(0, 4), st.integers(0, 10**6))
def test_torus_never_has_more_than_three_classes(extra, seed):
    emb = random_embedding(4 + extra, 1, seed)
    res = build_spanning_disk(emb)
    if res.embedding.genus == 1:
        assert len(classify_essential_edges(res)) <= 3


# pipelines -----------------------------------------------------------------


def test_k7_torus_outerthickness(k7):
    dec = run_checked(k7, "outerthickness", "torus")
    assert dec.count == 3
    assert sum(len(layer.edges) for layer in dec.layers) == 21


def test_k7_genus_peel_thickness(k7):
    assert run_checked(k7, "thickness", "genus-peel").count <= 2


def test_heawood_and_bouquet(heawood, bouquet):
    for emb in (heawood, bouquet):
        for goal in ("thickness", "outerthickness"):
            for method in methods_for(emb, goal):
                dec = run_checked(emb, goal, method)
                assert not {e for layer in dec.layers for e in layer.edges} - set(emb.edges)
    assert run_checked(bouquet, "thickness", "genus-peel").count <= 2


def test_sphere_routes_to_planar(k4):
    assert choose_method(k4, "thickness") == "planar"
    assert run_checked(k4, "thickness", "auto").count == 1
    assert run_checked(kn(4), "outerthickness", "auto").count == 2
    with pytest.raises(DecompositionError):
        decompose(k4, "thickness", "degeneracy")


def test_torus_method_rejects_thickness(k7):
    with pytest.raises(DecompositionError):
        decompose(k7, "thickness", "torus")


def test_three_loop_bouquet_decomposes():
    emb = check_embedding(
        Embedding.build(1, [(0, 0)] * 3, [[(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]], allow_multi=True)
    )
    for method in ("torus", "genus-peel", "degeneracy"):
        run_checked(emb, "outerthickness", method)


@given(st.integers(0, 4), st.integers(1, 3), st.booleans(), st.integers(0, 10**6), st.sampled_from(["thickness", "outerthickness"]))
def test_pipelines_respect_bounds(extra, g, orientable, seed, goal):
    emb = random_embedding(4 + 2 * g + extra, g, seed, orientable=orientable)
    for method in methods_for(emb, goal):
        run_checked(emb, goal, method)


@given(st.integers(0, 10**6))
def test_relabelling_keeps_layer_count(seed):
    emb = random_embedding(7, 1, seed)
    base = decompose(emb, "outerthickness", "degeneracy").count
    # reverse vertex names; the peel order may change but the bound may not
    n = emb.n
    flip = emb.replace(
        rotation=tuple(emb.rotation[n - 1 - v] for v in range(n)),
        edges={e: (n - 1 - u, n - 1 - v) for e, (u, v) in emb.edges.items()},
    )
    dec = run_checked(check_embedding(flip), "outerthickness", "degeneracy")
    assert max(base, dec.count) <= dec.bound
