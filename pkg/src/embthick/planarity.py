"""Planarity and outerplanarity tests with replayable witnesses.

Planarity is decided by networkx's left-right test; every positive verdict
is converted into a rotation system and replayed through our own face
tracer before it is reported.  Outerplanarity has two independent routes:
apex augmentation (used for certificates) and a degree-two reduction that
recovers the outer Hamiltonian cycle of each block (used inside searches).
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Iterable, Literal

import networkx as nx

from .embedding import Embedding, Graph

LayerClass = Literal["planar", "outerplanar"]

sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))


@dataclass(frozen=True)
class LayerCertificate:
    cls: LayerClass
    verdict: bool
    witness: Embedding | None = None
    outer_faces: tuple[int, ...] = ()
    note: str = ""

    def __bool__(self) -> bool:
        return self.verdict

    def replay(self) -> bool:
        """Re-check a positive witness from scratch."""
        if not self.verdict:
            return True
        w = self.witness
        if w is None:
            return False
        s = w.surface
        if not s.orientable or s.genus != 0:
            return False
        if self.cls == "outerplanar":
            covered = set(w.isolated_vertices)
            for fi in self.outer_faces:
                covered.update(w.vertex_of(d) for d in w.faces[fi].darts)
            return covered == set(range(w.n))
        return True


# ---------------------------------------------------------------------------
# fast predicates on edge lists (no witnesses)
# ---------------------------------------------------------------------------


def _simple(pairs: Iterable[tuple[int, int]]) -> tuple[dict[int, set[int]], int]:
    adj: dict[int, set[int]] = {}
    m = 0
    for u, v in pairs:
        if u == v:
            continue
        a = adj.setdefault(u, set())
        if v in a:
            continue
        a.add(v)
        adj.setdefault(v, set()).add(u)
        m += 1
    return adj, m


def planar_pairs(pairs: Iterable[tuple[int, int]]) -> bool:
    adj, m = _simple(pairs)
    n = len(adj)
    if n <= 4 or m < 9:  # every nonplanar graph has >= 9 edges
        return True
    if m > 3 * n - 6:
        return False
    g = nx.Graph()
    for u, nb in adj.items():
        for v in nb:
            if u < v:
                g.add_edge(u, v)
    return nx.check_planarity(g)[0]


def outerplanar_pairs(pairs: Iterable[tuple[int, int]]) -> bool:
    adj, m = _simple(pairs)
    n = len(adj)
    if n <= 3:
        return True
    if m > 2 * n - 3:
        return False
    if m < 6:  # every non-outerplanar graph has >= 6 edges
        return True
    for block in _blocks(adj):
        if len(block) > 2 and not _outerplanar_block(block):
            return False
    return True


def _blocks(adj: dict[int, set[int]]) -> list[list[tuple[int, int]]]:
    """Biconnected components as edge lists (Tarjan)."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    stack: list[tuple[int, int]] = []
    out: list[list[tuple[int, int]]] = []
    counter = [0]

    def visit(v: int, parent: int | None) -> None:
        index[v] = low[v] = counter[0]
        counter[0] += 1
        for w in adj[v]:
            if w == parent:
                continue
            if w not in index:
                stack.append((v, w))
                visit(w, v)
                low[v] = min(low[v], low[w])
                if low[w] >= index[v]:
                    comp = []
                    while True:
                        e = stack.pop()
                        comp.append(e)
                        if e == (v, w):
                            break
                    out.append(comp)
            elif index[w] < index[v]:
                stack.append((v, w))
                low[v] = min(low[v], index[w])

    for v in adj:
        if v not in index:
            visit(v, None)
    return out


def _outerplanar_block(block: list[tuple[int, int]]) -> bool:
    adj: dict[int, set[int]] = {}
    for u, v in block:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    orig = {v: set(nb) for v, nb in adj.items()}
    n = len(adj)
    if len(block) > 2 * n - 3:
        return False
    removed: list[tuple[int, int, int]] = []
    deg2 = [v for v, nb in adj.items() if len(nb) == 2]
    while len(adj) > 3:
        v = None
        while deg2:
            c = deg2.pop()
            if c in adj and len(adj[c]) == 2:
                v = c
                break
        if v is None:
            return False
        a, b = adj.pop(v)
        adj[a].discard(v)
        adj[b].discard(v)
        removed.append((v, a, b))
        adj[a].add(b)
        adj[b].add(a)
        for x in (a, b):
            if len(adj[x]) == 2:
                deg2.append(x)
    cycle = list(adj)
    if len(cycle) != 3:
        return False
    for v, a, b in reversed(removed):
        k = len(cycle)
        ia, ib = cycle.index(a), cycle.index(b)
        if (ia + 1) % k == ib:
            cycle.insert(ia + 1, v)
        elif (ib + 1) % k == ia:
            cycle.insert(ib + 1, v)
        else:
            return False
    k = len(cycle)
    pos = {v: i for i, v in enumerate(cycle)}
    for i in range(k):
        if cycle[(i + 1) % k] not in orig[cycle[i]]:
            return False
    chords = []
    for u, v in block:
        i, j = sorted((pos[u], pos[v]))
        if j - i == 1 or (i == 0 and j == k - 1):
            continue
        chords.append((i, j))
    chords.sort(key=lambda c: (c[0], -c[1]))
    open_ends: list[int] = []
    for i, j in chords:
        while open_ends and open_ends[-1] <= i:
            open_ends.pop()
        if open_ends and j > open_ends[-1]:
            return False
        open_ends.append(j)
    return True


def layer_ok(kind: LayerClass, pairs: Iterable[tuple[int, int]]) -> bool:
    return planar_pairs(pairs) if kind == "planar" else outerplanar_pairs(pairs)


def max_edges(kind: LayerClass, n: int) -> int:
    """Edge-count ceiling for a simple layer on ``n`` vertices."""
    if kind == "planar":
        return 3 * n - 6 if n >= 3 else (1 if n == 2 else 0)
    return 2 * n - 3 if n >= 2 else 0


# ---------------------------------------------------------------------------
# certified tests
# ---------------------------------------------------------------------------


def _nx_graph(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.simple_pairs())
    return h


def _rotation_from_nx(n: int, emb: nx.PlanarEmbedding) -> Embedding:
    pairs = sorted({(min(u, v), max(u, v)) for u, v in emb.edges() if u < n and v < n})
    ident = {p: i for i, p in enumerate(pairs)}

    def dart(a: int, b: int) -> tuple[int, int]:
        e = ident[(min(a, b), max(a, b))]
        return (e, 0 if pairs[e][0] == a else 1)

    rotation = []
    for v in range(n):
        if v in emb and emb[v]:
            rotation.append([dart(v, w) for w in emb.neighbors_cw_order(v) if w < n])
        else:
            rotation.append([])
    return Embedding.build(n, pairs, rotation)


def is_planar(g: Graph) -> LayerCertificate:
    h = _nx_graph(g)
    m = h.number_of_edges()
    active = sum(1 for v in h if h.degree(v))
    if active >= 3 and m > 3 * active - 6:
        return LayerCertificate("planar", False, note=f"{m} edges exceed 3n-6 = {3 * active - 6}")
    ok, emb = nx.check_planarity(h)
    if not ok:
        return LayerCertificate("planar", False, note="contains a Kuratowski subgraph")
    witness = _rotation_from_nx(g.n, emb)
    cert = LayerCertificate("planar", True, witness)
    if not cert.replay():
        raise AssertionError("planar witness failed to replay")
    return cert


def is_outerplanar(g: Graph) -> LayerCertificate:
    h = _nx_graph(g)
    m = h.number_of_edges()
    active = sum(1 for v in h if h.degree(v))
    if active >= 2 and m > 2 * active - 3:
        return LayerCertificate("outerplanar", False, note=f"{m} edges exceed 2n-3 = {2 * active - 3}")
    apex = g.n
    h.add_edges_from((apex, v) for v in range(g.n))
    ok, emb = nx.check_planarity(h)
    if not ok:
        return LayerCertificate("outerplanar", False, note="apex augmentation is nonplanar")
    witness = _rotation_from_nx(g.n, emb)
    # after the apex is removed, its corners merge into one face per component
    outer = []
    for comp in witness.components:
        if len(comp) == 1 and not witness.rotation[comp[0]]:
            continue
        compset = set(comp)
        best = None
        for f in witness.faces:
            verts = {witness.vertex_of(d) for d in f.darts}
            if verts == compset:
                best = f.index
                break
        if best is None:
            return LayerCertificate("outerplanar", False, note="no face carries every vertex")
        outer.append(best)
    cert = LayerCertificate("outerplanar", True, witness, tuple(outer))
    if not cert.replay():
        raise AssertionError("outerplanar witness failed to replay")
    return cert


def certify(kind: LayerClass, g: Graph) -> LayerCertificate:
    return is_planar(g) if kind == "planar" else is_outerplanar(g)
