"""Exact small-instance ground truth and independent verification.

Nothing here depends on the decomposition pipelines: exact values come from
the partition search, spanning-disk existence from an exhaustive walk over
face sets, and :func:`verify_decomposition` re-certifies layers from scratch.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .embedding import Embedding, Graph
from .errors import SearchTimeout
from .planarity import LayerClass, certify
from .search import Deadline, SearchStats, partition_search

if TYPE_CHECKING:
    from .decomposition import Decomposition

EXCEEDED = "exceeded limit"


@dataclass
class OracleResult:
    value: int | str
    witness: list[list[int]] = field(default_factory=list)
    nodes: int = 0
    elapsed: float = 0.0
    lower_bound: int = 1

    @property
    def exact(self) -> bool:
        return isinstance(self.value, int)


def _exact(g: Graph, kind: LayerClass, max_k: int, time_limit: float | None) -> OracleResult:
    started = time.monotonic()
    deadline = Deadline(time_limit)
    ids = sorted(e for e, (u, v) in g.edges.items() if u != v)
    # parallel copies share a layer with their twin, so search the simple graph
    rep: dict[tuple[int, int], int] = {}
    for e in ids:
        u, v = g.edges[e]
        rep.setdefault((min(u, v), max(u, v)), e)
    keys = sorted(rep)
    nodes = 0
    lower = 1
    for k in range(1, max_k + 1):
        stats = SearchStats()
        try:
            where = partition_search(keys, k, kind, deadline, stats=stats)
        except SearchTimeout:
            nodes += stats.nodes
            return OracleResult(EXCEEDED, [], nodes, time.monotonic() - started, lower)
        nodes += stats.nodes
        if where is None:
            lower = k + 1
            continue
        slot = {key: c for key, c in zip(keys, where)}
        layers: list[list[int]] = [[] for _ in range(k)]
        for e, (u, v) in sorted(g.edges.items()):
            layers[slot[(min(u, v), max(u, v))] if u != v else 0].append(e)
        return OracleResult(k, layers, nodes, time.monotonic() - started, k)
    return OracleResult(EXCEEDED, [], nodes, time.monotonic() - started, lower)


def exact_thickness(g: Graph, max_k: int = 6, time_limit: float | None = None) -> OracleResult:
    """Minimum number of planar layers, by iterative deepening."""
    return _exact(g, "planar", max_k, time_limit)


def exact_outerthickness(g: Graph, max_k: int = 6, time_limit: float | None = None) -> OracleResult:
    """Minimum number of outerplanar layers, by iterative deepening."""
    return _exact(g, "outerplanar", max_k, time_limit)


# ---------------------------------------------------------------------------
# spanning disk existence
# ---------------------------------------------------------------------------


def region_is_spanning_disk(emb: Embedding, faces: frozenset[int]) -> bool:
    """True when the closed union of ``faces`` is a disk containing every vertex."""
    if not faces:
        return False
    sides: dict[int, int] = {}
    verts: set[int] = set()
    for fi in faces:
        for d, _ in emb.faces[fi].steps:
            sides[d[0]] = sides.get(d[0], 0) + 1
            verts.add(emb.vertex_of(d))
    if len(verts) != emb.n:
        return False
    if len(verts) - len(sides) + len(faces) != 1:
        return False
    boundary = [e for e, c in sides.items() if c == 1]
    if len(boundary) < 3 and emb.n >= 3:
        return False
    deg: dict[int, int] = {}
    adj: dict[int, list[int]] = {}
    for e in boundary:
        u, v = emb.edges[e]
        if u == v:
            return False
        for a, b in ((u, v), (v, u)):
            deg[a] = deg.get(a, 0) + 1
            adj.setdefault(a, []).append(b)
    if any(c != 2 for c in deg.values()):
        return False
    # one cycle through all boundary vertices
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(adj) == len(boundary)


def has_spanning_disk(emb: Embedding, time_limit: float | None = None) -> tuple[bool, frozenset[int]]:
    """Search every edge-connected set of faces for a spanning disk.

    No edges are added or moved.  Returns ``(found, face indices)``.
    """
    deadline = Deadline(time_limit)
    faces = emb.faces
    by_edge: dict[int, list[int]] = {}
    for f in faces:
        for d, _ in f.steps:
            by_edge.setdefault(d[0], []).append(f.index)
    nbrs = [set() for _ in faces]
    for fs in by_edge.values():
        for a in fs:
            nbrs[a].update(b for b in fs if b != a)
    seen: set[frozenset[int]] = set()
    stack = [frozenset([f.index]) for f in faces]
    count = 0
    while stack:
        region = stack.pop()
        if region in seen:
            continue
        seen.add(region)
        count += 1
        if count % 256 == 0:
            deadline.check()
        if region_is_spanning_disk(emb, region):
            return True, region
        if len(region) + 1 >= len(faces):
            continue  # a closed surface is never a disk
        frontier = set().union(*(nbrs[f] for f in region)) - region
        for f in frontier:
            grown = region | {f}
            if grown not in seen:
                stack.append(grown)
    return False, frozenset()


# ---------------------------------------------------------------------------
# decomposition verification
# ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    checks: dict[str, bool]
    problems: list[str]
    layers: int

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def as_dict(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "problems": list(self.problems), "layers": self.layers}


def verify_decomposition(g: Graph, dec: "Decomposition") -> VerificationReport:
    """Check partition exactness, helper exclusion, layer classes and the bound."""
    problems: list[str] = []
    checks = {"disjointness": True, "exhaustive": True, "helper_free": True, "certified": True, "bound": True}
    helper_ids = set()
    for item in dec.helpers:
        helper_ids.update(item.get("added", []))
    placed: dict[int, int] = {}
    for i, layer in enumerate(dec.layers):
        for e in layer.edges:
            if e not in g.edges:
                checks["helper_free"] = False
                problems.append(f"layer {i} names edge {e}, which is not in the graph")
                continue
            if e in placed:
                checks["disjointness"] = False
                problems.append(f"edge {e} appears in layers {placed[e]} and {i}")
            placed[e] = i
            if dec.graph.edges.get(e) is not None and tuple(dec.graph.edges[e]) != tuple(g.edges[e]):
                checks["helper_free"] = False
                problems.append(f"edge {e} endpoints disagree with the graph")
    missing = sorted(set(g.edges) - set(placed))
    if missing:
        checks["exhaustive"] = False
        problems.append(f"edges not covered: {missing[:10]}")
    expected = "planar" if dec.goal == "thickness" else "outerplanar"
    for i, layer in enumerate(dec.layers):
        if layer.cls != expected:
            checks["certified"] = False
            problems.append(f"layer {i} is tagged {layer.cls}, goal needs {expected}")
        ids = [e for e in layer.edges if e in g.edges]
        cert = certify(expected, g.subgraph(ids))
        if not cert or not cert.replay():
            checks["certified"] = False
            problems.append(f"layer {i} is not {expected}: {cert.note}")
    used = sum(1 for layer in dec.layers if layer.edges)
    if used > dec.bound:
        checks["bound"] = False
        problems.append(f"{used} layers exceed the claimed bound {dec.bound}")
    return VerificationReport(checks, problems, used)
