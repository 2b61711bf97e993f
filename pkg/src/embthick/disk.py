"""Spanning disks: a closed disk region containing every vertex.

A region is kept as a set of edges plus a set of faces (identified by their
state keys, which survive surgery elsewhere in the embedding).  It starts as
a BFS spanning tree, absorbs faces while it stays contractible, and then
removes cut vertices of its boundary walk by adding a helper chord across a
corner ``x v y`` (or re-embedding an existing ``xy`` there).  Edges left
outside the final disk are the essential edges.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .embedding import (
    Dart,
    Embedding,
    HomologyTable,
    State,
    add_edge,
    delete_edges,
    homology_signatures,
    restrict,
    tree_path,
)
from .errors import DiskConstructionError, EmbeddingError


@dataclass(frozen=True, eq=False)
class SpanningDiskResult:
    embedding: Embedding  # possibly augmented with helper edges
    disk_edges: frozenset[int]
    disk_faces: frozenset[frozenset[State]]
    boundary: tuple[State, ...]  # walk around the disk, outside view
    added: tuple[int, ...] = ()
    reembedded: tuple[int, ...] = ()
    root: int = 0
    log: tuple[str, ...] = field(default_factory=tuple)

    @property
    def essential(self) -> frozenset[int]:
        return frozenset(set(self.embedding.edges) - self.disk_edges)

    @property
    def boundary_vertices(self) -> tuple[int, ...]:
        emb = self.embedding
        return tuple(emb.vertex_of(d) for d, _ in self.boundary)

    @property
    def boundary_edges(self) -> frozenset[int]:
        return frozenset(d[0] for d, _ in self.boundary)

    @cached_property
    def homology(self) -> HomologyTable:
        return homology_signatures(self.embedding)

    def signature(self, e: int) -> tuple[int, ...]:
        """Homology class of ``e`` closed up by a path inside the disk."""
        emb = self.embedding
        u, v = emb.edges[e]
        walk = [(e, 1)]
        if u != v:
            walk += tree_path(emb.n, emb.edges, self.disk_edges, v, u)
        return self.homology.evaluate(walk)

    @property
    def modified(self) -> bool:
        return bool(self.added or self.reembedded)


# ---------------------------------------------------------------------------
# region bookkeeping
# ---------------------------------------------------------------------------


def _bfs_tree(emb: Embedding, root: int) -> set[int]:
    incident: list[list[int]] = [[] for _ in range(emb.n)]
    for e, (u, v) in sorted(emb.edges.items()):
        if u != v:
            incident[u].append(e)
            incident[v].append(e)
    tree: set[int] = set()
    seen = {root}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for e in incident[x]:
            u, v = emb.edges[e]
            y = v if u == x else u
            if y not in seen:
                seen.add(y)
                tree.add(e)
                queue.append(y)
    return tree


def _grow(emb: Embedding, r_edges: set[int], r_keys: set[frozenset[State]]) -> None:
    """Absorb faces with exactly one outside edge until none is left."""
    while True:
        keys = [emb.face_key(f) for f in emb.faces]
        outside = [i for i, k in enumerate(keys) if k not in r_keys]
        if len(outside) <= 1:
            return
        for i in outside:
            f = emb.faces[i]
            new = [d[0] for d, _ in f.steps if d[0] not in r_edges]
            if len(new) == 1:
                r_edges.add(new[0])
                r_keys.add(keys[i])
                break
        else:
            return


def _outer_walk(emb: Embedding, r_edges: set[int], r_keys: set[frozenset[State]]) -> tuple[State, ...]:
    sub = restrict(emb, r_edges)
    outer = [f for f in sub.faces if sub.face_key(f) not in r_keys]
    if len(outer) != 1:
        raise DiskConstructionError(f"region has {len(outer)} outside faces; expected one")
    return outer[0].steps


def _repeats(emb: Embedding, walk: tuple[State, ...]) -> dict[int, list[int]]:
    where: dict[int, list[int]] = {}
    for i, (d, _) in enumerate(walk):
        where.setdefault(emb.vertex_of(d), []).append(i)
    return {v: pos for v, pos in where.items() if len(pos) > 1}


def _edge_between(emb: Embedding, x: int, y: int) -> int | None:
    for e, (u, v) in emb.edges.items():
        if {u, v} == {x, y} and u != v:
            return e
    return None


def _try_cut(
    emb: Embedding,
    r_edges: set[int],
    r_keys: set[frozenset[State]],
    walk: tuple[State, ...],
    i: int,
) -> tuple[Embedding, str, int] | None:
    """Close the corner at walk position ``i`` with a chord; None if not allowed."""
    prev, cur = walk[i - 1], walk[i]
    if emb.step(prev) != cur:
        return None  # outside darts sit in this corner
    x = emb.vertex_of(prev[0])
    v = emb.vertex_of(cur[0])
    y = emb.other_end(cur[0])
    if len({x, v, y}) < 3:
        return None
    existing = _edge_between(emb, x, y)
    if existing is not None and existing in r_edges:
        return None
    work = emb
    kind = "add"
    if existing is not None:
        kind = "reembed"
        work = delete_edges(emb, [existing])
    after = work.step(cur)
    cx = work.corner_of(prev)
    cy = work.corner_of(after)
    if existing is not None:
        helper = existing in emb.helpers
        if emb.edges[existing][0] == x:
            out, new = add_edge(work, cx, cy, helper=helper, edge_id=existing)
        else:
            out, new = add_edge(work, cy, cx, helper=helper, edge_id=existing)
    else:
        out, new = add_edge(work, cx, cy, helper=True)
    hit = out.face_of_state.get(cur)
    if hit is None:
        return None
    tri = out.faces[hit[0]]
    if tri.size != 3 or {d[0] for d, _ in tri.steps} != {prev[0][0], cur[0][0], new}:
        return None
    r_edges.add(new)
    r_keys.add(out.face_key(tri))
    return out, kind, new


def _attempt(emb: Embedding, root: int, max_ops: int) -> SpanningDiskResult:
    r_edges = _bfs_tree(emb, root)
    r_keys: set[frozenset[State]] = set()
    added: list[int] = []
    moved: list[int] = []
    log: list[str] = []
    for _ in range(max_ops):
        _grow(emb, r_edges, r_keys)
        walk = _outer_walk(emb, r_edges, r_keys)
        reps = _repeats(emb, walk)
        if not reps:
            return SpanningDiskResult(
                emb, frozenset(r_edges), frozenset(r_keys), walk, tuple(added), tuple(moved), root, tuple(log)
            )
        done = None
        for v in sorted(reps):
            for i in reps[v]:
                trial_edges, trial_keys = set(r_edges), set(r_keys)
                try:
                    res = _try_cut(emb, trial_edges, trial_keys, walk, i)
                except EmbeddingError:
                    res = None
                if res is not None:
                    done = (res, trial_edges, trial_keys, v)
                    break
            if done:
                break
        if done is None:
            v = min(reps)
            raise DiskConstructionError(f"no admissible chord at cut vertex {v} (root {root})", vertex=v)
        (emb, kind, e), r_edges, r_keys, v = done
        if kind == "add":
            added.append(e)
        elif e not in moved:
            moved.append(e)
        log.append(f"{kind} edge {e} at cut vertex {v}")
    raise DiskConstructionError("operation budget exhausted")


def _degenerate(emb: Embedding) -> SpanningDiskResult | None:
    """Graphs with at most two vertices: the region is a point or an edge."""
    if emb.n > 2:
        return None
    r_edges: set[int] = set()
    if emb.n == 2:
        e = _edge_between(emb, 0, 1)
        if e is None:
            raise DiskConstructionError("disconnected input")
        r_edges.add(e)
    walk: tuple[State, ...] = ()
    if r_edges:
        walk = _outer_walk(emb, r_edges, set())
    return SpanningDiskResult(emb, frozenset(r_edges), frozenset(), walk)


def build_spanning_disk(
    emb: Embedding, roots: Iterable[int] | None = None, max_ops: int | None = None
) -> SpanningDiskResult:
    """Augment ``emb`` until it has a spanning disk, and return that disk.

    The BFS seed tree is rooted at vertex 0; when the chord moves get stuck the
    construction is retried from the other roots in turn before giving up.
    """
    if emb.n == 0:
        raise DiskConstructionError("empty graph")
    live = [c for c in emb.components if len(c) > 1 or emb.rotation[c[0]]]
    if len(live) != 1 or len(live[0]) != emb.n:
        raise DiskConstructionError("spanning disk needs a connected graph without isolated vertices")
    deg = _degenerate(emb)
    if deg is not None:
        return deg
    budget = max_ops if max_ops is not None else 4 * emb.n + 2 * emb.m + 8
    order = list(roots) if roots is not None else list(range(emb.n))
    first_err: DiskConstructionError | None = None
    for root in order:
        try:
            res = _attempt(emb, root, budget)
        except DiskConstructionError as err:
            first_err = first_err or err
            continue
        if verify_disk(res):
            return res
    raise first_err or DiskConstructionError("no root produced a verified disk")


def verify_disk(res: SpanningDiskResult) -> bool:
    """Independent re-check of a spanning disk."""
    emb = res.embedding
    r_edges = set(res.disk_edges)
    if not r_edges <= set(emb.edges):
        return False
    if emb.n <= 2:
        if emb.n == 2 and len(r_edges) != 1:
            return False
        return all(emb.edges[e][0] != emb.edges[e][1] for e in r_edges) and _essential_ok(res)
    keys = {emb.face_key(f) for f in emb.faces}
    if not set(res.disk_faces) <= keys:
        return False
    face_edges = {d[0] for k in res.disk_faces for d, _ in k}
    if not face_edges <= r_edges:
        return False
    touched = {v for e in r_edges for v in emb.edges[e]}
    if touched != set(range(emb.n)):
        return False
    if emb.n - len(r_edges) + len(res.disk_faces) != 1:
        return False
    try:
        walk = _outer_walk(emb, r_edges, set(res.disk_faces))
    except DiskConstructionError:
        return False
    verts = [emb.vertex_of(d) for d, _ in walk]
    if len(verts) < 3 or len(set(verts)) != len(verts):
        return False
    return _essential_ok(res)


def _essential_ok(res: SpanningDiskResult) -> bool:
    rank = res.homology.rank
    zero = tuple([0] * rank)
    return all(res.signature(e) != zero for e in res.essential)


def essential_star(res: SpanningDiskResult, v: int) -> list[int]:
    """Essential edges at ``v`` in rotation order, starting after the disk boundary."""
    emb = res.embedding
    ess = res.essential
    rot = emb.rotation[v]
    if not any(d[0] in ess for d in rot):
        raise DiskConstructionError(f"vertex {v} has no essential edges", vertex=v)
    start = 0
    for i, d in enumerate(rot):
        if d[0] not in ess and rot[(i + 1) % len(rot)][0] in ess:
            start = i + 1
            break
    out: list[int] = []
    for j in range(len(rot)):
        d: Dart = rot[(start + j) % len(rot)]
        if d[0] in ess and d[0] not in out:
            out.append(d[0])
    return out


def essential_vertices(res: SpanningDiskResult) -> list[int]:
    emb = res.embedding
    return sorted({x for e in res.essential for x in emb.edges[e]})
