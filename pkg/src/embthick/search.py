"""Edge-partition search: split an edge list into k planar/outerplanar layers.

Used by the exact oracle, by the planar->two-outerplanar bipartition and by
core decompositions.  A randomized repair heuristic runs first; when it does
not find a witness an exhaustive backtracking search with forward checking
settles the question (or the deadline expires).
"""

from __future__ import annotations

import random
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .errors import SearchTimeout
from .planarity import LayerClass, layer_ok, max_edges


class Deadline:
    def __init__(self, seconds: float | None = None) -> None:
        self.seconds = seconds
        self.end = None if seconds is None else time.monotonic() + seconds

    def expired(self) -> bool:
        return self.end is not None and time.monotonic() > self.end

    def check(self) -> None:
        if self.expired():
            raise SearchTimeout(f"time limit of {self.seconds}s exceeded")


@dataclass
class SearchStats:
    nodes: int = 0
    tests: int = 0
    heuristic_rounds: int = 0
    method: str = ""
    started: float = field(default_factory=time.monotonic)

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started


class _Layers:
    """k layers over a shared edge list with cheap incremental tests."""

    def __init__(self, pairs: Sequence[tuple[int, int]], k: int, kind: LayerClass, stats: SearchStats):
        self.pairs = pairs
        self.k = k
        self.kind = kind
        self.stats = stats
        self.members: list[set[int]] = [set() for _ in range(k)]
        self.adj: list[dict[int, dict[int, int]]] = [dict() for _ in range(k)]

    def _connected(self, c: int, a: int, b: int) -> bool:
        adj = self.adj[c]
        if a not in adj or b not in adj:
            return False
        seen = {a}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y == b:
                    return True
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return False

    def fits(self, c: int, e: int) -> bool:
        u, v = self.pairs[e]
        if u == v or not self._connected(c, u, v):
            return True
        if v in self.adj[c].get(u, ()):
            return True  # parallel copy of an existing edge
        self.stats.tests += 1
        pairs = [self.pairs[f] for f in self.members[c]]
        pairs.append((u, v))
        return layer_ok(self.kind, pairs)

    def add(self, c: int, e: int) -> None:
        u, v = self.pairs[e]
        self.members[c].add(e)
        if u == v:
            return
        for a, b in ((u, v), (v, u)):
            nb = self.adj[c].setdefault(a, {})
            nb[b] = nb.get(b, 0) + 1

    def remove(self, c: int, e: int) -> None:
        u, v = self.pairs[e]
        self.members[c].discard(e)
        if u == v:
            return
        for a, b in ((u, v), (v, u)):
            nb = self.adj[c][a]
            nb[b] -= 1
            if not nb[b]:
                del nb[b]
            if not nb:
                del self.adj[c][a]


def counting_infeasible(n_active: int, m_simple: int, k: int, kind: LayerClass) -> bool:
    return m_simple > k * max_edges(kind, n_active)


def _active(pairs: Sequence[tuple[int, int]]) -> tuple[int, int]:
    verts = set()
    simple = set()
    for u, v in pairs:
        if u != v:
            verts.update((u, v))
            simple.add((min(u, v), max(u, v)))
    return len(verts), len(simple)


def heuristic_partition(
    pairs: Sequence[tuple[int, int]],
    k: int,
    kind: LayerClass,
    deadline: Deadline,
    stats: SearchStats,
    seed: int = 0,
    max_moves: int = 4000,
    initial: Sequence[int] | None = None,
) -> list[int] | None:
    """Greedy placement followed by randomized repair (kick-out moves)."""
    rng = random.Random(seed)
    m = len(pairs)
    layers = _Layers(pairs, k, kind, stats)
    where = [-1] * m
    pool: list[int] = []
    if initial is not None:
        for e, c in enumerate(initial):
            if 0 <= c < k and layers.fits(c, e):
                layers.add(c, e)
                where[e] = c
            else:
                pool.append(e)
    else:
        deg: dict[int, int] = {}
        for u, v in pairs:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        order = sorted(range(m), key=lambda e: (-(deg[pairs[e][0]] + deg[pairs[e][1]]), e))
        for e in order:
            for c in range(k):
                if layers.fits(c, e):
                    layers.add(c, e)
                    where[e] = c
                    break
            else:
                pool.append(e)
    tabu: dict[int, int] = {}
    move = 0
    while pool and move < max_moves:
        if move % 32 == 0:
            deadline.check()
        move += 1
        stats.heuristic_rounds += 1
        e = pool.pop(rng.randrange(len(pool)))
        candidates = [c for c in range(k) if layers.fits(c, e)]
        if candidates:
            c = rng.choice(candidates)
            layers.add(c, e)
            where[e] = c
            continue
        c = rng.randrange(k)
        u, v = pairs[e]
        # evict edges near u and v until e fits
        near = [f for f in layers.members[c] if tabu.get(f, -1) < move and set(pairs[f]) & {u, v}]
        if not near:
            near = [f for f in layers.members[c] if tabu.get(f, -1) < move]
        rng.shuffle(near)
        evicted = []
        for f in near:
            layers.remove(c, f)
            where[f] = -1
            evicted.append(f)
            if layers.fits(c, e):
                break
        if not layers.fits(c, e):
            for f in evicted:
                layers.add(c, f)
                where[f] = c
            pool.append(e)
            continue
        layers.add(c, e)
        where[e] = c
        tabu[e] = move + 3
        # re-place evicted edges elsewhere when possible
        for f in evicted:
            for c2 in rng.sample(range(k), k):
                if layers.fits(c2, f):
                    layers.add(c2, f)
                    where[f] = c2
                    break
            else:
                pool.append(f)
    if pool:
        return None
    return where


def exact_partition(
    pairs: Sequence[tuple[int, int]],
    k: int,
    kind: LayerClass,
    deadline: Deadline,
    stats: SearchStats,
) -> list[int] | None:
    """Backtracking with forward checking; None proves infeasibility."""
    m = len(pairs)
    n_active, _ = _active(pairs)
    cap = max_edges(kind, n_active)
    layers = _Layers(pairs, k, kind, stats)
    where = [-1] * m
    full = (1 << k) - 1
    domains = {e: full for e in range(m)}

    def solve(domains: dict[int, int], used: int) -> bool:
        stats.nodes += 1
        if stats.nodes % 64 == 0:
            deadline.check()
        if not domains:
            return True
        remaining = len(domains)
        room = sum(cap - len(layers.members[c]) for c in range(k))
        if remaining > room:
            return False
        e = min(domains, key=lambda f: (bin(domains[f]).count("1"), f))
        dom = domains[e]
        choices = [c for c in range(k) if dom >> c & 1 and c <= used]
        for c in choices:
            if len(layers.members[c]) >= cap:
                continue
            layers.add(c, e)
            where[e] = c
            nxt = {}
            dead = False
            for f, df in domains.items():
                if f == e:
                    continue
                if df >> c & 1 and not layers.fits(c, f):
                    df &= ~(1 << c)
                    if not df:
                        dead = True
                        break
                nxt[f] = df
            if not dead and solve(nxt, used + 1 if c == used else used):
                return True
            layers.remove(c, e)
            where[e] = -1
        return False

    if m == 0:
        return []
    if solve(domains, 0):
        return where
    return None


def partition_search(
    pairs: Sequence[tuple[int, int]],
    k: int,
    kind: LayerClass,
    deadline: Deadline | None = None,
    seed: int = 0,
    exhaustive: bool = True,
    stats: SearchStats | None = None,
    heuristic_moves: int = 4000,
) -> list[int] | None:
    """Assign each edge a layer in ``range(k)`` or prove that none exists.

    Returns the assignment, or None when the search space is exhausted (only
    possible with ``exhaustive=True``; otherwise None means "not found").
    Raises :class:`SearchTimeout` past the deadline.
    """
    deadline = deadline or Deadline(None)
    stats = stats or SearchStats()
    if k <= 0:
        return [] if not pairs else None
    n_active, m_simple = _active(pairs)
    if counting_infeasible(n_active, m_simple, k, kind):
        stats.method = "counting"
        return None
    if layer_ok(kind, pairs):
        stats.method = "single"
        return [0] * len(pairs)
    if k == 1:
        stats.method = "single"
        return None
    found = heuristic_partition(pairs, k, kind, deadline, stats, seed=seed, max_moves=heuristic_moves)
    if found is not None:
        stats.method = "heuristic"
        return found
    if not exhaustive:
        stats.method = "heuristic"
        return None
    stats.method = "exhaustive"
    return exact_partition(pairs, k, kind, deadline, stats)


def _bfs_split(pairs: Sequence[tuple[int, int]]) -> list[int]:
    """Seed split: BFS-tree edges in one part, the rest in the other."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for e, (u, v) in enumerate(pairs):
        adj.setdefault(u, []).append((v, e))
        adj.setdefault(v, []).append((u, e))
    side = [1] * len(pairs)
    seen: set[int] = set()
    for root in sorted(adj):
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, e in adj[x]:
                if y not in seen:
                    seen.add(y)
                    side[e] = 0
                    queue.append(y)
    return side


def outerplanar_bipartition(
    pairs: Sequence[tuple[int, int]],
    deadline: Deadline | None = None,
    seed: int = 0,
) -> tuple[list[int], list[int]]:
    """Split a planar edge list into two outerplanar parts (edge indices)."""
    from .errors import DecompositionError

    if not layer_ok("planar", pairs):
        raise DecompositionError("outerplanar bipartition needs a planar graph")
    deadline = deadline or Deadline(None)
    if layer_ok("outerplanar", pairs):
        return list(range(len(pairs))), []
    stats = SearchStats()
    where = heuristic_partition(pairs, 2, "outerplanar", deadline, stats, seed=seed, initial=_bfs_split(pairs))
    if where is None:
        where = partition_search(pairs, 2, "outerplanar", deadline, seed=seed + 1, stats=stats)
    if where is None:
        raise DecompositionError("planar graph admitted no outerplanar bipartition (internal error)")
    a = [e for e, c in enumerate(where) if c == 0]
    b = [e for e, c in enumerate(where) if c == 1]
    return a, b
