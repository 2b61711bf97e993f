"""Signed rotation systems: face tracing, surface type, surgery, homology.

A dart is ``(edge_id, end)`` where ``end`` 0 is the ``u`` end of the edge as
listed and 1 the ``v`` end.  The rotation at a vertex is the cyclic order of
the darts sitting at it.  Edge signs encode twisting: an edge with sign -1
reverses the local orientation when a face walk crosses it.

A face walk is a cyclic sequence of states ``(dart, s)``: the walk leaves the
vertex of ``dart`` along its edge while carrying local orientation ``s``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import EmbeddingError

Dart = tuple[int, int]
State = tuple[Dart, int]


def opposite(d: Dart) -> Dart:
    return (d[0], 1 - d[1])


@dataclass(frozen=True)
class Graph:
    """Plain multigraph: ``n`` vertices and an id -> (u, v) edge map."""

    n: int
    edges: Mapping[int, tuple[int, int]]

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, {i: (int(u), int(v)) for i, (u, v) in enumerate(pairs)})

    @property
    def m(self) -> int:
        return len(self.edges)

    def subgraph(self, edge_ids: Iterable[int]) -> "Graph":
        keep = set(edge_ids)
        return Graph(self.n, {e: uv for e, uv in self.edges.items() if e in keep})

    def simple_pairs(self) -> set[tuple[int, int]]:
        """Underlying simple graph: loops dropped, parallel edges merged."""
        out = set()
        for u, v in self.edges.values():
            if u != v:
                out.add((min(u, v), max(u, v)))
        return out

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges.values():
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return adj


@dataclass(frozen=True)
class Face:
    index: int
    steps: tuple[State, ...]

    @property
    def size(self) -> int:
        return len(self.steps)

    @property
    def darts(self) -> tuple[Dart, ...]:
        return tuple(d for d, _ in self.steps)


@dataclass(frozen=True)
class Surface:
    orientable: bool
    genus: int  # orientable genus g, or crosscap number k
    chi: int
    components: int = 1

    @property
    def euler_genus(self) -> int:
        return 2 * self.genus if self.orientable else self.genus

    def label(self) -> str:
        if self.orientable:
            return "sphere" if self.genus == 0 else f"S_{self.genus}"
        return f"N_{self.genus}"


@dataclass(frozen=True, eq=False)
class Embedding:
    n: int
    edges: Mapping[int, tuple[int, int]]
    rotation: tuple[tuple[Dart, ...], ...]
    signs: Mapping[int, int]
    helpers: frozenset[int] = frozenset()
    allow_multi: bool = False
    name: str = ""

    @classmethod
    def build(
        cls,
        n: int,
        edges: Mapping[int, tuple[int, int]] | Sequence[tuple[int, int]],
        rotation: Sequence[Sequence[Dart]],
        signs: Mapping[int, int] | None = None,
        helpers: Iterable[int] = (),
        allow_multi: bool = False,
        name: str = "",
    ) -> "Embedding":
        if not isinstance(edges, Mapping):
            edges = {i: tuple(uv) for i, uv in enumerate(edges)}
        edges = {int(e): (int(u), int(v)) for e, (u, v) in sorted(edges.items())}
        signs = {e: int((signs or {}).get(e, 1)) for e in edges}
        rot = tuple(tuple((int(e), int(k)) for e, k in r) for r in rotation)
        return cls(n, edges, rot, signs, frozenset(helpers), allow_multi, name)

    def replace(self, **changes) -> "Embedding":
        data = dict(
            n=self.n,
            edges=self.edges,
            rotation=self.rotation,
            signs=self.signs,
            helpers=self.helpers,
            allow_multi=self.allow_multi,
            name=self.name,
        )
        data.update(changes)
        data["helpers"] = frozenset(e for e in data["helpers"] if e in data["edges"])
        return Embedding(**data)

    # -- basic dart bookkeeping ------------------------------------------------

    @property
    def graph(self) -> Graph:
        return Graph(self.n, self.edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def original_edges(self) -> set[int]:
        return set(self.edges) - set(self.helpers)

    def vertex_of(self, d: Dart) -> int:
        return self.edges[d[0]][d[1]]

    def other_end(self, d: Dart) -> int:
        return self.edges[d[0]][1 - d[1]]

    @cached_property
    def position(self) -> dict[Dart, tuple[int, int]]:
        pos = {}
        for v, rot in enumerate(self.rotation):
            for i, d in enumerate(rot):
                pos[d] = (v, i)
        return pos

    def succ(self, d: Dart) -> Dart:
        v, i = self.position[d]
        rot = self.rotation[v]
        return rot[(i + 1) % len(rot)]

    def pred(self, d: Dart) -> Dart:
        v, i = self.position[d]
        rot = self.rotation[v]
        return rot[(i - 1) % len(rot)]

    def step(self, state: State) -> State:
        """Advance a face walk by one edge."""
        d, s = state
        s2 = s * self.signs[d[0]]
        a = opposite(d)
        return (self.succ(a) if s2 == 1 else self.pred(a), s2)

    def mirror(self, state: State) -> State:
        """The same edge traversal seen from the reverse walk of the face."""
        d, s = state
        return (opposite(d), -s * self.signs[d[0]])

    def corner_of(self, state: State) -> tuple[int, Dart]:
        """Corner ``(vertex, c)`` at which ``state`` leaves: the gap right after ``c``."""
        d, s = state
        return (self.vertex_of(d), self.pred(d) if s == 1 else d)

    # -- derived structure -----------------------------------------------------

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        return tuple(trace_faces(self))

    @cached_property
    def face_of_state(self) -> dict[State, tuple[int, int]]:
        """Map every state (both walk directions) to ``(face index, position)``.

        Mirror states map to the position of their own-direction counterpart
        with a negative index offset; only the sign of the orbit matters to
        callers, so mirrors get ``(face, -1 - position)``.
        """
        out = {}
        for f in self.faces:
            for i, st in enumerate(f.steps):
                out[st] = (f.index, i)
            for i, st in enumerate(f.steps):
                out.setdefault(self.mirror(st), (f.index, -1 - i))
        return out

    def face_key(self, face: Face) -> frozenset[State]:
        states = set(face.steps)
        states.update(self.mirror(st) for st in face.steps)
        return frozenset(states)

    @cached_property
    def isolated_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if not self.rotation[v])

    @cached_property
    def components(self) -> list[list[int]]:
        return connected_components(self.n, self.edges.values())

    @cached_property
    def chi(self) -> int:
        return self.n - self.m + len(self.faces) + len(self.isolated_vertices)

    @cached_property
    def vertex_flips(self) -> dict[int, int] | None:
        """Vertex flips making every sign +1, or None when nonorientable."""
        flip = [0] * self.n
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for e, (u, v) in self.edges.items():
            if u == v:
                if self.signs[e] == -1:
                    return None
                continue
            adj[u].append((v, self.signs[e]))
            adj[v].append((u, self.signs[e]))
        for root in range(self.n):
            if flip[root]:
                continue
            flip[root] = 1
            queue = deque([root])
            while queue:
                x = queue.popleft()
                for y, s in adj[x]:
                    want = flip[x] * s
                    if not flip[y]:
                        flip[y] = want
                        queue.append(y)
                    elif flip[y] != want:
                        return None
        return {v: flip[v] for v in range(self.n)}

    @cached_property
    def surface(self) -> Surface:
        return surface_of(self)

    @property
    def orientable(self) -> bool:
        return self.surface.orientable

    @property
    def genus(self) -> int:
        return self.surface.genus

    def __repr__(self) -> str:
        return f"Embedding(name={self.name!r}, n={self.n}, m={self.m}, surface={self.surface.label()})"


def connected_components(n: int, pairs: Iterable[tuple[int, int]]) -> list[list[int]]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


# ---------------------------------------------------------------------------
# validation and tracing
# ---------------------------------------------------------------------------


def validate_embedding(emb: Embedding) -> list[str]:
    """Return every violated invariant; an empty list means well-formed."""
    problems: list[str] = []
    if emb.n <= 0:
        problems.append("empty graph")
    if len(emb.rotation) != emb.n:
        problems.append(f"rotation lists {len(emb.rotation)} vertices, expected {emb.n}")
        return problems
    seen_pairs: dict[tuple[int, int], int] = {}
    for e, (u, v) in emb.edges.items():
        if not (0 <= u < emb.n and 0 <= v < emb.n):
            problems.append(f"edge {e} endpoint out of range")
            continue
        if u == v and not emb.allow_multi:
            problems.append(f"edge {e} is a loop")
        key = (min(u, v), max(u, v))
        if key in seen_pairs and not emb.allow_multi:
            problems.append(f"edge {e} duplicates edge {seen_pairs[key]}")
        seen_pairs.setdefault(key, e)
        if emb.signs.get(e) not in (1, -1):
            problems.append(f"edge {e} has sign {emb.signs.get(e)}")
    if problems:
        return problems
    placed: dict[Dart, int] = {}
    for v, rot in enumerate(emb.rotation):
        for d in rot:
            e, k = d
            if e not in emb.edges or k not in (0, 1):
                problems.append(f"rotation at {v} names unknown dart {e}.{k}")
                continue
            if d in placed:
                problems.append(f"dart {e}.{k} appears twice")
                continue
            placed[d] = v
            if emb.edges[e][k] != v:
                problems.append(f"dart {e}.{k} listed at {v} but belongs to {emb.edges[e][k]}")
    for e in emb.edges:
        for k in (0, 1):
            if (e, k) not in placed:
                problems.append(f"dart absent: {e}.{k}")
    if problems:
        return problems
    # multi-edges and loops must be noncontractible
    if emb.allow_multi:
        problems.extend(_check_multi_essential(emb))
    return problems


def _check_multi_essential(emb: Embedding) -> list[str]:
    groups: dict[tuple[int, int], list[int]] = {}
    loops = []
    for e, (u, v) in emb.edges.items():
        if u == v:
            loops.append(e)
        else:
            groups.setdefault((min(u, v), max(u, v)), []).append(e)
    pending = [g for g in groups.values() if len(g) > 1]
    if not pending and not loops:
        return []
    if len(emb.components) - len(emb.isolated_vertices) > 1:
        return ["multigraph embeddings must be connected"]
    table = homology_signatures(emb)
    problems = []
    for e in loops:
        if not any(table.edge_vector(e)):
            problems.append(f"loop {e} is contractible")
    for grp in pending:
        for a in grp:
            for b in grp:
                if a < b:
                    ua = emb.edges[a][0]
                    db = 1 if emb.edges[b][0] == ua else -1
                    vec = table.evaluate([(a, 1), (b, -db)])
                    if not any(vec):
                        problems.append(f"parallel edges {a} and {b} bound a contractible cycle")
    return problems


def check_embedding(emb: Embedding) -> Embedding:
    problems = validate_embedding(emb)
    if problems:
        raise EmbeddingError("; ".join(problems))
    return emb


def trace_faces(emb: Embedding) -> list[Face]:
    """Trace the face walks of a signed rotation system.

    Each face is reported once, as the orbit reached from the lowest unused
    ``(dart, +1)`` state; its mirror orbit is marked used alongside.
    """
    used: set[State] = set()
    faces: list[Face] = []
    for e in sorted(emb.edges):
        for k in (0, 1):
            for s in (1, -1):
                start = ((e, k), s)
                if start in used:
                    continue
                steps = []
                st = start
                while True:
                    if st in used:
                        raise EmbeddingError(f"face walk from {start} re-entered a used state")
                    used.add(st)
                    steps.append(st)
                    st = emb.step(st)
                    if st == start:
                        break
                for x in steps:
                    m = emb.mirror(x)
                    if m in used and m not in steps:
                        raise EmbeddingError("mirror orbit overlaps another face")
                    used.add(m)
                faces.append(Face(len(faces), tuple(steps)))
    return faces


def surface_of(emb: Embedding) -> Surface:
    comps = len(emb.components)
    chi = emb.chi
    eg = 2 * comps - chi
    if emb.vertex_flips is not None:
        if eg % 2:
            raise EmbeddingError(f"orientable embedding with odd Euler genus {eg}")
        return Surface(True, eg // 2, chi, comps)
    return Surface(False, eg, chi, comps)


def normalize_orientation(emb: Embedding) -> Embedding:
    """Flip vertices so every sign is +1 (orientable embeddings only)."""
    flips = emb.vertex_flips
    if flips is None:
        raise EmbeddingError("embedding is nonorientable")
    if all(s == 1 for s in emb.signs.values()):
        return emb
    rotation = tuple(tuple(reversed(r)) if flips[v] == -1 else r for v, r in enumerate(emb.rotation))
    return emb.replace(rotation=rotation, signs={e: 1 for e in emb.edges})


# ---------------------------------------------------------------------------
# surgery
# ---------------------------------------------------------------------------


def delete_edges(emb: Embedding, edge_ids: Iterable[int]) -> Embedding:
    drop = set(edge_ids)
    unknown = drop - set(emb.edges)
    if unknown:
        raise EmbeddingError(f"unknown edge id(s): {sorted(unknown)}")
    if not drop:
        return emb
    rotation = tuple(tuple(d for d in r if d[0] not in drop) for r in emb.rotation)
    edges = {e: uv for e, uv in emb.edges.items() if e not in drop}
    signs = {e: s for e, s in emb.signs.items() if e not in drop}
    return emb.replace(edges=edges, rotation=rotation, signs=signs)


def restrict(emb: Embedding, edge_ids: Iterable[int]) -> Embedding:
    """Induced embedding of a spanning subgraph (all vertices kept)."""
    keep = set(edge_ids)
    return delete_edges(emb, [e for e in emb.edges if e not in keep])


Corner = tuple[int, Dart]


def corner_state(emb: Embedding, corner: Corner) -> tuple[int, int, int]:
    """Locate a corner in the traced faces: ``(face index, position, s)``."""
    v, c = corner
    if emb.vertex_of(c) != v:
        raise EmbeddingError(f"dart {c} is not at vertex {v}")
    for st in ((emb.succ(c), 1), (c, -1)):
        hit = emb.face_of_state.get(st)
        if hit is not None and hit[1] >= 0:
            return hit[0], hit[1], st[1]
    raise EmbeddingError(f"corner {corner} not found on any face")


def add_edge(
    emb: Embedding,
    corner_x: Corner,
    corner_y: Corner,
    helper: bool = True,
    edge_id: int | None = None,
) -> tuple[Embedding, int]:
    """Insert an edge between two corners of one face, splitting the face."""
    fx, _, sx = corner_state(emb, corner_x)
    fy, _, sy = corner_state(emb, corner_y)
    if fx != fy:
        raise EmbeddingError("corners are not on a common face")
    x, cx = corner_x
    y, cy = corner_y
    if x == y and not emb.allow_multi:
        raise EmbeddingError("edge would be a loop")
    if not emb.allow_multi:
        for u, v in emb.edges.values():
            if {u, v} == {x, y}:
                raise EmbeddingError(f"edge {x}-{y} already exists")
    if x == y and cx == cy:
        raise EmbeddingError("loop needs two distinct corners")
    new = edge_id if edge_id is not None else (max(emb.edges, default=-1) + 1)
    if new in emb.edges:
        raise EmbeddingError(f"edge id {new} in use")
    rotation = [list(r) for r in emb.rotation]
    for vert, c, d in ((x, cx, (new, 0)), (y, cy, (new, 1))):
        r = rotation[vert]
        r.insert(r.index(c) + 1, d)
    edges = dict(emb.edges)
    edges[new] = (x, y)
    signs = dict(emb.signs)
    signs[new] = sx * sy
    helpers = set(emb.helpers)
    if helper:
        helpers.add(new)
    out = emb.replace(
        edges=dict(sorted(edges.items())),
        rotation=tuple(tuple(r) for r in rotation),
        signs=signs,
        helpers=frozenset(helpers),
    )
    return out, new


def add_edge_in_face(
    emb: Embedding, face: Face | int, i: int, j: int, helper: bool = True
) -> tuple[Embedding, int]:
    """Add an edge joining corners ``i`` and ``j`` (positions on a face walk)."""
    f = emb.faces[face] if isinstance(face, int) else face
    if not (0 <= i < f.size and 0 <= j < f.size) or i == j:
        raise EmbeddingError("corners not on face")
    return add_edge(emb, emb.corner_of(f.steps[i]), emb.corner_of(f.steps[j]), helper=helper)


def reembed_edge(emb: Embedding, edge: int, corner_x: Corner | None, corner_y: Corner | None) -> Embedding:
    """Move ``edge`` to the given corners (interpreted after its removal).

    ``corner_x`` must sit at the edge's first endpoint.  Passing ``None`` for
    both keeps the embedding unchanged.
    """
    if edge not in emb.edges:
        raise EmbeddingError(f"unknown edge id {edge}")
    if corner_x is None and corner_y is None:
        return emb
    u, v = emb.edges[edge]
    if corner_x[0] != u or corner_y[0] != v:
        raise EmbeddingError("corners must sit at the edge endpoints")
    if corner_x[1][0] == edge or corner_y[1][0] == edge:
        raise EmbeddingError("corner refers to the edge being moved")
    removed = delete_edges(emb, [edge])
    was_helper = edge in emb.helpers
    out, _ = add_edge(removed, corner_x, corner_y, helper=was_helper, edge_id=edge)
    return out


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HomologyTable:
    """Per-edge homology coordinates from a tree-cotree decomposition.

    ``vectors[e]`` is the signature of traversing edge ``e`` from its first to
    its second endpoint.  Orientable surfaces use integer coordinates,
    nonorientable ones coordinates mod 2.
    """

    rank: int
    modulus: int  # 0 for integer coefficients, 2 for mod-2
    vectors: Mapping[int, tuple[int, ...]]
    tree: frozenset[int] = field(default_factory=frozenset)
    cotree: frozenset[int] = field(default_factory=frozenset)
    leftover: tuple[int, ...] = ()

    def edge_vector(self, e: int) -> tuple[int, ...]:
        return self.vectors[e]

    def evaluate(self, walk: Iterable[tuple[int, int]]) -> tuple[int, ...]:
        """Signature of a closed walk given as ``(edge, +1 | -1)`` pairs."""
        acc = [0] * self.rank
        for e, direction in walk:
            vec = self.vectors[e]
            for i in range(self.rank):
                acc[i] += direction * vec[i]
        if self.modulus:
            acc = [a % self.modulus for a in acc]
        return tuple(acc)

    def evaluate_darts(self, darts: Iterable[Dart]) -> tuple[int, ...]:
        return self.evaluate((d[0], 1 if d[1] == 0 else -1) for d in darts)

    def canonical(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Representative of ``vec`` up to sign."""
        vec = tuple(vec)
        if self.modulus:
            return vec
        neg = tuple(-x for x in vec)
        for a in vec:
            if a:
                return vec if a > 0 else neg
        return vec


def homology_signatures(emb: Embedding) -> HomologyTable:
    live = [c for c in emb.components if len(c) > 1 or emb.rotation[c[0]]]
    if len(live) > 1:
        raise EmbeddingError("homology signatures need a connected graph")
    orientable = emb.vertex_flips is not None
    work = normalize_orientation(emb) if orientable else emb
    modulus = 0 if orientable else 2

    root = live[0][0] if live else 0
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

    faces = work.faces
    occ: dict[int, list[tuple[int, int]]] = {e: [] for e in emb.edges}
    for f in faces:
        for d, _ in f.steps:
            occ[d[0]].append((f.index, 1 if d[1] == 0 else -1))
    cotree: set[int] = set()
    parent_edge: dict[int, int] = {}
    order = []
    if faces:
        fseen = {0}
        fq = deque([0])
        face_edges: list[list[int]] = [[] for _ in faces]
        for e in sorted(emb.edges):
            if e in tree:
                continue
            (fa, _), (fb, _) = occ[e]
            if fa != fb:
                face_edges[fa].append(e)
                face_edges[fb].append(e)
        while fq:
            f = fq.popleft()
            order.append(f)
            for e in face_edges[f]:
                (fa, _), (fb, _) = occ[e]
                g = fb if fa == f else fa
                if g not in fseen:
                    fseen.add(g)
                    cotree.add(e)
                    parent_edge[g] = e
                    fq.append(g)
    leftover = tuple(sorted(set(emb.edges) - tree - cotree))
    rank = len(leftover)
    values: dict[int, list[int]] = {e: [0] * rank for e in emb.edges}
    for i, x in enumerate(leftover):
        values[x][i] = 1
    for f in reversed(order):
        if f not in parent_edge:
            continue
        c = parent_edge[f]
        total = [0] * rank
        coef_c = 0
        for d, _ in faces[f].steps:
            sgn = 1 if d[1] == 0 else -1
            if d[0] == c:
                coef_c += sgn
                continue
            vec = values[d[0]]
            for i in range(rank):
                total[i] += sgn * vec[i]
        if modulus:
            values[c] = [t % 2 for t in total]
        else:
            if coef_c not in (1, -1):
                raise EmbeddingError("cotree edge traversed twice by one face")
            values[c] = [-t * coef_c for t in total]
    vectors = {e: tuple(v) for e, v in values.items()}
    return HomologyTable(rank, modulus, vectors, frozenset(tree), frozenset(cotree), leftover)


def tree_path(n: int, edges: Mapping[int, tuple[int, int]], allowed: Iterable[int], a: int, b: int) -> list[tuple[int, int]]:
    """Walk ``a -> b`` using ``allowed`` edges, as ``(edge, direction)`` pairs."""
    incident: list[list[int]] = [[] for _ in range(n)]
    for e in sorted(allowed):
        u, v = edges[e]
        if u != v:
            incident[u].append(e)
            incident[v].append(e)
    prev: dict[int, tuple[int, int] | None] = {a: None}
    queue = deque([a])
    while queue and b not in prev:
        x = queue.popleft()
        for e in incident[x]:
            u, v = edges[e]
            y = v if u == x else u
            if y not in prev:
                prev[y] = (e, x)
                queue.append(y)
    if b not in prev:
        raise EmbeddingError(f"no path from {a} to {b}")
    walk = []
    y = b
    while prev[y] is not None:
        e, x = prev[y]
        walk.append((e, 1 if edges[e][0] == x else -1))
        y = x
    walk.reverse()
    return walk
