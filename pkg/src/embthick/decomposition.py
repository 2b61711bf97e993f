"""Layer decompositions of embedded graphs.

Four pipelines are provided:

* ``genus-peel``: repeatedly cut a spanning disk together with one essential
  star; every round strictly lowers the genus of what is left.
* ``degeneracy`` (thickness and outerthickness): the disk edges form one
  planar layer (or two outerplanar ones), the essential edges are peeled at
  a genus-dependent degree threshold, the core is split using complete-graph
  patterns, and the peeled edges are spread over forests merged into the
  core layers.
* ``torus``: outerthickness three on the torus from the homotopy classes of
  essential edges.
* ``planar``: sphere inputs (one planar layer or an outerplanar bipartition).

Inputs are split into blocks first; block layers are merged by index.  Every
emitted layer is certified by the planarity module, helper edges never reach
the output, and a layer that fails certification aborts the pipeline.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Literal, Mapping, Sequence

import networkx as nx

from .disk import SpanningDiskResult, build_spanning_disk, essential_star
from .embedding import Embedding, Graph, restrict
from .errors import DecompositionError, DiskConstructionError
from .patterns import complete_graph_decomposition, complete_value
from .planarity import LayerClass, certify, layer_ok
from .search import Deadline, outerplanar_bipartition, partition_search

Goal = Literal["thickness", "outerthickness"]
GOAL_CLASS: dict[str, LayerClass] = {"thickness": "planar", "outerthickness": "outerplanar"}
METHODS = ("genus-peel", "degeneracy", "torus", "planar")


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundEntry:
    name: str
    goal: Goal
    raw: float
    effective: int
    method: str | None = None
    note: str = ""


@dataclass(frozen=True)
class BoundsReport:
    orientable: bool
    genus: int
    entries: tuple[BoundEntry, ...]

    @property
    def surface(self) -> str:
        if self.orientable:
            return "sphere" if self.genus == 0 else f"S_{self.genus}"
        return f"N_{self.genus}"

    def best(self, goal: Goal) -> int:
        return min(e.effective for e in self.entries if e.goal == goal)

    def for_method(self, method: str, goal: Goal) -> BoundEntry:
        for e in self.entries:
            if e.method == method and e.goal == goal:
                return e
        raise DecompositionError(f"method {method!r} has no {goal} bound on {self.surface}")


def _square_root(x: float) -> int | None:
    """``h`` when ``x`` equals ``h*h`` for an integer ``h >= 0``."""
    if x < 0 or x != int(x):
        return None
    h = math.isqrt(int(x))
    return h if h * h == int(x) else None


def _entry(name: str, goal: Goal, raw: float, method: str | None = None, note: str = "") -> BoundEntry:
    return BoundEntry(name, goal, raw, int(math.floor(raw + 1e-9)), method, note)


def _sqrt_bound(base: float, square_base: float, x: float) -> tuple[float, str]:
    h = _square_root(x)
    if h is not None:
        return square_base + h, f"square case: {x:g} = {h}^2"
    return base + math.sqrt(x), f"{x:g} is not a perfect square"


def bounds_for_surface(orientable: bool, genus: int) -> BoundsReport:
    out: list[BoundEntry] = []
    if genus == 0:
        out.append(_entry("planar", "thickness", 1, "planar"))
        out.append(_entry("planar bipartition", "outerthickness", 2, "planar"))
        out.append(_entry("genus peel", "thickness", 1, "genus-peel"))
        out.append(_entry("genus peel bipartitioned", "outerthickness", 2, "genus-peel"))
        return BoundsReport(orientable, genus, tuple(out))
    if orientable:
        g = genus
        out.append(_entry("genus peel", "thickness", g + 1, "genus-peel"))
        if g in (2, 3):
            out.append(_entry("small-genus thickness", "thickness", g + 1, note=f"S_{g}"))
        out.append(_entry("genus peel bipartitioned", "outerthickness", 2 * g + 2, "genus-peel"))
        raw, note = _sqrt_bound(3, 2, 2 * g - 1)
        out.append(_entry("degeneracy thickness", "thickness", raw, "degeneracy", note))
        raw, note = _sqrt_bound(4, 3, 3 * g - 1.5)
        out.append(_entry("degeneracy outerthickness", "outerthickness", raw, "degeneracy", note))
        if g == 1:
            out.append(_entry("torus thickness", "thickness", 2, note="toroidal graphs"))
            out.append(_entry("torus outerthickness", "outerthickness", 3, "torus"))
    else:
        k = genus
        raw, note = _sqrt_bound(3, 2, k - 1)
        out.append(_entry("degeneracy thickness", "thickness", raw, "degeneracy", note))
        raw, note = _sqrt_bound(4, 3, 1.5 * (k - 1))
        out.append(_entry("degeneracy outerthickness", "outerthickness", raw, "degeneracy", note))
    return BoundsReport(orientable, genus, tuple(out))


def bounds_report(emb: Embedding) -> BoundsReport:
    s = emb.surface
    return bounds_for_surface(s.orientable, s.genus)


def degeneracy_threshold(orientable: bool, genus: int, goal: Goal) -> int:
    """Peel threshold: layer count is at most this plus one (thickness) or two."""
    if genus == 0:
        raise DecompositionError("degeneracy pipelines need a surface of positive genus")
    if goal == "thickness":
        x = 2 * genus - 1 if orientable else genus - 1
    else:
        x = 3 * genus - 1.5 if orientable else 1.5 * (genus - 1)
    h = _square_root(x)
    return 1 + h if h is not None else 2 + math.isqrt(int(math.floor(x)))


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------


@dataclass
class Layer:
    edges: tuple[int, ...]
    cls: LayerClass
    tag: str = ""


@dataclass
class Decomposition:
    goal: Goal
    method: str
    graph: Graph
    layers: list[Layer]
    bound: int
    surface: str
    helpers: list[dict] = field(default_factory=list)
    verification: dict | None = None
    name: str = ""

    @property
    def count(self) -> int:
        return sum(1 for layer in self.layers if layer.edges)

    def layer_pairs(self, i: int) -> list[tuple[int, int]]:
        return [self.graph.edges[e] for e in self.layers[i].edges]


# ---------------------------------------------------------------------------
# degeneracy peel and forests
# ---------------------------------------------------------------------------


@dataclass
class PeelRecord:
    d: int
    removed: list[tuple[int, tuple[int, ...]]]
    core_vertices: tuple[int, ...]
    core_edges: tuple[int, ...]


def degeneracy_peel(g: Graph, d: int) -> PeelRecord:
    """Remove minimum-degree vertices (lowest id first) while degree <= d."""
    if d < 1:
        raise ValueError("threshold must be at least 1")
    alive = set(range(g.n))
    incident: dict[int, set[int]] = {v: set() for v in range(g.n)}
    for e, (u, v) in g.edges.items():
        if u == v:
            raise ValueError("degeneracy peel expects a loopless graph")
        incident[u].add(e)
        incident[v].add(e)
    removed: list[tuple[int, tuple[int, ...]]] = []
    while alive:
        v = min(alive, key=lambda x: (len(incident[x]), x))
        if len(incident[v]) > d:
            break
        edges = tuple(sorted(incident[v]))
        removed.append((v, edges))
        alive.discard(v)
        for e in edges:
            a, b = g.edges[e]
            incident[b if a == v else a].discard(e)
        incident[v].clear()
    core_edges = tuple(sorted(e for e, (u, v) in g.edges.items() if u in alive and v in alive))
    return PeelRecord(d, removed, tuple(sorted(alive)), core_edges)


def forest_partition(rec: PeelRecord) -> list[list[int]]:
    """Replay removals backwards; the i-th edge of each vertex joins forest i."""
    forests: list[list[int]] = [[] for _ in range(rec.d)]
    for v, edges in reversed(rec.removed):
        if len(edges) > rec.d:
            raise ValueError(f"vertex {v} was removed with {len(edges)} > {rec.d} edges")
        for i, e in enumerate(edges):
            forests[i].append(e)
    return forests


# ---------------------------------------------------------------------------
# helpers shared by the pipelines
# ---------------------------------------------------------------------------


def _relabel(emb: Embedding, edge_ids: Iterable[int]) -> tuple[Embedding, list[int]]:
    """Embedding induced on ``edge_ids`` with its touched vertices renumbered."""
    keep = set(edge_ids)
    verts = sorted({x for e in keep for x in emb.edges[e]})
    index = {v: i for i, v in enumerate(verts)}
    edges = {e: (index[emb.edges[e][0]], index[emb.edges[e][1]]) for e in sorted(keep)}
    rotation = [tuple(d for d in emb.rotation[v] if d[0] in keep) for v in verts]
    sub = Embedding(
        len(verts),
        edges,
        tuple(rotation),
        {e: emb.signs[e] for e in edges},
        frozenset(h for h in emb.helpers if h in keep),
        emb.allow_multi,
        emb.name,
    )
    return sub, verts


def _is_multi(emb: Embedding) -> bool:
    seen = set()
    for u, v in emb.edges.values():
        key = (min(u, v), max(u, v))
        if u == v or key in seen:
            return True
        seen.add(key)
    return False


def _simplify(emb: Embedding) -> tuple[Embedding, dict[int, int | None]]:
    """Drop loops and parallel copies; map each dropped edge to its twin (None for loops)."""
    first: dict[tuple[int, int], int] = {}
    extra: dict[int, int | None] = {}
    for e, (u, v) in sorted(emb.edges.items()):
        if u == v:
            extra[e] = None
            continue
        key = (min(u, v), max(u, v))
        if key in first:
            extra[e] = first[key]
        else:
            first[key] = e
    if not extra:
        return emb, extra
    return restrict(emb, set(first.values())).replace(allow_multi=False), extra


def _blocks(emb: Embedding) -> list[list[int]]:
    h = nx.Graph()
    ident: dict[tuple[int, int], int] = {}
    for e, (u, v) in emb.edges.items():
        ident[(min(u, v), max(u, v))] = e
        h.add_edge(u, v)
    out = []
    for comp in nx.biconnected_component_edges(h):
        out.append(sorted(ident[(min(u, v), max(u, v))] for u, v in comp))
    out.sort()
    return out


def _merge(target: list[set[int]], layers: Sequence[Iterable[int]]) -> None:
    for i, layer in enumerate(layers):
        while len(target) <= i:
            target.append(set())
        target[i].update(layer)


def _certified_layers(emb: Embedding, layers: Sequence[Iterable[int]], cls: LayerClass, tags: Sequence[str]) -> list[Layer]:
    out = []
    for i, layer in enumerate(layers):
        ids = tuple(sorted(e for e in layer if e not in emb.helpers))
        if not ids:
            continue
        cert = certify(cls, emb.graph.subgraph(ids))
        if not cert:
            raise DecompositionError(f"layer {i} failed {cls} certification: {cert.note}", {"layer": list(ids)})
        out.append(Layer(ids, cls, tags[i] if i < len(tags) else ""))
    return out


def _bipartition_ids(emb: Embedding, ids: Sequence[int], deadline: Deadline | None) -> tuple[set[int], set[int]]:
    ids = sorted(ids)
    a, b = outerplanar_bipartition([emb.edges[e] for e in ids], deadline)
    return {ids[i] for i in a}, {ids[i] for i in b}


def _planar_block(emb: Embedding, goal: Goal, deadline: Deadline | None) -> list[set[int]]:
    ids = sorted(emb.edges)
    if goal == "thickness":
        return [set(ids)]
    a, b = _bipartition_ids(emb, ids, deadline)
    return [a, b]


def _run_blocks(
    emb: Embedding,
    goal: Goal,
    per_block: Callable[[Embedding, Embedding], tuple[list[set[int]], list[dict]]],
    deadline: Deadline | None,
    split_blocks: bool = True,
) -> tuple[list[set[int]], list[dict]]:
    """Apply ``per_block`` to every block; planar blocks are handled directly."""
    layers: list[set[int]] = []
    ledger: list[dict] = []
    groups = _blocks(emb) if split_blocks else [sorted(emb.edges)]
    for ids in groups:
        sub, _ = _relabel(emb, ids)
        if sub.genus == 0 and sub.orientable:
            part = _planar_block(sub, goal, deadline)
            _merge(layers, part)
            continue
        part, notes = per_block(sub, emb)
        # helper ids are local to the block and may collide with other blocks
        _merge(layers, [set(layer) & set(ids) for layer in part])
        ledger.extend(notes)
    return layers, ledger


def _finish(
    emb: Embedding,
    goal: Goal,
    method: str,
    layers: list[set[int]],
    ledger: list[dict],
    extra: Mapping[int, int | None],
    tags: Sequence[str] = (),
) -> Decomposition:
    for e, twin in sorted(extra.items()):
        if twin is None:
            if not layers:
                layers.append(set())
            layers[0].add(e)
            continue
        for layer in layers:
            if twin in layer:
                layer.add(e)
                break
    cls = GOAL_CLASS[goal]
    out = _certified_layers(emb, layers, cls, tags)
    covered = sorted(e for layer in out for e in layer.edges)
    if covered != sorted(emb.original_edges()):
        raise DecompositionError("layers do not partition the edge set")
    report = bounds_report(emb)
    bound = report.for_method(method, goal).effective
    return Decomposition(goal, method, emb.graph.subgraph(emb.original_edges()), out, bound, report.surface, ledger, name=emb.name)


def _disk(emb: Embedding, ledger: list[dict]) -> SpanningDiskResult:
    try:
        res = build_spanning_disk(emb)
    except DiskConstructionError as err:
        raise DecompositionError(f"spanning disk failed: {err}", {"vertex": err.vertex}) from err
    if res.modified:
        ledger.append(
            {
                "step": "spanning disk",
                "added": list(res.added),
                "reembedded": list(res.reembedded),
                "root": res.root,
            }
        )
    return res


# ---------------------------------------------------------------------------
# genus peel
# ---------------------------------------------------------------------------


def _genus_peel(emb: Embedding, ledger: list[dict], depth: int = 0) -> list[set[int]]:
    if not emb.edges:
        return []
    genus = emb.genus
    if genus == 0:
        return [set(emb.edges)]
    res = _disk(emb, ledger)
    work = res.embedding
    ess = res.essential
    if not ess:
        return [set(emb.edges) & set(work.edges)]
    v = min(x for e in ess for x in work.edges[e])
    first = essential_star(res, v)[0]
    a, b = work.edges[first]
    u = b if a == v else a
    star = set(essential_star(res, u))
    layer = (set(res.disk_edges) - set(work.helpers)) | star
    rest = ess - star
    ledger.append({"step": "genus peel", "round": depth, "vertex": v, "star_center": u, "star": sorted(star)})
    layers = [layer]
    if not rest:
        return layers
    sub = restrict(work, rest)
    tails: list[set[int]] = []
    for comp in sub.components:
        comp_edges = [e for e in rest if work.edges[e][0] in comp]
        if not comp_edges:
            continue
        piece, _ = _relabel(work, comp_edges)
        if piece.genus >= genus:
            raise DecompositionError(
                f"genus did not decrease ({piece.genus} >= {genus}) after removing the star at {u}",
                {"round": depth, "vertex": v, "star_center": u},
            )
        _merge(tails, _genus_peel(piece, ledger, depth + 1))
    return layers + tails


def thickness_genus_peel(emb: Embedding, deadline: Deadline | None = None) -> Decomposition:
    """Planar layers, at most genus + 1 of them, for an orientable embedding."""
    return _genus_peel_pipeline(emb, "thickness", deadline)


def outerthickness_genus_peel(emb: Embedding, deadline: Deadline | None = None) -> Decomposition:
    """Genus-peel layers each split into two outerplanar halves (2 genus + 2)."""
    return _genus_peel_pipeline(emb, "outerthickness", deadline)


def _genus_peel_pipeline(emb: Embedding, goal: Goal, deadline: Deadline | None) -> Decomposition:
    if not emb.orientable:
        raise DecompositionError("genus peel needs an orientable embedding")
    ledger: list[dict] = []

    def block(sub: Embedding, _parent: Embedding) -> tuple[list[set[int]], list[dict]]:
        notes: list[dict] = []
        layers = _genus_peel(sub, notes)
        if goal == "outerthickness":
            split: list[set[int]] = []
            for layer in layers:
                a, b = _bipartition_ids(sub, sorted(layer), deadline)
                split += [a, b]
            layers = split
        return layers, notes

    multi = _is_multi(emb)
    if multi:
        # loops and parallel edges are handled natively by the peel
        layers, notes = block(emb, emb) if emb.genus else (_planar_block(emb, goal, deadline), [])
    else:
        layers, notes = _run_blocks(emb, goal, block, deadline)
    ledger += notes
    return _finish(emb, goal, "genus-peel", layers, ledger, {})


# ---------------------------------------------------------------------------
# degeneracy pipelines
# ---------------------------------------------------------------------------


def split_core(
    n: int,
    edges: Mapping[int, tuple[int, int]],
    core_vertices: Sequence[int],
    core_edges: Sequence[int],
    k: int,
    cls: LayerClass,
    deadline: Deadline | None = None,
) -> tuple[list[set[int]], str]:
    """Split the core into at most ``k`` layers of class ``cls``."""
    layers: list[set[int]] = [set() for _ in range(k)]
    if not core_edges:
        return layers, "empty core"
    size = len(core_vertices)
    if complete_value(size, cls) <= k:
        pattern = complete_graph_decomposition(size, cls, deadline)
        slot = {}
        for i, layer in enumerate(pattern):
            for a, b in layer:
                slot[(core_vertices[a], core_vertices[b])] = i
                slot[(core_vertices[b], core_vertices[a])] = i
        for e in core_edges:
            layers[slot[edges[e]]].add(e)
        return layers, f"K{size} pattern"
    pairs = [edges[e] for e in core_edges]
    where = partition_search(pairs, k, cls, deadline)
    if where is None:
        raise DecompositionError(f"core on {size} vertices has no {k}-layer {cls} split")
    for e, c in zip(core_edges, where):
        layers[c].add(e)
    return layers, "search"


def _degeneracy_block(
    sub: Embedding, parent: Embedding, goal: Goal, deadline: Deadline | None
) -> tuple[list[set[int]], list[dict]]:
    notes: list[dict] = []
    s = sub.surface
    d = degeneracy_threshold(s.orientable, s.genus, goal)
    cls = GOAL_CLASS[goal]
    res = _disk(sub, notes)
    work = res.embedding
    disk_ids = sorted(set(res.disk_edges) - set(work.helpers))
    if goal == "thickness":
        head = [set(disk_ids)]
    else:
        a, b = _bipartition_ids(work, disk_ids, deadline)
        head = [a, b]
    ess = sorted(res.essential)
    g_ess = Graph(work.n, {e: work.edges[e] for e in ess})
    rec = degeneracy_peel(g_ess, d)
    forests = forest_partition(rec)
    core, how = split_core(work.n, g_ess.edges, rec.core_vertices, rec.core_edges, d, cls, deadline)
    merged = [core[i] | set(forests[i]) for i in range(d)]
    notes.append(
        {
            "step": "degeneracy",
            "threshold": d,
            "core_vertices": len(rec.core_vertices),
            "core_edges": len(rec.core_edges),
            "core_split": how,
        }
    )
    return head + merged, notes


def _degeneracy_pipeline(emb: Embedding, goal: Goal, deadline: Deadline | None) -> Decomposition:
    if emb.genus == 0:
        raise DecompositionError("degeneracy pipelines need positive genus; use the planar method")
    simple, extra = _simplify(emb)
    layers, ledger = _run_blocks(simple, goal, lambda sub, p: _degeneracy_block(sub, p, goal, deadline), deadline)
    return _finish(emb, goal, "degeneracy", layers, ledger, extra)


def thickness_degeneracy(emb: Embedding, deadline: Deadline | None = None) -> Decomposition:
    return _degeneracy_pipeline(emb, "thickness", deadline)


def outerthickness_degeneracy(emb: Embedding, deadline: Deadline | None = None) -> Decomposition:
    return _degeneracy_pipeline(emb, "outerthickness", deadline)


def planar_decomposition(emb: Embedding, goal: Goal, deadline: Deadline | None = None) -> Decomposition:
    if emb.genus != 0 or not emb.orientable:
        raise DecompositionError("planar method needs a sphere embedding")
    simple, extra = _simplify(emb)
    layers = _planar_block(simple, goal, deadline)
    return _finish(emb, goal, "planar", layers, [], extra)


# ---------------------------------------------------------------------------
# torus: homotopy classes of essential edges
# ---------------------------------------------------------------------------


@dataclass
class EssentialClass:
    signature: tuple[int, ...]
    edges: list[int]
    ends: dict[int, tuple[int, int]]  # edge -> (u-side vertex, v-side vertex)
    u_arc: tuple[int, ...] = ()  # boundary positions, in cycle order
    v_arc: tuple[int, ...] = ()
    cylinder: bool = False

    @property
    def u_side(self) -> list[int]:
        return sorted({u for u, _ in self.ends.values()})

    @property
    def v_side(self) -> list[int]:
        return sorted({v for _, v in self.ends.values()})


def _arc(positions: set[int], length: int) -> tuple[int, ...]:
    """Shortest cyclic run of positions covering ``positions`` (ends included)."""
    pts = sorted(positions)
    if len(pts) == 1:
        return (pts[0],)
    best, start = -1, pts[0]
    for i, p in enumerate(pts):
        q = pts[(i + 1) % len(pts)]
        gap = (q - p) % length
        if gap > best:
            best, start = gap, q
    end = pts[(pts.index(start) - 1) % len(pts)]
    span = (end - start) % length
    return tuple((start + j) % length for j in range(span + 1))


def classify_essential_edges(res: SpanningDiskResult) -> list[EssentialClass]:
    """Group essential edges by homology class up to sign."""
    emb = res.embedding
    table = res.homology
    groups: dict[tuple[int, ...], EssentialClass] = {}
    for e in sorted(res.essential):
        sig = res.signature(e)
        canon = table.canonical(sig)
        u, v = emb.edges[e]
        if sig != canon:
            u, v = v, u
        cls = groups.setdefault(canon, EssentialClass(canon, [], {}))
        cls.edges.append(e)
        cls.ends[e] = (u, v)
    out = sorted(groups.values(), key=lambda c: c.edges[0])
    cycle = res.boundary_vertices
    if len(cycle) >= 3:
        pos = {v: i for i, v in enumerate(cycle)}
        for c in out:
            c.u_arc = _arc({pos[u] for u, _ in c.ends.values()}, len(cycle))
            c.v_arc = _arc({pos[v] for _, v in c.ends.values()}, len(cycle))
            c.cylinder = len(c.u_arc) > 1 and len(c.v_arc) > 1
    return out


def _reduce_class(c: EssentialClass, cycle: Sequence[int]) -> tuple[list[int], list[int], str]:
    """Strip pendant edges at internal vertices; return (kept, removed, shape)."""
    internal = set()
    for arc in (c.u_arc, c.v_arc):
        internal.update(cycle[p] for p in arc[1:-1])
    kept = list(c.edges)
    removed: list[int] = []
    changed = True
    while changed:
        changed = False
        deg: dict[int, int] = defaultdict(int)
        for e in kept:
            for x in c.ends[e]:
                deg[x] += 1
        for e in kept:
            if any(deg[x] == 1 and x in internal for x in c.ends[e]) and len(kept) > 1:
                kept.remove(e)
                removed.append(e)
                changed = True
                break
    h = nx.Graph()
    for e in kept:
        h.add_edge(*c.ends[e])
    comps = [h.subgraph(cc) for cc in nx.connected_components(h)]
    if max(dict(h.degree()).values(), default=0) > 2 or not nx.is_forest(h):
        shape = "invalid"
    elif len(comps) == 1:
        shape = "edge" if h.number_of_edges() == 1 else "path"
    elif len(comps) == 2 and all(cc.number_of_edges() == 1 for cc in comps):
        shape = "two edges"
    else:
        shape = "invalid"
    return kept, removed, shape


def _torus_block(sub: Embedding, parent: Embedding, deadline: Deadline | None) -> tuple[list[set[int]], list[dict]]:
    notes: list[dict] = []
    res = _disk(sub, notes)
    work = res.embedding
    disk_ids = sorted(res.disk_edges)
    if not res.essential:
        a, b = _bipartition_ids(work, disk_ids, deadline)
        return [a, b], notes
    classes = classify_essential_edges(res)
    if len(classes) > 3:
        raise DecompositionError(
            f"{len(classes)} essential classes on a torus (at most 3 expected)",
            {"signatures": [list(c.signature) for c in classes]},
        )
    cycle = res.boundary_vertices
    reduced = []
    pendants: list[int] = []
    for c in classes:
        kept, removed, shape = _reduce_class(c, cycle)
        reduced.append((c, kept, shape))
        pendants += removed
        if shape == "two edges":
            notes.append({"step": "torus normalization", "virtual_edge": [c.u_arc[0], c.u_arc[-1]] if c.u_arc else []})
    diag = {
        "classes": [
            {"signature": list(c.signature), "edges": c.edges, "kept": kept, "shape": shape, "cylinder": c.cylinder}
            for c, kept, shape in reduced
        ]
    }
    if any(shape == "invalid" for _, _, shape in reduced):
        raise DecompositionError("reduced essential class is not a path", diag)
    order = sorted(range(len(reduced)), key=lambda i: (not reduced[i][0].cylinder, i))
    failure = "no partner class gave an outerplanar remainder"
    for i in order:
        third = set().union(*(set(reduced[j][1]) for j in range(len(reduced)) if j != i))
        if not layer_ok("outerplanar", [work.edges[e] for e in third]):
            continue
        planar_part = sorted(set(disk_ids) | set(reduced[i][1]))
        if not layer_ok("planar", [work.edges[e] for e in planar_part]):
            failure = "disk plus partner class is not planar"
            continue
        h1, h2 = _bipartition_ids(work, planar_part, deadline)
        layers = [h1, h2, third]
        for e in pendants:
            for slot in (2, 0, 1):
                if layer_ok("outerplanar", [work.edges[f] for f in layers[slot] | {e}]):
                    layers[slot].add(e)
                    break
            else:
                raise DecompositionError(f"pendant edge {e} fits no layer", diag)
        notes.append({"step": "torus", "partner_class": i, "pendants": pendants, **diag})
        return [set(x) - set(work.helpers) for x in layers], notes
    raise DecompositionError(failure, diag)


def torus_outerthickness(emb: Embedding, deadline: Deadline | None = None) -> Decomposition:
    s = emb.surface
    if not (s.orientable and s.genus == 1):
        raise DecompositionError(f"torus method needs a torus embedding, got {s.label()}")
    simple, extra = _simplify(emb)
    layers, ledger = _run_blocks(simple, "outerthickness", lambda sub, p: _torus_block(sub, p, deadline), deadline)
    return _finish(emb, "outerthickness", "torus", layers, ledger, extra)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def choose_method(emb: Embedding, goal: Goal) -> str:
    s = emb.surface
    if s.genus == 0 and s.orientable:
        return "planar"
    if s.orientable and s.genus == 1 and goal == "outerthickness":
        return "torus"
    if s.orientable and goal == "thickness":
        return "genus-peel"
    return "degeneracy"


def decompose(emb: Embedding, goal: Goal, method: str = "auto", deadline: Deadline | None = None) -> Decomposition:
    if goal not in GOAL_CLASS:
        raise ValueError(f"unknown goal {goal!r}")
    if method == "auto":
        method = choose_method(emb, goal)
    if method == "planar":
        return planar_decomposition(emb, goal, deadline)
    if method == "genus-peel":
        return _genus_peel_pipeline(emb, goal, deadline)
    if method == "degeneracy":
        return _degeneracy_pipeline(emb, goal, deadline)
    if method == "torus":
        if goal != "outerthickness":
            raise DecompositionError("torus method only targets outerthickness")
        return torus_outerthickness(emb, deadline)
    raise ValueError(f"unknown method {method!r}")
