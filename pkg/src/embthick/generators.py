"""Named and random embedding generators."""

from __future__ import annotations

import itertools
import random

from .embedding import Embedding, check_embedding
from .errors import EmbthickError

K7_OFFSETS = (1, 3, 2, 6, 4, 5)


def _from_neighbour_orders(n: int, orders: list[list[int]], name: str) -> Embedding:
    pairs = sorted({(min(u, v), max(u, v)) for u in range(n) for v in orders[u]})
    ident = {p: i for i, p in enumerate(pairs)}
    rotation = []
    for u in range(n):
        rot = []
        for v in orders[u]:
            e = ident[(min(u, v), max(u, v))]
            rot.append((e, 0 if pairs[e][0] == u else 1))
        rotation.append(rot)
    return check_embedding(Embedding.build(n, pairs, rotation, name=name))


def k7_torus() -> Embedding:
    """The triangular embedding of K7 in the torus (14 triangles)."""
    orders = [[(i + k) % 7 for k in K7_OFFSETS] for i in range(7)]
    return _from_neighbour_orders(7, orders, "k7-torus")


def dual(emb: Embedding, name: str = "") -> Embedding:
    """Geometric dual of an orientable embedding (faces become vertices)."""
    if not all(s == 1 for s in emb.signs.values()):
        raise EmbthickError("dual() expects an embedding with all signs +")
    walks = []
    for f in emb.faces:
        steps = f.steps
        if steps[0][1] == -1:  # traced against the orientation; flip it
            steps = tuple(emb.mirror(st) for st in reversed(steps))
        walks.append([d for d, _ in steps])
    where = {d: i for i, walk in enumerate(walks) for d in walk}
    edges = {e: (where[(e, 0)], where[(e, 1)]) for e in emb.edges}
    rotation = walks
    return check_embedding(Embedding.build(len(emb.faces), edges, rotation, name=name))


def heawood_torus() -> Embedding:
    """The Heawood graph in the torus, as the dual of the K7 triangulation."""
    return dual(k7_torus(), "heawood-torus")


def bouquet2_torus() -> Embedding:
    """One vertex with two loops a, b in rotation a b a' b' (one face, torus)."""
    return check_embedding(
        Embedding.build(1, [(0, 0), (0, 0)], [[(0, 0), (1, 0), (0, 1), (1, 1)]], allow_multi=True, name="bouquet2-torus")
    )


def kn(n: int) -> Embedding:
    """K_n with vertex i listing neighbours i+1, i+2, ... (planar for n <= 4)."""
    if n < 1:
        raise EmbthickError("kn needs n >= 1")
    if n == 4:
        orders = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]]
    else:
        orders = [[(i + k) % n for k in range(1, n)] for i in range(n)]
    return _from_neighbour_orders(n, orders, f"k{n}")


def random_embedding(
    n: int,
    genus: int,
    seed: int,
    orientable: bool = True,
    attempts: int = 20000,
) -> Embedding:
    """Random 2-connected embedding with exactly the requested genus.

    A Hamiltonian cycle plus random chords gives the graph; rotations (and
    signs when nonorientable) are drawn uniformly and rejected until the
    traced surface matches.  ``genus`` is the orientable genus, or the
    nonorientable (crosscap) genus when ``orientable`` is false.
    """
    if n < 3:
        raise EmbthickError("random embeddings need n >= 3")
    rng = random.Random(seed)
    euler = 2 * genus if orientable else genus
    if euler < (0 if orientable else 1):
        raise EmbthickError("genus out of range")
    all_pairs = list(itertools.combinations(range(n), 2))
    # face counts that give a simple graph containing a Hamiltonian cycle
    face_range = [f for f in range(1, 5) if n <= n - 2 + euler + f <= len(all_pairs)]
    if not face_range:
        raise EmbthickError(f"no simple graph on {n} vertices fits genus {genus}")
    for attempt in range(attempts):
        if attempt % 200 == 0:
            m = n - 2 + euler + rng.choice(face_range)
            perm = list(range(n))
            rng.shuffle(perm)
            cycle = {(min(perm[i], perm[(i + 1) % n]), max(perm[i], perm[(i + 1) % n])) for i in range(n)}
            chords = [p for p in all_pairs if p not in cycle]
            pairs = sorted(cycle | set(rng.sample(chords, m - n)))
        rotation: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for e, (u, v) in enumerate(pairs):
            rotation[u].append((e, 0))
            rotation[v].append((e, 1))
        for r in rotation:
            rng.shuffle(r)
        signs = None
        if not orientable:
            signs = {e: rng.choice((1, -1)) for e in range(len(pairs))}
        emb = Embedding.build(n, pairs, rotation, signs, name=f"random-{n}-{genus}-{seed}")
        s = emb.surface
        if s.orientable == orientable and s.genus == genus:
            return check_embedding(emb)
    raise EmbthickError(f"no {'orientable' if orientable else 'nonorientable'} genus-{genus} embedding found for n={n}")


def generate(spec: str, seed: int | None = None) -> Embedding:
    """Build an embedding from a spec string such as ``"random 8 1 42"``."""
    parts = spec.split()
    if not parts:
        raise EmbthickError("empty generator spec")
    head, args = parts[0], parts[1:]
    try:
        if head == "k7-torus" and not args:
            return k7_torus()
        if head == "heawood-torus" and not args:
            return heawood_torus()
        if head == "bouquet2-torus" and not args:
            return bouquet2_torus()
        if head == "kn" and len(args) == 1:
            return kn(int(args[0]))
        if head[:1] == "k" and head[1:].isdigit() and not args:
            return kn(int(head[1:]))
        if head in ("random", "nrandom") and len(args) in (2, 3):
            n, g = int(args[0]), int(args[1])
            s = int(args[2]) if len(args) == 3 else (seed if seed is not None else 0)
            return random_embedding(n, g, s, orientable=(head == "random"))
    except ValueError:
        raise EmbthickError(f"bad numeric argument in generator spec {spec!r}") from None
    raise EmbthickError(f"unknown generator spec {spec!r}")
