"""Complete-graph thickness values and certified layer patterns.

Patterns for K_n (n <= 14) ship as text files under ``data/patterns``.  The
first line carries a sha256 of the body; each further line is one layer of
space-separated ``u-v`` pairs.  Every pattern is re-certified when loaded, so
a corrupted or wrong file is rejected rather than trusted.
"""

from __future__ import annotations

import hashlib
import itertools
from functools import lru_cache
from importlib import resources

from .errors import DecompositionError, FormatError
from .planarity import LayerClass, layer_ok
from .search import Deadline, partition_search

PATTERN_MAX_N = 14


def complete_graph_bounds(n: int) -> tuple[int, int]:
    """(thickness, outerthickness) of the complete graph on ``n`` vertices."""
    if n < 1:
        raise ValueError("n must be positive")
    thick = 3 if n in (9, 10) else (n + 7) // 6
    outer = 3 if n == 7 else -(-(n + 1) // 4)
    return thick, outer


def complete_value(n: int, kind: LayerClass) -> int:
    thick, outer = complete_graph_bounds(n)
    return thick if kind == "planar" else outer


def pattern_name(n: int, kind: LayerClass) -> str:
    return f"k{n:02d}_{kind}.txt"


def format_pattern(n: int, kind: LayerClass, layers: list[list[tuple[int, int]]]) -> str:
    body = "".join(" ".join(f"{u}-{v}" for u, v in sorted(layer)) + "\n" for layer in layers)
    digest = hashlib.sha256(body.encode()).hexdigest()
    return f"# sha256:{digest} K{n} {kind} layers={len(layers)}\n" + body


def parse_pattern(text: str) -> list[list[tuple[int, int]]]:
    head, _, body = text.partition("\n")
    if not head.startswith("# sha256:"):
        raise FormatError("missing checksum header", line=1)
    digest = head.split()[1].removeprefix("sha256:")
    if hashlib.sha256(body.encode()).hexdigest() != digest:
        raise FormatError("pattern checksum mismatch", line=1)
    layers = []
    for lineno, line in enumerate(body.splitlines(), start=2):
        layer = []
        for tok in line.split():
            try:
                u, v = (int(x) for x in tok.split("-"))
            except ValueError:
                raise FormatError(f"bad edge token {tok!r}", line=lineno) from None
            layer.append((u, v))
        layers.append(layer)
    return layers


def check_pattern(n: int, kind: LayerClass, layers: list[list[tuple[int, int]]]) -> list[str]:
    """Problems with a claimed decomposition of K_n (empty list when sound)."""
    problems = []
    seen: dict[tuple[int, int], int] = {}
    for i, layer in enumerate(layers):
        for u, v in layer:
            key = (min(u, v), max(u, v))
            if u == v or not (0 <= u < n and 0 <= v < n):
                problems.append(f"layer {i}: bad edge {u}-{v}")
            elif key in seen:
                problems.append(f"edge {u}-{v} in layers {seen[key]} and {i}")
            seen[key] = i
        if not layer_ok(kind, layer):
            problems.append(f"layer {i} is not {kind}")
    missing = n * (n - 1) // 2 - len(seen)
    if missing > 0:
        problems.append(f"{missing} edges of K{n} uncovered")
    if len(layers) > complete_value(n, kind):
        problems.append(f"{len(layers)} layers exceed the known value {complete_value(n, kind)}")
    return problems


@lru_cache(maxsize=None)
def load_pattern(n: int, kind: LayerClass) -> tuple[tuple[tuple[int, int], ...], ...]:
    ref = resources.files("embthick") / "data" / "patterns" / pattern_name(n, kind)
    layers = parse_pattern(ref.read_text(encoding="utf-8"))
    problems = check_pattern(n, kind, layers)
    if problems:
        raise FormatError(f"pattern {pattern_name(n, kind)} failed verification: {problems[0]}")
    return tuple(tuple(layer) for layer in layers)


def search_pattern(n: int, kind: LayerClass, deadline: Deadline | None = None, seed: int = 0):
    pairs = list(itertools.combinations(range(n), 2))
    k = complete_value(n, kind)
    where = partition_search(pairs, k, kind, deadline, seed=seed, exhaustive=False, heuristic_moves=20000)
    if where is None:
        raise DecompositionError(f"no {k}-layer {kind} decomposition of K{n} found")
    layers: list[list[tuple[int, int]]] = [[] for _ in range(k)]
    for e, c in enumerate(where):
        layers[c].append(pairs[e])
    return layers


def complete_graph_decomposition(
    n: int, kind: LayerClass, deadline: Deadline | None = None
) -> list[list[tuple[int, int]]]:
    """Edge-disjoint certified layers of K_n, as many as its known value."""
    if n <= PATTERN_MAX_N:
        return [list(layer) for layer in load_pattern(n, kind)]
    layers = search_pattern(n, kind, deadline)
    problems = check_pattern(n, kind, layers)
    if problems:
        raise DecompositionError(problems[0])
    return layers
