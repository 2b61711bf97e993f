"""Text formats: embedding files, decomposition JSON, DOT export."""

from __future__ import annotations

import json
import os
import re
import tempfile
import warnings
from pathlib import Path

from .decomposition import Decomposition, Layer
from .embedding import Embedding, Graph, delete_edges, validate_embedding
from .errors import FormatError

_DART = re.compile(r"^(\d+)\.([01])$")


def parse_embedding(text: str) -> Embedding:
    """Parse the line-oriented embedding format; errors carry line numbers."""
    name = ""
    n: int | None = None
    edges: dict[int, tuple[int, int]] = {}
    signs: dict[int, int] = {}
    rot_lines: dict[int, tuple[int, list[tuple[int, int]]]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "graph":
            name = rest
        elif head == "vertices":
            if not rest.isdigit():
                raise FormatError(f"bad vertex count {rest!r}", lineno)
            n = int(rest)
        elif head == "edge":
            parts = rest.split()
            if len(parts) not in (3, 4) or not all(p.lstrip("-").isdigit() for p in parts[:3]):
                raise FormatError("expected: edge <id> <u> <v> [+|-]", lineno)
            e, u, v = (int(p) for p in parts[:3])
            if e in edges:
                raise FormatError(f"edge id {e} defined twice", lineno)
            sign = parts[3] if len(parts) == 4 else "+"
            if sign not in "+-":
                raise FormatError(f"bad sign {sign!r}", lineno)
            edges[e] = (u, v)
            signs[e] = 1 if sign == "+" else -1
        elif head == "rot":
            label, colon, darts = rest.partition(":")
            if not colon or not label.strip().isdigit():
                raise FormatError("expected: rot <v>: <e>.<k> ...", lineno)
            v = int(label)
            if v in rot_lines:
                raise FormatError(f"rotation for vertex {v} given twice", lineno)
            rot = []
            seen = set()
            for tok in darts.split():
                m = _DART.match(tok)
                if not m:
                    raise FormatError(f"bad dart {tok!r}", lineno)
                d = (int(m.group(1)), int(m.group(2)))
                if d in seen:
                    raise FormatError(f"dart {tok} appears twice", lineno)
                seen.add(d)
                rot.append(d)
            rot_lines[v] = (lineno, rot)
        else:
            raise FormatError(f"unknown keyword {head!r}", lineno)
    if n is None:
        raise FormatError("missing 'vertices' line")
    if n == 0:
        raise FormatError("empty graph")
    for v, (lineno, rot) in rot_lines.items():
        if not 0 <= v < n:
            raise FormatError(f"vertex {v} out of range", lineno)
    # a dart listed on two rot lines is reported at the later line
    owner: dict[tuple[int, int], int] = {}
    for v, (lineno, rot) in sorted(rot_lines.items(), key=lambda kv: kv[1][0]):
        for d in rot:
            if d in owner:
                raise FormatError(f"dart {d[0]}.{d[1]} appears twice", lineno)
            owner[d] = v
    rotation = [rot_lines.get(v, (0, []))[1] for v in range(n)]
    multi = _has_multi(edges)
    emb = Embedding.build(n, edges, rotation, signs, allow_multi=multi, name=name)
    problems = validate_embedding(emb)
    if problems and multi and all(_is_multi_problem(p) for p in problems):
        emb = _merge_contractible(emb, problems)
        problems = validate_embedding(emb)
    if problems:
        line = None
        m = re.search(r"dart (\d+)\.([01])", problems[0])
        if m:
            d = (int(m.group(1)), int(m.group(2)))
            line = next((ln for _, (ln, rot) in rot_lines.items() if d in rot), None)
        raise FormatError(problems[0], line)
    return emb


def _has_multi(edges: dict[int, tuple[int, int]]) -> bool:
    seen = set()
    for u, v in edges.values():
        key = (min(u, v), max(u, v))
        if u == v or key in seen:
            return True
        seen.add(key)
    return False


def _is_multi_problem(p: str) -> bool:
    return p.endswith("contractible cycle") or p.endswith("is contractible")


def _merge_contractible(emb: Embedding, problems: list[str]) -> Embedding:
    drop = set()
    for p in problems:
        m = re.match(r"parallel edges (\d+) and (\d+)", p)
        if m:
            drop.add(int(m.group(2)))
        m = re.match(r"loop (\d+) is contractible", p)
        if m:
            drop.add(int(m.group(1)))
    warnings.warn(f"merged contractible parallel edges / dropped loops: {sorted(drop)}", stacklevel=3)
    out = delete_edges(emb, drop)
    return out.replace(allow_multi=_has_multi(dict(out.edges)))


def format_embedding(emb: Embedding) -> str:
    """Canonical text: vertices ascending, each rotation from its lowest dart."""
    lines = []
    if emb.name:
        lines.append(f"graph {emb.name}")
    lines.append(f"vertices {emb.n}")
    for e, (u, v) in sorted(emb.edges.items()):
        sign = " -" if emb.signs[e] == -1 else ""
        lines.append(f"edge {e} {u} {v}{sign}")
    for v, rot in enumerate(emb.rotation):
        if rot:
            i = rot.index(min(rot))
            rot = rot[i:] + rot[:i]
        lines.append(f"rot {v}: " + " ".join(f"{e}.{k}" for e, k in rot))
    return "\n".join(lines) + "\n"


def read_embedding(path: str | os.PathLike) -> Embedding:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise FormatError(f"cannot read {path}: {err.strerror}") from None
    return parse_embedding(text)


def write_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# decompositions
# ---------------------------------------------------------------------------


def decomposition_to_dict(dec: Decomposition) -> dict:
    return {
        "format": "embthick-decomposition/1",
        "graph": dec.name,
        "surface": dec.surface,
        "goal": dec.goal,
        "method": dec.method,
        "claimed_bound": dec.bound,
        "layer_count": dec.count,
        "vertices": dec.graph.n,
        "layers": [
            {
                "class": layer.cls,
                "tag": layer.tag,
                "ids": list(layer.edges),
                "edges": [f"{dec.graph.edges[e][0]}-{dec.graph.edges[e][1]}" for e in layer.edges],
            }
            for layer in dec.layers
        ],
        "helpers": dec.helpers,
        "verification": dec.verification,
    }


def decomposition_to_json(dec: Decomposition) -> str:
    return json.dumps(decomposition_to_dict(dec), indent=2, sort_keys=True) + "\n"


def decomposition_from_dict(data: dict) -> Decomposition:
    try:
        edges: dict[int, tuple[int, int]] = {}
        layers = []
        for layer in data["layers"]:
            ids = [int(e) for e in layer["ids"]]
            pairs = layer["edges"]
            if len(ids) != len(pairs):
                raise FormatError("layer ids and edges differ in length")
            for e, pair in zip(ids, pairs):
                u, v = (int(x) for x in str(pair).split("-"))
                edges[e] = (u, v)
            layers.append(Layer(tuple(ids), layer["class"], layer.get("tag", "")))
        return Decomposition(
            goal=data["goal"],
            method=data["method"],
            graph=Graph(int(data.get("vertices", 0)), edges),
            layers=layers,
            bound=int(data["claimed_bound"]),
            surface=data.get("surface", ""),
            helpers=list(data.get("helpers", [])),
            verification=data.get("verification"),
            name=data.get("graph", ""),
        )
    except (KeyError, TypeError, ValueError) as err:
        raise FormatError(f"malformed decomposition file: {err}") from None


def read_decomposition(path: str | os.PathLike) -> Decomposition:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as err:
        raise FormatError(f"cannot read {path}: {err.strerror}") from None
    except json.JSONDecodeError as err:
        raise FormatError(f"invalid JSON: {err.msg}", err.lineno) from None
    return decomposition_from_dict(data)


def export_dot(dec: Decomposition) -> str:
    """One undirected DOT graph per layer."""
    out = []
    for i, layer in enumerate(dec.layers):
        out.append(f'graph layer{i} {{\n  label="layer {i} ({layer.cls})";')
        verts = sorted({x for e in layer.edges for x in dec.graph.edges[e]})
        for v in verts:
            out.append(f"  {v};")
        for e in layer.edges:
            u, v = dec.graph.edges[e]
            out.append(f'  {u} -- {v} [label="{e}"];')
        out.append("}")
    return "\n".join(out) + "\n"
