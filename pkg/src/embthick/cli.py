"""Command-line interface.

Exit codes: 0 success, 1 invalid input, 2 decomposition or verification
failure, 3 time limit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .decomposition import bounds_report, decompose
from .embedding import Embedding
from .errors import DecompositionError, DiskConstructionError, EmbeddingError, EmbthickError, FormatError, SearchTimeout
from .generators import generate
from .io import (
    decomposition_to_json,
    export_dot,
    format_embedding,
    read_decomposition,
    read_embedding,
    write_atomic,
)
from .oracle import exact_outerthickness, exact_thickness, has_spanning_disk, verify_decomposition
from .search import Deadline

EXIT_OK, EXIT_INPUT, EXIT_FAIL, EXIT_TIME = 0, 1, 2, 3


def load(source: str) -> Embedding:
    """Read an embedding file; a missing path is tried as a generator spec."""
    if Path(source).exists():
        return read_embedding(source)
    try:
        return generate(source)
    except EmbthickError:
        raise FormatError(f"no such file and not a generator spec: {source}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def cmd_info(args: argparse.Namespace) -> int:
    emb = load(args.file)
    s = emb.surface
    rep = bounds_report(emb)
    print(f"graph       {emb.name or '-'}")
    print(f"vertices    {emb.n}")
    print(f"edges       {emb.m}")
    print(f"faces       {len(emb.faces)}")
    print(f"euler char  {s.chi}")
    print(f"orientable  {'yes' if s.orientable else 'no'}")
    print(f"genus       {s.genus}")
    print(f"surface     {s.label()}")
    print()
    print(f"{'bound':<28} {'goal':<15} {'raw':>7} {'eff':>4}  note")
    for e in rep.entries:
        print(f"{e.name:<28} {e.goal:<15} {e.raw:>7.3f} {e.effective:>4}  {e.note}")
    print(f"best thickness bound: {rep.best('thickness')}, best outerthickness bound: {rep.best('outerthickness')}")
    return EXIT_OK


def cmd_decompose(args: argparse.Namespace) -> int:
    emb = load(args.file)
    started = time.monotonic()
    dec = decompose(emb, args.goal, args.method, Deadline(args.time_limit))
    elapsed = time.monotonic() - started
    status = EXIT_OK
    if args.verify:
        report = verify_decomposition(emb.graph.subgraph(emb.original_edges()), dec)
        dec.verification = report.as_dict()
        if not report.ok:
            status = EXIT_FAIL
    _emit(decomposition_to_json(dec), args.out)
    sizes = ", ".join(str(len(layer.edges)) for layer in dec.layers)
    verdict = "" if dec.verification is None else (" verified" if dec.verification["ok"] else " VERIFICATION FAILED")
    print(
        f"{dec.method} {dec.goal}: {dec.count} layers (bound {dec.bound}) sizes [{sizes}]{verdict} in {elapsed:.2f}s",
        file=sys.stderr,
    )
    return status


def cmd_verify(args: argparse.Namespace) -> int:
    emb = load(args.embedding)
    dec = read_decomposition(args.decomposition)
    report = verify_decomposition(emb.graph.subgraph(emb.original_edges()), dec)
    print(json.dumps(report.as_dict(), indent=2, sort_keys=True))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_oracle(args: argparse.Namespace) -> int:
    emb = load(args.file)
    if args.goal == "spanning-disk":
        found, region = has_spanning_disk(emb, args.time_limit)
        print(json.dumps({"spanning_disk": found, "faces": sorted(region)}))
        return EXIT_OK
    g = emb.graph
    fn = exact_thickness if args.goal == "thickness" else exact_outerthickness
    res = fn(g, args.max_k, args.time_limit)
    print(
        json.dumps(
            {
                "goal": args.goal,
                "value": res.value,
                "lower_bound": res.lower_bound,
                "nodes": res.nodes,
                "elapsed": round(res.elapsed, 3),
                "witness": res.witness,
            }
        )
    )
    return EXIT_OK if res.exact else EXIT_TIME


def cmd_gen(args: argparse.Namespace) -> int:
    spec = " ".join(args.spec)
    emb = generate(spec, seed=args.seed)
    _emit(format_embedding(emb), args.out)
    return EXIT_OK


def cmd_export_dot(args: argparse.Namespace) -> int:
    sys.stdout.write(export_dot(read_decomposition(args.decomposition)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="embthick", description="Thickness and outerthickness of embedded graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("info", help="surface type and bounds of an embedding")
    s.add_argument("file")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("decompose", help="split the edges into certified layers")
    s.add_argument("file")
    s.add_argument("--goal", choices=("thickness", "outerthickness"), required=True)
    s.add_argument("--method", choices=("auto", "genus-peel", "degeneracy", "torus", "planar"), default="auto")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--out")
    s.add_argument("--time-limit", type=float, default=None)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("verify", help="re-check a decomposition file against its embedding")
    s.add_argument("embedding")
    s.add_argument("decomposition")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("oracle", help="exact values by exhaustive search")
    s.add_argument("file")
    s.add_argument("--goal", choices=("thickness", "outerthickness", "spanning-disk"), required=True)
    s.add_argument("--max-k", type=int, default=6)
    s.add_argument("--time-limit", type=float, default=None)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("gen", help="write a generated embedding")
    s.add_argument("spec", nargs="+", help="k7-torus | heawood-torus | bouquet2-torus | kn N | random N G [SEED] | nrandom N K [SEED]")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("export-dot", help="DOT graphs, one per layer")
    s.add_argument("decomposition")
    s.set_defaults(func=cmd_export_dot)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SearchTimeout as err:
        print(f"time limit: {err}", file=sys.stderr)
        return EXIT_TIME
    except (DecompositionError, DiskConstructionError) as err:
        print(f"decomposition failed: {err}", file=sys.stderr)
        return EXIT_FAIL
    except (FormatError, EmbeddingError, EmbthickError) as err:
        print(f"invalid input: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
