"""Regenerate the shipped complete-graph patterns with the partition search."""

import sys
from pathlib import Path

from embthick.patterns import PATTERN_MAX_N, check_pattern, format_pattern, pattern_name, search_pattern

OUT = Path(__file__).resolve().parent.parent / "src" / "embthick" / "data" / "patterns"


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    for n in range(1, PATTERN_MAX_N + 1):
        for kind in ("planar", "outerplanar"):
            for seed in range(50):
                try:
                    layers = search_pattern(n, kind, seed=seed)
                    break
                except Exception:
                    continue
            else:
                print(f"K{n} {kind}: not found", file=sys.stderr)
                return 1
            assert not check_pattern(n, kind, layers)
            (OUT / pattern_name(n, kind)).write_text(format_pattern(n, kind, layers))
            print(f"K{n} {kind}: {len(layers)} layers")
    return 0


if __name__ == "__main__":
    sys.exit(main())
