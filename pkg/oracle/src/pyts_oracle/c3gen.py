"""Deterministic generator for C3 test hierarchies.

Emits one module per hierarchy: layered acyclic class graphs of bounded
depth and width, plus dedicated files with patterns the interpreter must
reject (conflicting base orders). Rejecting files hold only the minimal
pattern, because class creation aborts module import at the first failure.
"""

from __future__ import annotations

import argparse
import random
from pathlib import Path

MAX_DEPTH = 4
MAX_WIDTH = 4


def _consistent_module(rng: random.Random, prefix: str) -> str:
    layers: list[list[str]] = []
    depth = rng.randint(1, MAX_DEPTH)
    counter = 0
    lines: list[str] = []
    for layer_index in range(depth):
        width = rng.randint(1, MAX_WIDTH)
        layer: list[str] = []
        pool = [name for layer_ in layers for name in layer_]
        for _ in range(width):
            name = f"{prefix}C{counter}"
            counter += 1
            if not pool:
                lines.append(f"class {name}:\n    pass\n")
            else:
                k = rng.randint(1, min(3, len(pool)))
                bases = rng.sample(pool, k)
                lines.append(f"class {name}({', '.join(bases)}):\n    pass\n")
            layer.append(name)
        layers.append(layer)
    return "\n".join(lines)


def _inconsistent_module(rng: random.Random, prefix: str) -> str:
    if rng.random() < 0.5:
        # classic conflicting diamond: A(X, Y), B(Y, X), C(A, B)
        return (
            f"class {prefix}X:\n    pass\n\n"
            f"class {prefix}Y:\n    pass\n\n"
            f"class {prefix}A({prefix}X, {prefix}Y):\n    pass\n\n"
            f"class {prefix}B({prefix}Y, {prefix}X):\n    pass\n\n"
            f"class {prefix}C({prefix}A, {prefix}B):\n    pass\n"
        )
    # a base listed before its own subclass
    return (
        f"class {prefix}X:\n    pass\n\n"
        f"class {prefix}A({prefix}X):\n    pass\n\n"
        f"class {prefix}C({prefix}X, {prefix}A):\n    pass\n"
    )


def generate_corpus(
    outdir: str | Path,
    count: int = 60,
    seed: int = 20240,
    inconsistent_every: int = 5,
) -> list[Path]:
    """Write `count` hierarchy modules; every `inconsistent_every`-th one
    is a guaranteed-rejected pattern. Deterministic in `seed`."""
    rng = random.Random(seed)
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i in range(count):
        prefix = f"H{i}_"
        if i % inconsistent_every == inconsistent_every - 1:
            text = _inconsistent_module(rng, prefix)
        else:
            text = _consistent_module(rng, prefix)
        path = out / f"h_{i:03d}.py"
        path.write_text(text, encoding="utf-8")
        paths.append(path)
    return paths


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="pyts-oracle-c3gen", description=__doc__)
    parser.add_argument("outdir")
    parser.add_argument("--count", type=int, default=60)
    parser.add_argument("--seed", type=int, default=20240)
    parser.add_argument("--inconsistent-every", type=int, default=5)
    args = parser.parse_args(argv)
    paths = generate_corpus(args.outdir, args.count, args.seed, args.inconsistent_every)
    print(f"wrote {len(paths)} hierarchy modules to {args.outdir}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
