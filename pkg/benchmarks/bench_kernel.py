"""Compare the compiled word kernel with the pure-Python one.

    python benchmarks/bench_kernel.py [--repeat N] [--size N]

Each row times one workload under both implementations (best of N) and
prints the speedup. Workloads: norms of a large random simple grammar,
shortest distinguishing traces, bounded unrolling, and full decisions on
equivalent grammar copies.
"""

from __future__ import annotations

import argparse
import gc
import random
import sys
import time
from pathlib import Path
from typing import Callable, Dict, List, Tuple

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

import corpus  # noqa: E402
from sessequiv import decide, kernel, type_equiv  # noqa: E402
from sessequiv.grammar import parse_grammar  # noqa: E402


def _best(fn: Callable[[], object], repeat: int) -> float:
    best = float("inf")
    gc.disable()
    try:
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
    finally:
        gc.enable()
    return best


def _table(g):
    labels = sorted(g.terminals)
    ids = {a: i for i, a in enumerate(labels)}
    return tuple(tuple((ids[a], tail) for a, tail in row) for row in g.table())


def workloads(size: int) -> Dict[str, Callable[[], object]]:
    rng = random.Random(1)
    text = corpus.simple_grammar(rng, size, "abc", 3)
    g, ids = parse_grammar(text + "\n" + corpus.fused_copy(rng, text, size // 2))
    table = _table(g)
    rows = [[t for _, t in row] for row in table]
    unnormed = [v < 0 for v in kernel.norms(rows)]
    words = [corpus.random_word(rng, ids, size, 4) for _ in range(200)]
    # the original nonterminal with the most behaviour, against its copy
    hub = max(range(size), key=lambda i: len(g.reachable([ids[f"N{i}"]])))
    left, right = (ids[f"N{hub}"],), (ids[f"M{hub}"],)
    pairs = corpus.oracle_pairs(9, 200)

    def traces():
        for a, b in zip(words, words[1:]):
            kernel.distinguish(table, a, b, -1, 100_000, unnormed)

    def unroll():
        kernel.bounded(table, left, right, 12, unnormed)

    def decisions():
        for t, u, sig in pairs:
            type_equiv(t, u, sig)

    return {
        f"norms ({len(table)} nonterminals)": lambda: kernel.norms(rows),
        "distinguish (199 word pairs)": traces,
        "bounded (k=12, equivalent copies)": unroll,
        "decide (equivalent copies)": lambda: decide(g, left, right),
        "type_equiv (200 corpus pairs)": decisions,
    }


def main(argv: List[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=400, help="nonterminals in the random grammar")
    args = ap.parse_args(argv)

    impls = kernel.available()
    if "compiled" not in impls:
        print("compiled kernel not built; only the Python kernel is available")
    before = kernel.IMPLEMENTATION
    results: Dict[str, Dict[str, float]] = {}
    try:
        # alternate implementations per workload so drift affects both alike
        for label, fn in workloads(args.size).items():
            for name in impls:
                kernel.select(name)
                results.setdefault(label, {})[name] = _best(fn, args.repeat)
    finally:
        kernel.select(before)

    header: Tuple[str, ...] = ("workload", *[f"{n} (ms)" for n in impls], "speedup")
    width = max(len(k) for k in results) + 2
    print(f"{header[0]:<{width}}" + "".join(f"{h:>14}" for h in header[1:]))
    for label, times in results.items():
        cells = "".join(f"{times[n] * 1000:>14.2f}" for n in impls)
        speed = f"{times['python'] / times['compiled']:>13.1f}x" if "compiled" in times else f"{'-':>14}"
        print(f"{label:<{width}}{cells}{speed}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
