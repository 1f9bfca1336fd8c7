"""Compare the span-table fixpoint backends on growing inputs.

    python benchmarks/bench_oracle.py [--lengths 8,16,32,64] [--repeat 3]

Each row is the best of ``--repeat`` runs.  Numba's first call compiles
(or loads the on-disk cache) and is excluded by a warm-up run.  The
``python`` backend runs the same loop kernel uncompiled and is skipped
above ``--python-max`` tokens.
"""

from __future__ import annotations

import argparse
import itertools
import time

import numpy as np

from tdmemo import _kernels as K
from tdmemo.corpus import corpus
from tdmemo.oracle import span_table

WORKLOADS = {
    "ambiguous": ("a",),
    "np-left": ("kim", "professor", "knows", "every", "student"),
    "extended": ("the", "old", "man", "with", "the", "dog", "saw", "the", "dog"),
}


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--lengths", default="8,16,32,64")
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--python-max", type=int, default=16)
    args = parser.parse_args(argv)
    lengths = [int(x) for x in args.lengths.split(",")]

    backends = ["numpy", "python"] + (["numba"] if K.HAVE_NUMBA else [])
    if K.HAVE_NUMBA:
        span_table(corpus()["ambiguous"], ("a",), backend="numba")  # warm-up / JIT

    print(f"{'grammar':<10} {'n':>4} " + " ".join(f"{b:>10}" for b in backends))
    grammars = corpus()
    for name, pattern in WORKLOADS.items():
        g = grammars[name]
        for n in lengths:
            tokens = tuple(itertools.islice(itertools.cycle(pattern), n))
            tables = {}
            cells = []
            for backend in backends:
                if backend == "python" and n > args.python_max:
                    cells.append(f"{'-':>10}")
                    continue
                seconds = best_of(lambda: tables.__setitem__(
                    backend, span_table(g, tokens, backend=backend)[0]), args.repeat)
                cells.append(f"{seconds * 1e3:>8.2f}ms")
            reference = tables["numpy"]
            assert all(np.array_equal(t, reference) for t in tables.values()), (name, n)
            print(f"{name:<10} {n:>4} " + " ".join(cells))


if __name__ == "__main__":
    main()
