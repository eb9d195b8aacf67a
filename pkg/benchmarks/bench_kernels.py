"""Time the numba kernels against their numpy counterparts.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends are imported directly, so the WSNDCT_BACKEND flag is irrelevant
here. Results are also checked for bit equality.
"""
import argparse
import sys
import timeit

import numpy as np

from wsndct import _kernels as K
from wsndct import harness


def cases():
    g = np.random.default_rng(0)
    nodes = g.random((2000, 2)) * 100
    yield "assign_nearest 2000x100", K.assign_nearest_numpy, K.assign_nearest_numba, (nodes, nodes[:100].copy())
    yield "assign_nearest 2000x300", K.assign_nearest_numpy, K.assign_nearest_numba, (nodes, nodes[:300].copy())
    heads = g.random((300, 2)) * 100 - 50
    bs = np.zeros(2)
    yield "bfs_tree 300 heads R=18", K.bfs_tree_numpy, K.bfs_tree_numba, (heads, bs, 18.0)
    yield "greedy_tree 300 heads R=18", K.greedy_tree_numpy, K.greedy_tree_numba, (heads, bs, 18.0)


def best_of(fn, args, repeat):
    number = max(1, int(0.2 / max(timeit.timeit(lambda: fn(*args), number=1), 1e-6)))
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sweep", action="store_true", help="also time a full fig12 sweep per backend")
    args = ap.parse_args(argv)
    if not K.HAVE_NUMBA:
        print("numba is not installed; nothing to compare", file=sys.stderr)
        return 1
    print(f"{'kernel':32s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for name, np_fn, nb_fn, a in cases():
        nb_fn(*a)  # compile outside the timing
        for x, y in zip(np_fn(*a), nb_fn(*a)):
            assert np.array_equal(x, y), name
        t_np = best_of(np_fn, a, args.repeat)
        t_nb = best_of(nb_fn, a, args.repeat)
        print(f"{name:32s} {t_np * 1e3:10.3f} {t_nb * 1e3:10.3f} {t_np / t_nb:8.1f}x")
    if args.sweep:
        cfg = harness.scenario("fig12")
        for label, backend in (("numpy", "numpy"), ("numba", "numba")):
            K.use_backend(backend)
            t = timeit.timeit(lambda: harness.run_sweep(cfg, threads=1), number=1)
            print(f"fig12 sweep ({label}): {t:.2f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
