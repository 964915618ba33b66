"""Compiled kernels against the pure-Python fallback.

Times local edge betweenness, neighbor ranking and a full guided run on
planted-partition graphs, once per backend, and checks that both backends
produce the same output.

    python benchmarks/bench_backends.py --sizes 1000,2000,4000 --repeats 3
"""

import argparse
import time

import numpy as np

from wlpa import _backend
from wlpa.betweenness import local_edge_betweenness
from wlpa.experiment import bench_graph
from wlpa.propagation import LpaConfig, rank_neighbors, wlpa_leb


def best_time(fn, repeats):
    best, out = np.inf, None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,2000,4000")
    ap.add_argument("--depth", type=int, default=2)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args(argv)
    if not _backend.compiled_available():
        raise SystemExit("compiled kernels are not built; reinstall with Cython available")

    print(f"{'n':>7} {'m':>8} {'phase':<12} {'python s':>9} {'compiled s':>10} {'speedup':>8}  same")
    for n in (int(x) for x in args.sizes.split(",")):
        g = bench_graph(n, degree=15, mu=0.4)
        cfg = LpaConfig(depth=args.depth, seed=0)
        phases = {
            "betweenness": lambda b: local_edge_betweenness(g, args.depth, backend=b).values,
            "ranking": lambda b: rank_neighbors(g, args.depth, backend=b).nbr,
            "guided run": lambda b: wlpa_leb(g, cfg, backend=b).partition.labels,
        }
        for name, fn in phases.items():
            tp, out_p = best_time(lambda: fn("python"), args.repeats)
            tc, out_c = best_time(lambda: fn("compiled"), args.repeats)
            same = np.array_equal(out_p, out_c)
            print(f"{g.n:>7} {g.m:>8} {name:<12} {tp:>9.3f} {tc:>10.4f} {tp / tc:>7.0f}x  {same}")


if __name__ == "__main__":
    main()
