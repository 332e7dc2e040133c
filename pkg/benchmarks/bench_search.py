"""Compare the compiled and pure-Python map-search kernels.

    python benchmarks/bench_search.py [--repeat N]
"""

import argparse
import time

from fliplab import _search, kernel
from fliplab.complexes import arc_complex, flip_ball
from fliplab.models import Model, base_triangulation
from fliplab.rigidity import _adjacency, _connectivity_order, _degeneracy_order


def _arc_complex_case(model):
    cx = arc_complex(model)
    adj = _adjacency(list(cx.vertices), cx.edges())
    return adj, adj, _degeneracy_order(adj), [-1] * len(adj)


def _tree_case(r):
    torus = Model.torus()
    base = base_triangulation(torus)
    inner, outer = flip_ball(torus, base, r), flip_ball(torus, base, r + 1)
    wv = list(outer.vertices)
    idx = {v: k for k, v in enumerate(wv)}
    adj = _adjacency(wv, outer.edges)
    fixed = [-1] * len(wv)
    for v in inner.vertices:
        fixed[idx[v]] = idx[v]
    return adj, adj, _connectivity_order(adj, sorted(idx[v] for v in inner.vertices)), fixed


CASES = {
    "automorphisms A(polygon:8)": lambda: _arc_complex_case(Model.polygon(8)),
    "automorphisms A(ppolygon:5)": lambda: _arc_complex_case(Model.ppolygon(5)),
    "farey tree extensions r=3": lambda: _tree_case(3),
}


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = fn()
        best = min(best, time.perf_counter() - t0)
    return best, res


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not kernel.HAVE_EXTENSION:
        print("compiled kernel not built; only the pure-Python backend is timed")
    print(f"{'case':32s} {'solutions':>9s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, build in CASES.items():
        src, tgt, order, fixed = build()
        tp, n = _time(lambda: _search.count(src, tgt, order, fixed), args.repeat)
        if kernel.HAVE_EXTENSION:
            from fliplab._ext import _ckernel
            tc, nc = _time(lambda: _ckernel.count(src, tgt, order, fixed), args.repeat)
            assert nc == n
            print(f"{name:32s} {n:9d} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}x")
        else:
            print(f"{name:32s} {n:9d} {tp:10.4f} {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
