"""Compare the compiled and pure-Python kernels on realistic sizes.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from seqemu import _kernels_py
from seqemu.topology import TopologySpec, build_topology

try:
    from seqemu import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--n", type=int, default=1_000_000, help="samples for the gather kernels")
    args = ap.parse_args()

    g = build_topology(TopologySpec("clos", 4096))
    indptr, indices = g.csr
    srcs = np.arange(g.n_switches, dtype=np.int64)
    rng = np.random.default_rng(0)
    idx = rng.integers(0, 4096, size=args.n).astype(np.int64)
    vals = rng.random(4096) * 100
    classes = rng.integers(0, 3, size=args.n).astype(np.int8)
    targets = rng.integers(0, 4096, size=int((classes == 0).sum())).astype(np.int64)
    class_cost = np.array([0.0, 10.0, 1.0])

    cases = {
        "all-pairs hops, clos 4096": lambda m: m.multi_source_hops(indptr, indices, srcs),
        f"gather_moments, n={args.n}": lambda m: m.gather_moments(idx, vals),
        f"stream_total, n={args.n}": lambda m: m.stream_total(classes, targets, class_cost, vals),
    }
    print(f"{'kernel':34s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, call in cases.items():
        tp, out_p = best_of(lambda: call(_kernels_py), args.repeat)
        if _ckernels is None:
            print(f"{name:34s} {tp:10.4f} {'n/a':>10s}")
            continue
        tc, out_c = best_of(lambda: call(_ckernels), args.repeat)
        same = np.array_equal(np.asarray(out_p), np.asarray(out_c))
        print(f"{name:34s} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x{'' if same else '  MISMATCH'}")


if __name__ == "__main__":
    main()
