"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--sizes 8 32 128] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from ordfix import kernels


def _inputs(n, seed=0):
    rng = np.random.default_rng(seed)
    w = rng.integers(1, 17, size=(n, n)) / 16.0
    w = np.triu(w, 1)
    w = w + w.T
    dist = kernels.floyd_warshall(w)
    rel = rng.random((n, n)) < 0.1
    np.fill_diagonal(rel, True)
    closed = kernels.transitive_closure(rel)
    selfmap = rng.integers(0, n, size=n)
    mask = np.ones((n, n), dtype=bool)
    return {
        "triangle_violation": (dist,),
        "transitivity_violation": (closed,),
        "floyd_warshall": (w,),
        "transitive_closure": (rel,),
        # alpha=1 so the scan visits every pair
        "linear_contraction_violation": (dist, selfmap, mask, 0.999999),
        "maia_series": (dist, selfmap, 1.2, 40),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 32, 128])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the fallback is available")
    print(f"{'kernel':<30}{'n':>6}" + "".join(f"{b + ' ms':>14}" for b in backends) + f"{'speedup':>10}")
    for n in args.sizes:
        for name, call_args in _inputs(n).items():
            fn = getattr(kernels, name)
            times = {}
            for bname, mod in backends.items():
                number = 1 if bname == "python" and n >= 128 else 3
                best = min(timeit.repeat(lambda: fn(*call_args, impl=mod), number=number, repeat=args.repeat))
                times[bname] = best / number * 1e3
            speed = times["python"] / times["cython"] if "cython" in times else float("nan")
            print(f"{name:<30}{n:>6}" + "".join(f"{t:>14.3f}" for t in times.values()) + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
