"""Time every enumeration kernel under the numba and numpy backends.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--small]

Numba timings exclude compilation: each kernel is called once on a tiny input
before the clock starts. Results from the two backends are compared as well.
"""

import argparse
import time

import numpy as np

from densepf import kernels as K

# (kernel, n) pairs; --small trims n so the numpy path stays quick
CASES = [
    ("permutation_stats", 9, 7),
    ("permanent_enum", 9, 7),
    ("ryser", 20, 14),
    ("ham_dp", 18, 12),
    ("walk_masses", 7, 5),
    ("tree_masses", 8, 6),
]


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _close(x, y):
    if isinstance(x, tuple):
        return all(_close(u, v) for u, v in zip(x, y))
    return np.allclose(x, y, rtol=1e-9, atol=0)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--small", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    backends = K.backends()
    if "numba" in backends:
        warm = rng.uniform(0.5, 1, (4, 4))
        for name, *_ in CASES:
            getattr(K, name)(warm, backend=backends["numba"])

    print(f"{'kernel':<20}{'n':>4}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}  agree")
    for name, n_full, n_small in CASES:
        n = n_small if args.small else n_full
        a = rng.uniform(0.2, 1, (n, n))
        if name == "tree_masses":
            a = np.triu(a, 1) + np.triu(a, 1).T
        fn = getattr(K, name)
        times, outs = {}, {}
        for bname, mod in backends.items():
            times[bname], outs[bname] = _best(lambda: fn(a, backend=mod), args.repeat)
        row = f"{name:<20}{n:>4}" + "".join(f"{times[b]:>11.4f}s" for b in backends)
        if "numba" in times:
            row += f"{times['numpy'] / max(times['numba'], 1e-9):>9.1f}x"
            row += "  " + ("yes" if _close(outs["numba"], outs["numpy"]) else "NO")
        print(row)


if __name__ == "__main__":
    main()
