"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--seed 0]

Both implementations are imported directly, so the backend flag does not
matter here.  The first numba call (compilation, or loading the cache) is
excluded from the timings.
"""

import argparse
import time

import numpy as np

from interleaving import _kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def rref_cases(rng):
    for m, n, p in [(20, 20, 2), (60, 60, 2), (120, 80, 3), (200, 200, 5)]:
        yield f"rref {m}x{n} mod {p}", (rng.integers(0, p, size=(m, n)), p)


def search_cases(rng):
    # systems with no solution force a full sweep of p**nvars assignments
    for nvars, p in [(12, 2), (16, 2), (10, 3)]:
        a = np.array([0, 1], dtype=np.int64)
        b = np.array([0, 1], dtype=np.int64)
        ptr = np.array([0, 2, 2], dtype=np.int64)
        target = np.array([0, 1], dtype=np.int64)  # the empty second row can never equal 1
        yield f"search {p}^{nvars} (exhaustive)", (a, b, ptr, target, nvars, p, 0, p**nvars)
        rows = 4
        a = rng.integers(0, nvars, size=3 * rows)
        b = rng.integers(0, nvars, size=3 * rows)
        ptr = np.arange(0, 3 * rows + 1, 3)
        target = rng.integers(0, p, size=rows)
        yield f"search {p}^{nvars} (random)", (a, b, ptr, target, nvars, p, 0, p**nvars)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)

    if _kernels.rref_numba is None:
        print("numba is not installed; only the numpy fallback is available")
        return 1

    print(f"{'case':34s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}")
    jobs = [(name, c, _kernels.rref_numpy, _kernels.rref_numba) for name, c in rref_cases(rng)]
    jobs += [(name, c, _kernels.search_numpy, _kernels.search_numba) for name, c in search_cases(rng)]
    for name, case, slow, fast in jobs:
        fast(*case)  # warm up the JIT
        t_np, r_np = best_of(lambda: slow(*case), args.repeat)
        t_nb, r_nb = best_of(lambda: fast(*case), args.repeat)
        same = all(np.array_equal(x, y) for x, y in zip(r_np, r_nb)) if isinstance(r_np, tuple) else r_np == r_nb
        if not same:
            raise SystemExit(f"backends disagree on {name}")
        print(f"{name:34s} {1e3 * t_np:11.2f} {1e3 * t_nb:11.2f} {t_np / t_nb:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
