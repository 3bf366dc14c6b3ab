"""Compare the compiled greedy-pursuit kernel against the NumPy reference.

Times both backends on identical random complex problems and reports the
median per-solve wall clock plus the speedup. Run:

    python benchmarks/bench_omp.py [--trials 50]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from nuwsim.kernels import BACKEND, _omp_py

try:
    from nuwsim.kernels import _omp_cy
except ImportError:
    _omp_cy = None


def _median_time(fn, problems, repeats=3):
    best = []
    for a, y, k in problems:
        per = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            fn(a, y, k, 1e-10)
            per.append(time.perf_counter() - t0)
        best.append(min(per))
    return float(np.median(best))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=50, help="problems per size")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if _omp_cy is None:
        print("compiled kernel unavailable; only the reference backend can run")
        return 1

    rng = np.random.default_rng(args.seed)
    sizes = [(32, 32, 8), (64, 128, 16), (128, 256, 32), (256, 1024, 48)]
    print(f"active package backend: {BACKEND}")
    print(f"{'m':>5} {'p':>5} {'k':>4} {'python (ms)':>12} {'cython (ms)':>12} {'speedup':>8}")
    for m, p, k in sizes:
        problems = []
        for _ in range(args.trials):
            a = (rng.standard_normal((m, p)) + 1j * rng.standard_normal((m, p))) / np.sqrt(m)
            x = np.zeros(p, dtype=np.complex128)
            support = rng.choice(p, size=k, replace=False)
            x[support] = rng.standard_normal(k) + 1j * rng.standard_normal(k)
            problems.append((np.ascontiguousarray(a), np.ascontiguousarray(a @ x), k))
        def cy_full(a, y, k, tol):
            # include the transpose prep the package wrapper pays per call
            return _omp_cy.omp_greedy(np.ascontiguousarray(a.conj().T), y, k, tol)

        t_py = _median_time(_omp_py.omp_greedy, problems)
        t_cy = _median_time(cy_full, problems)
        print(f"{m:>5} {p:>5} {k:>4} {t_py * 1e3:>12.3f} {t_cy * 1e3:>12.3f} {t_py / t_cy:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
