"""Compare the numba kernels with their numpy fallbacks.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.
"""
import argparse
import time

import numpy as np

from cashflow_entropy import _kernels as K


def _best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _workloads(rng: np.random.Generator):
    vectors = [rng.lognormal(size=144) for _ in range(2000)]
    mats = [rng.lognormal(size=(12, 12)) for _ in range(2000)]
    ipf_inputs = []
    for _ in range(50):
        a = rng.lognormal(size=(30, 30))
        a[rng.random(a.shape) < 0.6] = 0.0
        np.fill_diagonal(a, 0.0)
        idx = np.arange(30)
        a[idx, np.roll(idx, -1)] += 1.0
        ipf_inputs.append((a, rng.uniform(1.0, 2.0, 30)))

    def entropy_of(fn):
        return lambda: [fn(v) for v in vectors]

    def rows_of(fn):
        return lambda: [fn(m) for m in mats]

    def ipf_of(fn):
        return lambda: [fn(a, t, 1e-12, 10_000) for a, t in ipf_inputs]

    return [
        ("weight_entropy x2000 (len 144)", entropy_of(K.weight_entropy_numba), entropy_of(K.weight_entropy_numpy)),
        ("row_entropies x2000 (12x12)", rows_of(K.row_entropies_numba), rows_of(K.row_entropies_numpy)),
        ("ipf_balance x50 (30x30, 60% sparse)", ipf_of(K.ipf_balance_numba), ipf_of(K.ipf_balance_numpy)),
    ]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if not K.NUMBA_AVAILABLE:
        print("numba is not installed; only the numpy path is available")
        return

    print(f"{'workload':40s} {'numba [ms]':>12s} {'numpy [ms]':>12s} {'speedup':>9s}")
    for name, fast, slow in _workloads(np.random.default_rng(args.seed)):
        fast()  # compile
        t_fast = _best_of(fast, args.repeat)
        t_slow = _best_of(slow, args.repeat)
        print(f"{name:40s} {t_fast * 1e3:12.2f} {t_slow * 1e3:12.2f} {t_slow / t_fast:8.1f}x")


if __name__ == "__main__":
    main()
