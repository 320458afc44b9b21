"""Benchmark the forest kernels: compiled extension vs pure numpy fallback.

Times fit and predict on the engine's working sizes (the per-generation refit
shape and a larger one) and verifies both backends return identical results.

    python benchmarks/bench_forest.py [--trees 100] [--repeats 5]
"""

import argparse
import time

import numpy as np

from usea.surrogate import backends


def _median_time(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def _case(rng, m, n):
    X = np.ascontiguousarray(rng.uniform(-5, 5, (m, n)))
    y = np.ascontiguousarray(np.sum(X**2, axis=1) + rng.normal(0, 1, m))
    sorted_cols = np.ascontiguousarray(np.argsort(X, axis=0, kind="stable"), dtype=np.int32)
    XT = np.ascontiguousarray(X.T)
    Q = np.ascontiguousarray(rng.uniform(-5, 5, (50, n)))
    return XT, y, sorted_cols, Q


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trees", type=int, default=100)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    names = backends.available_backends()
    print(f"available backends: {', '.join(names)} (active: {backends.active_backend_name()})")
    if "compiled" not in names:
        print("compiled extension not built; timing the pure backend only")

    rng = np.random.default_rng(0)
    print(f"{'case':<18} {'backend':<10} {'fit':>10} {'predict':>10} {'speedup':>9}")
    for m, n in ((100, 20), (100, 50), (250, 20)):
        XT, y, sorted_cols, Q = _case(rng, m, n)
        f_try = max(1, n // 3)
        results = {}
        forests = {}
        for name in names:
            be = backends.get_backend(name)
            fit = lambda be=be: be.fit_forest(XT, y, sorted_cols, args.trees, -1, 2, f_try, True, 42)
            forest = fit()
            forests[name] = forest
            predict = lambda be=be, forest=forest: be.predict_forest(*forest, Q)
            results[name] = (_median_time(fit, args.repeats), _median_time(predict, args.repeats))
        base = results.get("pure", (np.nan, np.nan))[0]
        for name in names:
            fit_t, pred_t = results[name]
            speedup = f"{base / fit_t:8.1f}x" if name == "compiled" else "        -"
            print(f"m={m:<4} n={n:<9} {name:<10} {fit_t*1e3:8.2f}ms {pred_t*1e3:8.2f}ms {speedup}")
        if len(names) == 2:
            same_forest = all(np.array_equal(a, b) for a, b in zip(forests["pure"], forests["compiled"]))
            pm = backends.get_backend("pure").predict_forest(*forests["pure"], Q)
            cm = backends.get_backend("compiled").predict_forest(*forests["compiled"], Q)
            same_pred = np.array_equal(pm[0], cm[0]) and np.array_equal(pm[1], cm[1])
            print(f"  bit-identical forests: {same_forest}; bit-identical predictions: {same_pred}")


if __name__ == "__main__":
    main()
