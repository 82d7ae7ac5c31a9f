"""Compare the JIT kernels against the interpreted fallback.

Runs the same workloads through both kernel backends and prints per-kernel
timings plus the speedup. The numba path pays a one-time compile cost on
first call; timings below are steady-state (after warm-up).

Usage: python benchmarks/bench_backends.py
"""

import time

import numpy as np

from railyard import OptimizerConfig, WorkloadSpec, generate
from railyard import exact, heuristic
from railyard.cost import InstanceContext
from railyard.kernels import active, build_backend


def timed(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_backend(backend, rows: dict) -> None:
    config = OptimizerConfig(alpha=1.0)

    schema, workload, stats = generate(WorkloadSpec(n_attributes=16, n_query_kinds=14,
                                                    seed=7))
    ctx = InstanceContext.build(schema, stats, workload)
    masks = np.array([(1 << len(schema)) - 1], dtype=np.int64)
    sizes = np.array([float(ctx.s_block)], dtype=np.float64)
    per = np.empty(len(workload.queries))

    def io_eval():
        for _ in range(2000):
            backend.eval_io_intersect(masks, sizes, ctx.qmasks,
                                      ctx.weights_effective, per)
            backend.eval_io_greedy_cover(masks, sizes, float(ctx.c_e), ctx.table,
                                         ctx.qmasks, ctx.weights_effective, per)

    exact._k = heuristic._k = backend
    try:
        io_eval()  # warm-up (JIT compile)
        rows.setdefault("query-io eval x2000", {})[backend.name] = timed(io_eval, 3)
        rows.setdefault("greedy_nov 16x14", {})[backend.name] = timed(
            lambda: heuristic.greedy_nov(schema, stats, workload, config), 3)
        rows.setdefault("greedy_ov 16x14", {})[backend.name] = timed(
            lambda: heuristic.greedy_ov(schema, stats, workload, config), 3)

        s10, w10, b10 = generate(WorkloadSpec(n_attributes=10, n_query_kinds=5, seed=7))
        rows.setdefault("exact_nov 10 attrs", {})[backend.name] = timed(
            lambda: exact.solve_exact_nov(s10, b10, w10, config), 3)

        s5, w5, b5 = generate(WorkloadSpec(n_attributes=5, n_query_kinds=4, seed=7))
        rows.setdefault("exact_ov 5 attrs", {})[backend.name] = timed(
            lambda: exact.solve_exact_ov(s5, b5, w5, config), 3)
    finally:
        exact._k = heuristic._k = active


def main() -> None:
    rows: dict = {}
    for jit in (False, True):
        try:
            backend = build_backend(jit)
        except ImportError:
            print("numba not installed; benchmarking the numpy path only")
            continue
        print(f"benchmarking {backend.name} backend ...")
        bench_backend(backend, rows)

    print()
    print(f"{'kernel':<24} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    for name, t in rows.items():
        numpy_t = t.get("numpy", float("nan"))
        numba_t = t.get("numba", float("nan"))
        speedup = numpy_t / numba_t if numba_t and numba_t == numba_t else float("nan")
        print(f"{name:<24} {numpy_t:>11.4f}s {numba_t:>11.4f}s {speedup:>8.1f}x")


if __name__ == "__main__":
    main()
