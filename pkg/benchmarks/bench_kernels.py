"""Benchmark the compiled sweep kernels against the pure-numpy fallback.

Run from the repository root:

    python benchmarks/bench_kernels.py --points 200000 --repeats 7

The compiled path is what ``reflection_grid``/``variance_grid`` dispatch to
when numba is importable and ``CRITSIM_DISABLE_NUMBA`` is unset; the fallback
is the vectorized numpy implementation used otherwise.
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from critsim._kernels import (
    _reflection_numpy,
    _variance_numpy,
    backend_name,
    reflection_grid,
    variance_grid,
)


def _best_of(repeats: int, fn, *args) -> float:
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=200_000, help="grid size per call")
    parser.add_argument("--repeats", type=int, default=7, help="timed repetitions (best wins)")
    args = parser.parse_args()

    phi = np.linspace(-0.04 * math.pi, 0.04 * math.pi, args.points)
    refl_args = (phi, phi, 0.99498744, 0.99949987, 0.97877474, 1.0, 1.0, True, False)

    # Warm-up also triggers JIT compilation so it is not counted below.
    amp = reflection_grid(*refl_args)
    _reflection_numpy(*refl_args)
    rho = np.abs(amp)
    theta = np.angle(amp)
    var_args = (rho, theta, rho[::-1].copy(), theta[::-1].copy(), 0.3679, 2.7183, 0.0)
    variance_grid(*var_args)
    _variance_numpy(*var_args)

    rows = [
        ("reflection_grid", reflection_grid, _reflection_numpy, refl_args),
        ("variance_grid", variance_grid, _variance_numpy, var_args),
    ]
    print(f"dispatch backend: {backend_name()}   points: {args.points}   repeats: {args.repeats}")
    print(f"{'kernel':<16} {'dispatch':>12} {'numpy':>12} {'speedup':>9}")
    for name, dispatch, fallback, call_args in rows:
        t_dispatch = _best_of(args.repeats, dispatch, *call_args)
        t_numpy = _best_of(args.repeats, fallback, *call_args)
        print(
            f"{name:<16} {t_dispatch * 1e3:>10.3f}ms {t_numpy * 1e3:>10.3f}ms"
            f" {t_numpy / t_dispatch:>8.2f}x"
        )


if __name__ == "__main__":
    main()
