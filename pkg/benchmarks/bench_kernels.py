#!/usr/bin/env python3
"""Benchmark: compiled peak-search kernels vs the pure-numpy fallback.

Two workloads:

* kernel-only: 2-D local-maxima search over a batch of noisy 36 x 1001
  power maps (the per-trial hot spot of the Monte Carlo harness);
* end-to-end: a full single-arrival estimation trial (synthesis, noise,
  delay transform, coarse search, refinement), with the kernel backend
  swapped in place.

Run as ``python benchmarks/bench_kernels.py [--maps 200] [--trials 200]``.
"""

import argparse
import time

import numpy as np

from padpkit import (
    AntennaPattern,
    ArrayConfig,
    MpcTruth,
    SoundingConfig,
    estimate_haed,
    simulate_padp,
)
from padpkit import kernels
from padpkit.kernels import _pure

try:
    from padpkit.kernels import _core
except ImportError:
    _core = None

CFG = SoundingConfig(fc=37.5e9, bw=2e9, k=1001, pu=1.0, sigma2=1.0)
ARR = ArrayConfig(m=36)
PAT = AntennaPattern.gaussian(100.0, np.radians(10.0))


def make_maps(n):
    rng = np.random.default_rng(0)
    maps = []
    for i in range(n):
        mpc = MpcTruth(alpha=1.0, phase=0.0, tau=25e-9, phi=rng.uniform(0, 2 * np.pi))
        maps.append(simulate_padp([mpc], ARR, PAT, CFG, seed=i, keep_cfr=False).values)
    return maps


def time_kernel(impl, maps, threshold):
    t0 = time.perf_counter()
    total = 0
    for v in maps:
        rows, _ = impl.local_maxima_2d(v, threshold)
        total += rows.size
    return time.perf_counter() - t0, total


def time_pipeline(impl, trials):
    kernels.local_maxima_2d = impl.local_maxima_2d
    kernels.local_maxima_1d = impl.local_maxima_1d
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    found = 0
    for i in range(trials):
        mpc = MpcTruth(alpha=1.0, phase=0.0, tau=25e-9, phi=rng.uniform(0, 2 * np.pi))
        padp = simulate_padp([mpc], ARR, PAT, CFG, seed=1000 + i, keep_cfr=False)
        found += len(estimate_haed(padp, PAT))
    return time.perf_counter() - t0, found


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--maps", type=int, default=200)
    ap.add_argument("--trials", type=int, default=200)
    args = ap.parse_args()

    if _core is None:
        print("compiled kernels not built; rebuild with Cython to compare")
        return

    print(f"active backend at import: {kernels.backend_name()}")
    maps = make_maps(args.maps)
    threshold = float(np.median(maps[0]) / np.log(2.0) * np.log(maps[0].size) * 4.0)

    t_c, n_c = time_kernel(_core, maps, threshold)
    t_p, n_p = time_kernel(_pure, maps, threshold)
    assert n_c == n_p
    print(f"\n2-D local maxima over {args.maps} maps (36x1001), {n_c} peaks total:")
    print(f"  compiled : {t_c*1e3:8.1f} ms  ({t_c/args.maps*1e3:6.3f} ms/map)")
    print(f"  python   : {t_p*1e3:8.1f} ms  ({t_p/args.maps*1e3:6.3f} ms/map)")
    print(f"  speedup  : {t_p/t_c:8.2f}x")

    t_c2, f_c = time_pipeline(_core, args.trials)
    t_p2, f_p = time_pipeline(_pure, args.trials)
    assert f_c == f_p
    print(f"\nend-to-end estimation trial x {args.trials}:")
    print(f"  compiled : {t_c2*1e3:8.1f} ms  ({t_c2/args.trials*1e3:6.3f} ms/trial)")
    print(f"  python   : {t_p2*1e3:8.1f} ms  ({t_p2/args.trials*1e3:6.3f} ms/trial)")
    print(f"  speedup  : {t_p2/t_c2:8.2f}x")


if __name__ == "__main__":
    main()
