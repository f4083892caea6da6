#!/usr/bin/env python3
"""Timing comparison of the compiled kernels against the numpy fallback.

The micro section times both implementations on identical inputs across a
range of batch sizes.  The end-to-end section reruns two representative
workloads (the stale-rate triple quadrature and a crossing-count Monte
Carlo) in subprocesses with HOSKIP_BACKEND pinned, so each measurement goes
through the normal import-time selection path.

Usage: python benchmarks/bench_backends.py [--repeats N] [--skip-e2e]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from hoskip.backends import pykern

try:
    from hoskip.backends import _fastkern
except ImportError:
    _fastkern = None

from hoskip.datarate import _void_deficit_context


def best_of(fn, repeats):
    return min(timeit.repeat(fn, number=1, repeat=repeats))


def bench_deficit_sum(repeats):
    print("deficit_sum: batched void-disk Laplace exponent")
    print(f"{'batch':>8} {'numpy':>12} {'compiled':>12} {'speedup':>8}")
    coeff, w_beta = _void_deficit_context(0.4, 0.2, 3.0)
    coeff = np.asarray(coeff)
    w_beta = np.asarray(w_beta)
    rng = np.random.default_rng(0)
    for m in (15, 240, 1920, 15360):
        y = rng.gamma(2.0, 0.5, size=m)
        t_py = best_of(lambda: pykern.deficit_sum(coeff, w_beta, y), repeats)
        if _fastkern is None:
            print(f"{m:>8} {t_py * 1e6:>10.1f}us {'n/a':>12}")
            continue
        t_c = best_of(lambda: _fastkern.deficit_sum(coeff, w_beta, y),
                      repeats)
        assert np.allclose(pykern.deficit_sum(coeff, w_beta, y),
                           _fastkern.deficit_sum(coeff, w_beta, y),
                           rtol=1e-12)
        print(f"{m:>8} {t_py * 1e6:>10.1f}us {t_c * 1e6:>10.1f}us "
              f"{t_py / t_c:>7.1f}x")
    print()


def bench_segment_change_count(repeats):
    print("segment_change_count: nearest-index changes along a walk")
    print(f"{'points':>8} {'steps':>6} {'numpy':>12} {'compiled':>12} "
          f"{'speedup':>8}")
    rng = np.random.default_rng(1)
    for n_pts, n_steps in ((200, 64), (1000, 256), (4000, 1024)):
        px, py = rng.uniform(-10, 10, (2, n_pts))
        args = (px, py, 0.0, 0.0, 1.0, 0.0, 0.005, n_steps)
        t_py = best_of(lambda: pykern.segment_change_count(*args), repeats)
        if _fastkern is None:
            print(f"{n_pts:>8} {n_steps:>6} {t_py * 1e6:>10.1f}us {'n/a':>12}")
            continue
        t_c = best_of(lambda: _fastkern.segment_change_count(*args), repeats)
        assert (pykern.segment_change_count(*args)
                == _fastkern.segment_change_count(*args))
        print(f"{n_pts:>8} {n_steps:>6} {t_py * 1e6:>10.1f}us "
              f"{t_c * 1e6:>10.1f}us {t_py / t_c:>7.1f}x")
    print()


_E2E_SNIPPETS = {
    "tau2_exact (3, 3, u=0.3, reduced)": (
        "from hoskip.datarate import RateQuery, tau2_exact, REDUCED_ACCURACY\n"
        "from hoskip.params import NetworkParams\n"
        "tau2_exact(RateQuery(0.3, NetworkParams(3.0, 3.0), "
        "REDUCED_ACCURACY))\n"),
    "estimate_n1 (l=0.6, lam=3, 20k reps)": (
        "from hoskip.montecarlo import McConfig, estimate_n1\n"
        "estimate_n1(0.6, 3.0, McConfig(20000, 0))\n"),
}


def bench_end_to_end(repeats):
    print("end to end (subprocess per run, backend pinned via env)")
    print(f"{'workload':>38} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, body in _E2E_SNIPPETS.items():
        walls = {}
        for backend in ("python", "compiled"):
            env = dict(os.environ, HOSKIP_BACKEND=backend)
            code = ("import time\n" + body.replace(
                body.splitlines()[-1],
                "t0 = time.perf_counter()\n"
                + body.splitlines()[-1]
                + "\nprint(time.perf_counter() - t0)"))
            best = float("inf")
            for _ in range(repeats):
                proc = subprocess.run([sys.executable, "-c", code],
                                      capture_output=True, text=True, env=env)
                if proc.returncode != 0:
                    print(f"{name}: {backend} run failed:\n{proc.stderr}")
                    return
                best = min(best, float(proc.stdout.strip()))
            walls[backend] = best
        print(f"{name:>38} {walls['python']:>9.2f}s {walls['compiled']:>9.2f}s "
              f"{walls['python'] / walls['compiled']:>7.1f}x")
    print()


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5,
                    help="best-of-N timing (default 5)")
    ap.add_argument("--skip-e2e", action="store_true",
                    help="micro-benchmarks only")
    args = ap.parse_args()

    if _fastkern is None:
        print("compiled extension not importable; numpy timings only\n")
    bench_deficit_sum(args.repeats)
    bench_segment_change_count(args.repeats)
    if not args.skip_e2e:
        bench_end_to_end(max(2, args.repeats // 2))


if __name__ == "__main__":
    main()
