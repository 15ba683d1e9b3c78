"""Compare the compiled and pure-Python float kernels.

Runs a micro benchmark on each kernel over random inputs, then the full
reduction on seeded random channels; prints one line per measurement.

    python benchmarks/bench_kernels.py [--reps N]
"""

import argparse
import time
import timeit

import numpy as np

from chanup import GenSpec, gen_random_channel, kernels, upgrade_reduce


def _inputs(p, n, rng):
    out = []
    for _ in range(n):
        cols = [tuple(float(v) for v in rng.dirichlet(np.ones(p)) * rng.uniform(0.01, 1))
                for _ in range(3)]
        j, k = rng.choice(p, size=2, replace=False)
        out.append((*cols, int(j), int(k)))
    return out


def bench_micro(reps):
    rng = np.random.default_rng(0)
    cases = _inputs(5, 2000, rng)
    for name, mod in sorted(kernels.BACKENDS.items()):
        t_split = timeit.timeit(
            lambda: [mod.split_float(m, a, b, j, k, 1e-12) for m, a, b, j, k in cases], number=reps)
        t_prop = timeit.timeit(
            lambda: [mod.proportional_float(a, b, 1e-10) for _, a, b, _, _ in cases], number=reps)
        n = reps * len(cases)
        print(f"{name:7s} split_float        {1e9 * t_split / n:8.1f} ns/call")
        print(f"{name:7s} proportional_float {1e9 * t_prop / n:8.1f} ns/call")


def bench_pipeline(reps):
    chans = [gen_random_channel(GenSpec(5, 1024, seed=s)) for s in range(reps)]
    prev = kernels.BACKEND
    try:
        for name in sorted(kernels.BACKENDS):
            kernels.use_backend(name)
            t0 = time.perf_counter()
            sizes = [upgrade_reduce(ch)[2].final_size for ch in chans]
            dt = (time.perf_counter() - t0) / len(chans)
            print(f"{name:7s} reduce p=5 q=1024  {dt:8.3f} s/channel  final sizes {sizes}")
    finally:
        kernels.use_backend(prev)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args()
    print(f"default backend: {kernels.BACKEND}")
    bench_micro(args.reps)
    bench_pipeline(args.reps)


if __name__ == "__main__":
    main()
