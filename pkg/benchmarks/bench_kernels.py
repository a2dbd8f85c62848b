"""Time the compiled and pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import itertools
import timeit

import numpy as np

from dss_distill import kernels, make_density, tensor_power


def _eq5():
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = m[0, 3] = m[3, 0] = m[3, 3] = 0.25
    m[1, 1] = 0.5
    return make_density(m, 2, 2)


def _cases(rng):
    for d in (8, 16, 32, 64):
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        h = g + g.conj().T
        yield f"jacobi_eigh d={d}", lambda h=h: kernels.jacobi_eigh(h)
    big = tensor_power(_eq5(), 3)
    for m in (2, 3):
        subs = [list(s) for s in itertools.combinations(range(8), m)]
        yield (
            f"block_scan 8x8 m={m} ({len(subs) ** 2} pairs)",
            lambda subs=subs: kernels.block_scan(big.matrix, 8, subs, subs),
        )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = sorted(kernels.BACKENDS)
    print(f"{'case':40s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in _cases(np.random.default_rng(0)):
        times = {}
        for b in backends:
            kernels.use_backend(b)
            fn()
            times[b] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        row = f"{name:40s}" + "".join(f"{times[b] * 1e3:10.3f}ms" for b in backends)
        if len(backends) > 1:
            row += f"{times['python'] / times['cython']:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
