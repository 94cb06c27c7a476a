#!/usr/bin/env python3
"""Benchmark the normal-ordering kernel: compiled extension vs pure Python.

Two workloads:
  * micro: raw term-map products on random structured operators;
  * macro: the dressed exchange-algebra check at two sites, which is the
    hottest call in the quantum identity suite.

The macro workload swaps the kernel module used by dstlab.weyl/quantum in
place, so both backends run the identical high-level code path.
"""
import random
import time

import dstlab.quantum as quantum
import dstlab.weyl as weyl
from dstlab import _weylkernel_py
from dstlab._rat import rat

try:
    from dstlab import _weylkernel
except ImportError:
    _weylkernel = None


def rand_terms(rng, n, n_terms, max_exp=3):
    t = {}
    for _ in range(n_terms):
        key = tuple(rng.randint(0, max_exp) for _ in range(2 * n))
        t[key] = rat(rng.randint(-9, 9), rng.randint(1, 7))
    return t


def bench_micro(kernel, n, n_terms, reps):
    rng = random.Random(1234)
    pairs = [(rand_terms(rng, n, n_terms), rand_terms(rng, n, n_terms))
             for _ in range(32)]
    t0 = time.perf_counter()
    for _ in range(reps):
        for ta, tb in pairs:
            kernel.trim(kernel.mul_into({}, ta, tb, n))
    return time.perf_counter() - t0


def bench_macro(kernel, reps=3):
    saved = (weyl._kernel, quantum._kernel)
    weyl._kernel = kernel
    quantum._kernel = kernel
    try:
        p = quantum.QParams(rat(1, 2), rat(2, 3), rat(5, 7))
        t0 = time.perf_counter()
        for _ in range(reps):
            ok, _ = quantum.q_reflection_dressed(2, p)
            assert ok
        return (time.perf_counter() - t0) / reps
    finally:
        weyl._kernel, quantum._kernel = saved


def main():
    backends = [("python", _weylkernel_py)]
    if _weylkernel is not None:
        backends.append(("cython", _weylkernel))
    print(f"{'workload':34s}" + "".join(f"{name:>12s}" for name, _ in backends)
          + ("     speedup" if len(backends) == 2 else ""))
    rows = [
        ("micro N=1, 8-term ops x32 x200", lambda k: bench_micro(k, 1, 8, 200)),
        ("micro N=2, 16-term ops x32 x50", lambda k: bench_micro(k, 2, 16, 50)),
        ("micro N=3, 24-term ops x32 x20", lambda k: bench_micro(k, 3, 24, 20)),
        ("macro dressed exchange N=2", bench_macro),
    ]
    for label, fn in rows:
        times = [fn(k) for _, k in backends]
        line = f"{label:34s}" + "".join(f"{t:11.3f}s" for t in times)
        if len(times) == 2:
            line += f"{times[0] / times[1]:11.2f}x"
        print(line)


if __name__ == "__main__":
    main()
