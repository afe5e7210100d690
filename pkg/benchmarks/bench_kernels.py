"""Compare the compiled and pure-Python kernel backends.

Kernel timings call both modules directly on the same inputs.  The
end-to-end timings run each workload in a fresh interpreter, because the
backend is chosen once at import (``QDUAL_PURE_PYTHON=1`` forces Python).

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit
from fractions import Fraction

import qdual._pykernels as P

try:
    import qdual._ckernels as C
except ImportError:
    C = None

WORKLOADS = {
    "default verify suite": "from qdual.cli import main; import io; main(['verify'], out=io.StringIO())",
    "dual round trip, n <= 12": (
        "import random; from fractions import Fraction\n"
        "from qdual.sequences import explicit_sequence, dual_sequence, dual_inverse\n"
        "rng = random.Random(1)\n"
        "for _ in range(50):\n"
        "    s = explicit_sequence([Fraction(rng.randint(-999, 999), rng.randint(1, 99)) for _ in range(13)])\n"
        "    star = dual_sequence(s)\n"
        "    [dual_inverse(star, n) for n in range(13)]"
    ),
    "q-Bernoulli numbers to 20": "from qdual.sequences import q_bernoulli; [q_bernoulli(n) for n in range(21)]",
}


def _poly(rng, n, frac):
    keys = rng.sample(range(-60, 60), n)
    if frac:
        return {k: Fraction(rng.randint(-99, 99) or 1, rng.randint(1, 30)) for k in keys}
    return {k: rng.randint(-99, 99) or 1 for k in keys}


def kernel_cases():
    rng = random.Random(7)
    a, b = _poly(rng, 60, False), _poly(rng, 60, False)
    fa, fb = _poly(rng, 60, True), _poly(rng, 60, True)
    prod = P.mul(a, b)
    maps = [_poly(rng, 40, True) for _ in range(30)]
    return {
        "mul, integer coefficients": lambda K: K.mul(a, b),
        "mul, rational coefficients": lambda K: K.mul(fa, fb),
        "add": lambda K: K.add(fa, fb),
        "sum_terms of 30 maps": lambda K: K.sum_terms(maps),
        "exact divide": lambda K: K.divide(prod, b),
        "dense gcd": lambda K: K.dense_gcd([1, 3, 3, 1] * 4 + [1], [1, 2, 1] * 4 + [1]),
    }


def best_of(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def end_to_end(code, pure, repeat):
    env = dict(os.environ)
    env["QDUAL_PURE_PYTHON"] = "1" if pure else "0"
    prog = f"import time; t = time.perf_counter()\n{code}\nprint(time.perf_counter() - t)"
    runs = [float(subprocess.run([sys.executable, "-c", prog], env=env, check=True,
                                 capture_output=True, text=True).stdout) for _ in range(repeat)]
    return min(runs)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if C is None:
        print("compiled kernels are not built; only the Python backend is available")
    print(f"{'kernel':32s} {'python':>12s} {'cython':>12s} {'speedup':>8s}")
    for name, fn in kernel_cases().items():
        tp = best_of(lambda: fn(P), args.repeat, 20)
        if C is None:
            print(f"{name:32s} {tp * 1e6:10.1f}us")
            continue
        tc = best_of(lambda: fn(C), args.repeat, 20)
        print(f"{name:32s} {tp * 1e6:10.1f}us {tc * 1e6:10.1f}us {tp / tc:7.2f}x")
    print()
    print(f"{'workload':32s} {'python':>12s} {'cython':>12s} {'speedup':>8s}")
    for name, code in WORKLOADS.items():
        tp = end_to_end(code, True, args.repeat)
        if C is None:
            print(f"{name:32s} {tp:11.3f}s")
            continue
        tc = end_to_end(code, False, args.repeat)
        print(f"{name:32s} {tp:11.3f}s {tc:11.3f}s {tp / tc:7.2f}x")


if __name__ == "__main__":
    main()
