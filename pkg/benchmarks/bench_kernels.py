"""Compare the compiled row-reduction kernel with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Two workloads:

* ``captured``: every matrix the library reduces while computing the
  ghost length of the three-variable Koszul complex and minimizing a
  batch of random modules (over Q and over F_p), recorded and replayed;
* ``random``: random sparse matrices.  Over Q these usually overflow
  64-bit arithmetic and exercise the compiled object-integer fallback.

Outputs of both kernels are compared before timing is reported.
"""

from __future__ import annotations

import argparse
import random
import time

from dgqs import _rref_py, kernels

try:
    from dgqs import _rref
except ImportError:
    _rref = None


def capture():
    """Run representative computations and record the kernel inputs."""
    from dgqs.algebra import make_dg_polynomial
    from dgqs.builders import koszul_complex
    from dgqs.field import Field
    from dgqs.filtration import minimize
    from dgqs.invariants import ghost_length
    from dgqs.randgen import add_contractible, random_semifree

    calls = []
    orig_int, orig_mod = kernels.rref_int, kernels.rref_mod

    def rec_int(rows):
        rows = [dict(r) for r in rows]
        calls.append(("int", rows, None))
        return orig_int(rows)

    def rec_mod(rows, p):
        rows = [dict(r) for r in rows]
        calls.append(("mod p", rows, p))
        return orig_mod(rows, p)

    kernels.rref_int, kernels.rref_mod = rec_int, rec_mod
    try:
        A = make_dg_polynomial(3, [0, 0, 0], 12)
        ghost_length(koszul_complex(A), (0, 8))
        rng = random.Random(3)
        for field in (Field(0), Field(32003)):
            B = make_dg_polynomial(2, [1, 0], 12, field)
            for _ in range(10):
                M = add_contractible(rng, random_semifree(rng, B, 4, minimal=True), 2)
                minimize(M, (-2, 10))
    finally:
        kernels.rref_int, kernels.rref_mod = orig_int, orig_mod
    return calls


def random_calls(rng, sizes, density, prime):
    calls = []
    for n in sizes:
        rows = [{c: v for c in range(n) if rng.random() < density and (v := rng.randint(-5, 5))}
                for _ in range(n)]
        calls.append(("int", rows, None))
        calls.append(("mod p", rows, prime))
    return calls


def run(calls, kernel):
    out = []
    for kind, rows, p in calls:
        copy = [dict(r) for r in rows]
        out.append(kernel.rref_int(copy) if kind == "int" else kernel.rref_mod(copy, p))
    return out


def timed(calls, kernel, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = run(calls, kernel)
        best = min(best, time.perf_counter() - t0)
    return best, out


def report(label, calls, repeat):
    for kind in ("int", "mod p"):
        sub = [c for c in calls if c[0] == kind]
        if not sub:
            continue
        tp, op = timed(sub, _rref_py, repeat)
        tc, oc = timed(sub, _rref, repeat)
        if op != oc:
            raise SystemExit(f"kernels disagree on {label}/{kind}")
        print(f"{label:9} {kind:6} {len(sub):>6} {tp:>10.4f} {tc:>11.4f} {tp / tc:>7.1f}x")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[40, 80, 160])
    ap.add_argument("--density", type=float, default=0.15)
    ap.add_argument("--prime", type=int, default=32003)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    if _rref is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation` first")
        return
    print(f"{'workload':9} {'field':6} {'calls':>6} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    report("captured", capture(), args.repeat)
    report("random", random_calls(random.Random(args.seed), args.sizes, args.density, args.prime), args.repeat)


if __name__ == "__main__":
    main()
