"""Independent reference implementations used as test oracles.

Nothing here imports the library's linear algebra; the point is to have
a second, naive route to the same numbers.
"""

from fractions import Fraction


def naive_rref(rows, ncols, p=0):
    """Dense Gauss-Jordan over Q (p = 0) or F_p; returns (pivot, row list) pairs."""
    def norm(x):
        return x % p if p else x

    def inv(x):
        return pow(x, -1, p) if p else 1 / x

    M = [[norm(Fraction(r.get(c, 0)) if not p else r.get(c, 0) % p) for c in range(ncols)] for r in rows]
    out = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        s = inv(M[r][c])
        M[r] = [norm(v * s) for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [norm(a - f * b) for a, b in zip(M[i], M[r])]
        out.append(c)
        r += 1
    return [(c, M[k]) for k, c in enumerate(out)]


def naive_rank(rows, ncols, p=0):
    return len(naive_rref(rows, ncols, p))


def poly_mul(a, b):
    """Polynomials as dict exponent-tuple -> Fraction."""
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def poly_add(a, b, s=1):
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + s * c
    return {e: c for e, c in out.items() if c}


def poly_diff(a, t):
    """Derivation of k[x_1..x_n] with |x_i| = 1 and d x_i = x_i * sum_j t_j x_j,
    by expanding every monomial as an ordered word and applying the graded
    Leibniz rule letter by letter."""
    n = len(t)
    out = {}
    for e, c in a.items():
        word = [i for i in range(n) for _ in range(e[i])]
        for pos, v in enumerate(word):
            sign = -1 if pos % 2 else 1
            for j, tj in enumerate(t):
                if not tj:
                    continue
                exps = list(e)
                exps[j] += 1
                key = tuple(exps)
                out[key] = out.get(key, 0) + sign * c * tj
    return {e: c for e, c in out.items() if c}


def koszul_homology_dims(n, lo, hi):
    """Koszul complex on n degree-one variables over k[x] with zero differential
    resolves k: cohomology k in degree 0 and nothing else."""
    return {d: (1 if d == 0 else 0) for d in range(lo, hi + 1)}
