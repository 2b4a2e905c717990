"""Small builders shared by the test modules."""

import random

from dgqs.algebra import make_dg_polynomial
from dgqs.builders import koszul_complex
from dgqs.module import BasedDGModule


def poly(n=1, t=None, N=12, field=None):
    t = [0] * n if t is None else list(t)
    return make_dg_polynomial(n, t, N) if field is None else make_dg_polynomial(n, t, N, field)


def koszul_uv(A):
    """Two generators u, v in degree 0 with d v = x u."""
    return BasedDGModule(A, ["u", "v"], [0, 0], {(0, 1): A.variable(0)})


def koszul(n, N=12):
    return koszul_complex(poly(n, N=N))


def times(a, elem):
    """Left multiplication of a module element (dict generator -> coefficient) by ``a``."""
    out = {}
    for j, c in elem.items():
        v = a * c
        if v:
            out[j] = v
    return out


def algebras():
    return [poly(1, [0]), poly(2, [0, 0]), poly(1, [1]), poly(2, [1, 0])]


def rng(seed):
    return random.Random(seed)
