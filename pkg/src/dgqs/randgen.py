"""Seeded random instances: semi-free and categorically free modules,
projectors, ghosts and chain maps.  Everything takes a ``random.Random``."""

from __future__ import annotations

import random

from .homology import DegreewiseComplex
from .linalg import Span
from .module import (BasedDGModule, ModuleMap, compose, d_hom, direct_sum,
                     free_module, identity)
from .quillen_suslin import Projector


def random_scalar(rng: random.Random, field, nonzero: bool = False):
    choices = [-2, -1, 1, 2] if nonzero else [-2, -1, 0, 0, 1, 2]
    return field(rng.choice(choices))


def random_element(rng: random.Random, A, e: int, density: float = 0.6):
    if e < 0 or e > A.max_degree:
        return A.zero()
    terms = {(e, b): random_scalar(rng, A.field, True) for b in range(A.dim(e)) if rng.random() < density}
    return A.element(terms)


def _random_combination(rng, vectors, field):
    acc: dict = {}
    for v in vectors:
        c = random_scalar(rng, field)
        for k, x in v.items():
            nv = field.norm(acc.get(k, 0) + c * x)
            if nv:
                acc[k] = nv
            else:
                acc.pop(k, None)
    return acc


def _random_cocycle(rng, M: BasedDGModule, d: int, minimal: bool, exclude=()):
    """Random cocycle of ``M`` in degree ``d``; with ``minimal`` it lies in ``m M``."""
    C = DegreewiseComplex(M)
    if not C.reachable(d + 1) or not C.dim(d):
        return {}
    basis = C.basis(d)
    allowed = [k for k, (j, e, _) in enumerate(basis) if j not in exclude and (e >= 1 or not minimal)]
    if not allowed:
        return {}
    cols = [C.diff_matrix(d)[k] for k in allowed]
    ker = Span(cols, C.dim(d + 1), C.field).kernel()
    if not ker:
        return {}
    for _ in range(4):
        comb = _random_combination(rng, ker, C.field)
        if comb:
            break
    else:
        comb = ker[0]
    return C.to_element(d, {allowed[k]: c for k, c in comb.items()})


def random_semifree(rng: random.Random, A, n_gens: int, max_length: int = 3, minimal: bool = False,
                    base_degree: int = 0, spread: int = 2, names=None) -> BasedDGModule:
    """Semi-free module built by attaching generators along random cocycles."""
    names = list(names or [f"g{k}" for k in range(n_gens)])
    levels = [0]
    while len(levels) < n_gens:
        levels.append(min(levels[-1] + rng.choice([0, 1]), max_length))
    M = BasedDGModule(A, [], [], {})
    for k in range(n_gens):
        lower = [j for j in range(M.size) if levels[j] < levels[k]]
        if not lower:
            deg = base_degree + rng.randint(0, spread)
            M = BasedDGModule(A, list(M.names) + [names[k]], list(M.degrees) + [deg], M.diff)
            continue
        lo_deg = min(M.degrees[j] for j in lower)
        deg = lo_deg + rng.randint(0 if minimal else -1, spread)
        same = [j for j in range(M.size) if j not in lower]
        z = _random_cocycle(rng, M, deg + 1, minimal, exclude=same)
        diff = dict(M.diff)
        for j, a in z.items():
            diff[(j, k)] = a
        M = BasedDGModule(A, list(M.names) + [names[k]], list(M.degrees) + [deg], diff)
    return M


def random_catfree(rng: random.Random, A, n_pairs: int, base_degree: int = 0, spread: int = 2,
                   tag: str = "") -> BasedDGModule:
    names, degrees, diff = [], [], {}
    one = A.one()
    for k in range(n_pairs):
        d = base_degree + rng.randint(0, spread)
        names += [f"y{tag}{k}", f"z{tag}{k}"]
        degrees += [d, d + 1]
        diff[(2 * k + 1, 2 * k)] = one
    return BasedDGModule(A, names, degrees, diff)


def random_map(rng: random.Random, M: BasedDGModule, N: BasedDGModule, degree: int,
               allow=lambda i, j: True, density: float = 0.5) -> ModuleMap:
    A = M.algebra
    entries = {}
    for i in range(N.size):
        for j in range(M.size):
            if not allow(i, j) or rng.random() > density:
                continue
            a = random_element(rng, A, M.degrees[j] + degree - N.degrees[i])
            if a:
                entries[(i, j)] = a
    return ModuleMap(M, N, degree, entries)


def _levels(M):
    from .filtration import find_filtration
    return find_filtration(M).levels


def graph_projector(rng: random.Random, F1: BasedDGModule, F2: BasedDGModule,
                    catfree: bool = False, mix: bool = True):
    """Projector on ``F1 + F2`` whose image is the graph of a boundary ``F2 -> F1``.

    ``pi = T E T^-1`` with ``E`` the block projection onto ``F2`` and
    ``T = [[1, phi], [0, 1]]``, ``phi = d_Hom(h)``.  ``h`` respects the
    filtration levels (and maps cocycle generators into cocycle generators
    in the categorically free case), so ``pi`` preserves the filtration.
    When ``F2`` has the same shape as ``F1`` and ``mix`` is set, an extra
    scalar ``GL_2`` change of basis swaps in diagonal-type images.
    """
    S = direct_sum(F1, F2)
    F = S.module
    A = F.algebra
    if catfree:
        zs1 = {z for _, z in _pairs(F1)}
        zs2 = {z for _, z in _pairs(F2)}
        allow = lambda i, j: (j not in zs2) or (i in zs1)
    else:
        l1, l2 = _levels(F1), _levels(F2)
        allow = lambda i, j: l1[i] <= l2[j]
    h = random_map(rng, F2, F1, -1, allow)
    phi = d_hom(h)
    n1 = F1.size
    one = A.one()
    E = ModuleMap(F, F, 0, {(n1 + k, n1 + k): one for k in range(F2.size)})
    N = compose(S.inclusions[0], compose(phi, S.projections[1]))
    T, Tinv = identity(F) + N, identity(F) - N
    if mix and F1.same_shape(F2):
        G, Ginv = _gl2(rng, F, n1)
        T, Tinv = compose(G, T), compose(Tinv, Ginv)
    pi = compose(T, compose(E, Tinv))
    return F, Projector(pi)


def _gl2(rng, F, n):
    """Scalar block matrix ``[[a, b], [c, d]] (x) id`` on two copies and its inverse."""
    field = F.field
    while True:
        a, b, c, d = (random_scalar(rng, field) for _ in range(4))
        det = field.norm(a * d - b * c)
        if det:
            break
    inv = field.inv(det)
    one = F.algebra.one()

    def block(p, q, r, s):
        entries = {}
        for k in range(n):
            for (i, j), v in (((k, k), p), ((k, n + k), q), ((n + k, k), r), ((n + k, n + k), s)):
                if v:
                    entries[(i, j)] = one.scale(v)
        return ModuleMap(F, F, 0, entries)

    return block(a, b, c, d), block(field.norm(d * inv), field.norm(-b * inv), field.norm(-c * inv), field.norm(a * inv))


def _pairs(F):
    from .quillen_suslin import find_pairs
    return find_pairs(F) or []


def block_projector(F1: BasedDGModule, F2: BasedDGModule):
    """Projection of ``F1 + F2`` onto the first block."""
    S = direct_sum(F1, F2)
    one = S.module.algebra.one()
    return S.module, Projector(ModuleMap(S.module, S.module, 0, {(k, k): one for k in range(F1.size)}))


def averaging_projector(F1: BasedDGModule):
    """``(id + swap) / 2`` on ``F1 + F1``."""
    S = direct_sum(F1, F1)
    F = S.module
    n = F1.size
    half = F.algebra.one().scale(F.field.inv(F.field(2)))
    entries = {}
    for k in range(n):
        for i in (k, n + k):
            for j in (k, n + k):
                entries[(i, j)] = half
    return F, Projector(ModuleMap(F, F, 0, entries))


def random_ghost_from_free(rng: random.Random, F: BasedDGModule, N: BasedDGModule) -> ModuleMap:
    """Chain map out of a DG free module sending each generator to a coboundary."""
    assert not F.diff
    entries = {}
    for k, d in enumerate(F.degrees):
        pre = {}
        for j in range(N.size):
            a = random_element(rng, N.algebra, d - 1 - N.degrees[j])
            if a:
                pre[j] = a
        for j, a in N.apply_diff(pre).items():
            entries[(j, k)] = a
    return ModuleMap(F, N, 0, entries)


def random_ghost_from_summand(rng: random.Random, P: BasedDGModule, N: BasedDGModule) -> ModuleMap:
    """Same idea for a module with zero differential (a split summand of a free module)."""
    return random_ghost_from_free(rng, P, N)


def random_chain_map(rng: random.Random, M: BasedDGModule, N: BasedDGModule) -> ModuleMap:
    """A boundary ``d_Hom(h)`` plus, when ``M`` is DG free, random cocycle images."""
    f = d_hom(random_map(rng, M, N, -1))
    if not M.diff:
        extra = {}
        for k, d in enumerate(M.degrees):
            z = _random_cocycle(rng, N, d, minimal=False)
            for j, a in z.items():
                extra[(j, k)] = a
        f = f + ModuleMap(M, N, 0, extra)
    return f


def random_free(rng: random.Random, A, n_gens: int, base_degree: int = 0, spread: int = 2) -> BasedDGModule:
    return free_module(A, [base_degree + rng.randint(0, spread) for _ in range(n_gens)])


def add_contractible(rng: random.Random, M: BasedDGModule, count: int = 1) -> BasedDGModule:
    """``M`` plus cancellable pairs glued in by a random basis change, still valid."""
    A = M.algebra
    names, degrees = list(M.names), list(M.degrees)
    diff = dict(M.diff)
    one = A.one()
    for k in range(count):
        d = rng.choice(degrees) if degrees else 0
        names += [f"c{k}", f"b{k}"]
        degrees += [d, d + 1]
        diff[(len(names) - 1, len(names) - 2)] = one
    X = BasedDGModule(A, names, degrees, diff)
    # conjugate by a unipotent automorphism to hide the pairs
    n = X.size
    h = random_map(rng, X, X, 0, lambda i, j: i != j and degrees[i] >= degrees[j], 0.4)
    # keep it strictly "upper" in (degree, index) so id + h is invertible
    key = lambda i: (degrees[i], i)
    h = ModuleMap(X, X, 0, {(i, j): a for (i, j), a in h.entries.items() if key(i) > key(j)})
    U = identity(X) + h
    Uinv = identity(X)
    power = identity(X)
    for _ in range(n):
        power = compose(-h, power)
        if power.is_zero():
            break
        Uinv = Uinv + power
    # matrix of d in the new basis g'_j = U(g_j): U^-1 (d U) with d U = d_Hom(U) + U d
    D = ModuleMap(X, X, 1, diff)
    newd = compose(Uinv, d_hom(U) + compose(U, D))
    return BasedDGModule(A, names, degrees, newd.entries)
