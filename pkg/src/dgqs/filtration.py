"""Semi-free filtrations, DG free class, minimal models and cone length."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from graphlib import CycleError, TopologicalSorter

from .errors import Inconclusive, InternalSignError, SearchBudgetExceeded, WindowTooSmall
from .homology import is_quasi_iso
from .linalg import Span
from .module import (BasedDGModule, ModuleMap, _accumulate, _signed, compose, d_hom,
                     identity, validate_module)


@dataclass(frozen=True)
class SemifreeFiltration:
    levels: tuple          # level of each generator
    length: int            # number of strict steps; -1 for the zero module

    def layer(self, u: int) -> list:
        return [j for j, lv in enumerate(self.levels) if lv == u]

    def check(self, M: BasedDGModule) -> bool:
        if any(self.levels[i] >= self.levels[j] for (i, j) in M.diff):
            return False
        return set(self.levels) == set(range(self.length + 1))


@dataclass(frozen=True)
class NotFilterable:
    cycle: tuple           # generator names along a dependency cycle

    length = None

    def __bool__(self):
        return False


def find_filtration(M: BasedDGModule):
    """Longest-path levels on the dependency graph ``g_j -> g_i`` (``D[i, j] != 0``)."""
    deps = {j: set() for j in range(M.size)}
    for (i, j) in M.diff:
        deps[j].add(i)
    try:
        order = list(TopologicalSorter(deps).static_order())
    except CycleError as exc:
        return NotFilterable(tuple(M.names[k] for k in exc.args[1]))
    level = {}
    for j in order:  # dependencies come first
        level[j] = 1 + max((level[i] for i in deps[j]), default=-1)
    levels = tuple(level[j] for j in range(M.size))
    return SemifreeFiltration(levels, max(levels, default=-1))


# -- DG free class ---------------------------------------------------------------

@dataclass
class ClassBounds:
    lower: int
    upper: int
    certificate: dict = dc_field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.lower == self.upper


def _drop_level(M: BasedDGModule, j: int, levels):
    """Try ``g_j' = g_j + sum a_k g_k`` (lower-level ``k``) with ``d g_j'`` two levels down.

    The new column is ``d(g_j) + sum d(a_k g_k)``, linear in the unknown
    coefficients, so this is one exact linear solve.  Returns the new
    module or ``None``.
    """
    A = M.algebra
    top = levels[j] - 1
    keys: dict = {}

    def flat(elem):
        vec = {}
        for i, a in elem.items():
            if levels[i] >= top:
                for (d, b), c in a.terms.items():
                    vec[keys.setdefault((i, d, b), len(keys))] = c
        return vec

    target = flat({i: a for i, a in M.column(j)})
    if not target:
        return None
    unknowns, cols = [], []
    for k in range(M.size):
        e = M.degrees[j] - M.degrees[k]
        if k == j or levels[k] > top or e < 0 or e > A.max_degree:
            continue
        for b in range(A.dim(e)):
            unknowns.append((k, e, b))
            cols.append(flat(M.apply_diff({k: A.basis_element(e, b)})))
    neg = {k: M.field.norm(-v) for k, v in target.items()}
    coeffs = Span(cols, len(keys), M.field).express(neg)
    if coeffs is None:
        return None
    change: dict = {}
    for u, c in coeffs.items():
        k, e, b = unknowns[u]
        _accumulate(change, k, A.basis_element(e, b).scale(c))
    U = ModuleMap(M, M, 0, {(k, j): a for k, a in change.items()}) + identity(M)
    Uinv = ModuleMap(M, M, 0, {(k, j): -a for k, a in change.items()}) + identity(M)
    D = ModuleMap(M, M, 1, M.diff)
    new = compose(Uinv, d_hom(U) + compose(U, D))
    return BasedDGModule(M.algebra, M.names, M.degrees, new.entries), change


def _hill_climb(M: BasedDGModule, max_rounds: int = 200):
    """Lower levels one generator at a time by exact ``_drop_level`` moves."""
    cur = M
    log = []
    for _ in range(max_rounds):
        filt = find_filtration(cur)
        if isinstance(filt, NotFilterable):
            return cur, None, log
        for j in sorted(range(cur.size), key=lambda j: (-filt.levels[j], j)):
            if filt.levels[j] == 0:
                continue
            res = _drop_level(cur, j, filt.levels)
            if res is not None:
                cur, change = res
                log.append({"generator": cur.names[j],
                            "add": {cur.names[k]: repr(a) for k, a in sorted(change.items())}})
                break
        else:
            return cur, filt.length, log
    return cur, find_filtration(cur).length, log


def dg_free_class(M: BasedDGModule, mode: str = "fixed_basis", cap: int = 12,
                  window=None, lower_hint: int | None = None) -> ClassBounds:
    """Bounds on the DG free class.

    ``fixed_basis``: upper bound is the longest path over the given basis.
    ``exhaustive``: additionally lowers generators by exact A-linear basis
    changes (``_drop_level``) and, given a window, uses the ghost-tower
    witness as a lower bound.
    """
    trivial_lower = 0 if M.size else -1
    if mode == "fixed_basis" and M.diff:
        trivial_lower = 1
    filt = find_filtration(M)
    cert = {"mode": mode}
    if mode == "fixed_basis":
        if isinstance(filt, NotFilterable):
            raise SearchBudgetExceeded(f"no semi-free filtration over the given basis (cycle {filt.cycle})")
        cert["levels"] = list(filt.levels)
        lower = max(trivial_lower, lower_hint if lower_hint is not None else trivial_lower)
        return ClassBounds(min(lower, filt.length), filt.length, cert)
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    if M.size > cap:
        raise SearchBudgetExceeded(f"{M.size} generators exceed exhaustive cap {cap}")
    best, upper, log = _hill_climb(M)
    if upper is None:
        raise SearchBudgetExceeded("no filterable basis found within the search")
    if not validate_module(best).ok:
        raise InternalSignError("basis change broke the differential")
    cert["basis_changes"] = log
    cert["levels"] = list(find_filtration(best).levels)
    lower = trivial_lower
    if lower_hint is not None:
        lower = max(lower, lower_hint)
    elif window is not None and M.size:
        from .invariants import ghost_witness
        lower = max(lower, ghost_witness(M, upper, window).value)
        cert["ghost_witness"] = lower
    return ClassBounds(min(lower, upper), upper, cert)


# -- minimal models ----------------------------------------------------------------

@dataclass
class MinimalModel:
    module: BasedDGModule
    p: ModuleMap               # M -> G
    iota: ModuleMap            # G -> M
    homotopy: ModuleMap        # id_M - iota p = d s + s d
    window: tuple
    log: list
    certified: bool            # H(p) bijective on the window


def _pick_pivot(M: BasedDGModule, alive):
    best = None
    for (i, j), a in M.diff.items():
        if i in alive and j in alive and a.degrees == {0}:
            key = (M.degrees[i], j, i)
            if best is None or key < best[0]:
                best = (key, i, j, a.coefficient(0, 0))
    return best


def _cancel(M: BasedDGModule, i: int, j: int, c):
    """Cancel the unit entry ``D[i, j] = c``; returns ``(G, p, iota, sigma)``."""
    A, F = M.algebra, M.field
    cinv = F.inv(c)
    keep = [k for k in range(M.size) if k not in (i, j)]
    pos = {k: n for n, k in enumerate(keep)}
    G_diff: dict = {}
    for (k, l), a in M.diff.items():
        if k in pos and l in pos:
            _accumulate(G_diff, (pos[k], pos[l]), a)
    row_i = {l: a for (r, l), a in M.diff.items() if r == i and l in pos}
    col_j = {k: a for k, a in M.column(j) if k in pos}
    for l, dil in row_i.items():
        for k, dkj in col_j.items():
            _accumulate(G_diff, (pos[k], pos[l]), -(dil * dkj).scale(cinv))
    G = BasedDGModule(A, [M.names[k] for k in keep], [M.degrees[k] for k in keep], G_diff)

    one = A.one()
    p_entries = {(pos[l], l): one for l in keep}
    for k, dkj in col_j.items():
        p_entries[(pos[k], i)] = -dkj.scale(cinv)
    iota_entries = {(l, pos[l]): one for l in keep}
    for l, dil in row_i.items():
        a = dil.scale(cinv)
        iota_entries[(j, pos[l])] = -_signed(a, a.degree)
    sigma = ModuleMap(M, M, -1, {(j, i): one.scale(cinv)})
    return G, ModuleMap(M, G, 0, p_entries), ModuleMap(G, M, 0, iota_entries), sigma


def minimize(M: BasedDGModule, window=None, certify: bool = True) -> MinimalModel:
    """Cancel scalar differential entries until the module is minimal.

    Produces chain maps ``p: M -> G`` and ``iota: G -> M`` with
    ``p iota = id`` exactly and a homotopy ``id - iota p = d s + s d``.
    """
    cur = M
    p, iota = identity(M), identity(M)
    sigma = ModuleMap(M, M, -1, {})
    log = []
    while True:
        pick = _pick_pivot(cur, set(range(cur.size)))
        if pick is None:
            break
        _, i, j, c = pick
        log.append({"row": cur.names[i], "col": cur.names[j], "pivot": cur.field.to_str(c)})
        G, p1, iota1, s1 = _cancel(cur, i, j, c)
        # s_total = s + iota (s1) p  (iota, p: the composites so far)
        sigma = sigma + compose(iota, compose(s1, p))
        p = compose(p1, p)
        iota = compose(iota, iota1)
        cur = G
    rep = validate_module(cur)
    if rep.violations:
        raise InternalSignError(f"minimal model failed validation: {rep.violations[:3]}")
    if compose(p, iota).entries != identity(cur).entries:
        raise InternalSignError("p o iota is not the identity")
    if d_hom(sigma).entries != (identity(M) - compose(iota, p)).entries:
        raise InternalSignError("cancellation homotopy does not verify")
    if d_hom(p).entries or d_hom(iota).entries:
        raise InternalSignError("cancellation maps are not chain maps")
    certified = False
    if certify and window is not None:
        certified = is_quasi_iso(p, window)
        if not certified:
            raise InternalSignError("H(p) is not bijective on the window")
    return MinimalModel(cur, p, iota, sigma, tuple(window) if window else None, log, certified)


# -- cone length --------------------------------------------------------------------

@dataclass
class ConeLength:
    lower: int
    upper: int
    certificate: dict

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self):
        return self.upper if self.exact else None


def cone_length(M: BasedDGModule, window, exhaustive_cap: int = 12, strict: bool = True) -> ConeLength:
    """Cone length via the minimal model: ``-1`` when it is empty, else sandwiched bounds."""
    mm = minimize(M, window)
    G = mm.module
    cert = {"window": list(window), "cancellations": mm.log, "minimal_generators": list(G.names)}
    if not G.size:
        # the cancellation homotopy proves M contractible, not just acyclic on the window
        cert["quasi_trivial"] = True
        return ConeLength(-1, -1, cert)
    fixed = dg_free_class(G)
    upper = fixed.upper
    cert["levels"] = fixed.certificate["levels"]
    from .invariants import ghost_witness
    witness = ghost_witness(G, upper, window)
    if witness.null_at is None:
        raise WindowTooSmall(f"composite of {upper + 1} tower maps is not null-homotopic; covers not certified")
    # a nonzero differential says nothing once the basis may change; only the witness bounds cl below
    lower = witness.value
    cert["ghost_witness"] = witness.value
    if lower < upper and G.size <= exhaustive_cap:
        ex = dg_free_class(G, "exhaustive", exhaustive_cap, lower_hint=lower)
        upper = min(upper, ex.upper)
        cert["exhaustive"] = ex.certificate
    res = ConeLength(lower, upper, cert)
    if strict and not res.exact:
        raise Inconclusive(f"cone length between {lower} and {upper}", lower, upper)
    return res
