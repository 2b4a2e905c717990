"""Splitting idempotent summands of semi-free and categorically free modules.

Given a based module ``F`` and an idempotent chain map ``pi`` on it, the
image ``P = pi(F)`` is rebuilt as a based module in its own right:

* semi-free case: layer by layer along a semi-free filtration of ``F``,
  graded Nakayama picks a basis of ``P(r) / P(r-1)``; the differential of
  each new basis element is re-expressed over the earlier layers;
* categorically free case: pairs ``eps, d(eps)`` with ``eps`` a Nakayama
  basis of ``P`` modulo ``P(0) = A pi(cocycle generators)``.

The final identities ``proj inc = id_P`` and ``inc proj = pi`` are exact
matrix identities, so the output is an isomorphism onto ``im(pi)``
independent of any window; windows only bound the degreewise freeness
checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import (BetaNotBijective, ExpressionFailure, NotAProjector, NotClosed,
                     NotProjective, NotQuasiTrivial, QuotientNotFree, WindowTooSmall)
from .filtration import NotFilterable, SemifreeFiltration, find_filtration
from .homology import DegreewiseComplex, _window
from .linalg import Span, normalize_leading, rank
from .module import (BasedDGModule, ModuleMap, _accumulate, compose, d_hom, identity,
                     mapping_cone, validate_module)


class Projector:
    """Idempotent chain endomorphism, checked exactly on construction."""

    def __init__(self, f: ModuleMap):
        if f.source is not f.target or f.degree != 0:
            raise NotAProjector("a projector is a degree-0 endomorphism")
        if compose(f, f).entries != f.entries:
            raise NotAProjector("map is not idempotent")
        if not d_hom(f).is_zero():
            raise NotAProjector("map is not a chain map")
        self.map = f

    @property
    def module(self) -> BasedDGModule:
        return self.map.source

    def __call__(self, elem):
        return self.map(elem)

    def complement(self) -> ModuleMap:
        return identity(self.module) - self.map


# -- helpers over module elements -------------------------------------------------

def _times(b, elem: dict) -> dict:
    out = {}
    for j, a in elem.items():
        _accumulate(out, j, b * a)
    return out


class _Generated:
    """Homogeneous module elements ``s_k`` and degreewise spans of ``A s_k``."""

    def __init__(self, C: DegreewiseComplex):
        self.C = C
        self.items: list = []      # (degree, element)

    def add(self, degree: int, elem: dict) -> int:
        self.items.append((degree, elem))
        return len(self.items) - 1

    def products(self, d: int, which=None, min_e: int = 0):
        """Vectors ``b s_k`` in ``F^d`` and their labels ``(k, e, b)``."""
        A = self.C.algebra
        vecs, labels = [], []
        for k in (range(len(self.items)) if which is None else which):
            deg, elem = self.items[k]
            e = d - deg
            if e < min_e or e > A.max_degree:
                continue
            for b in range(A.dim(e)):
                prod = _times(A.basis_element(e, b), elem)
                vecs.append(self.C.to_vector(d, prod))
                labels.append((k, e, b))
        return vecs, labels

    def express(self, d: int, elem: dict, which=None):
        """Coefficients ``{k: AlgebraElement}`` with ``elem = sum c_k s_k``, or ``None``."""
        vecs, labels = self.products(d, which)
        target = self.C.to_vector(d, elem)
        if not target:
            return {}
        coeffs = Span(vecs, self.C.dim(d), self.C.field).express(target)
        if coeffs is None:
            return None
        A = self.C.algebra
        out: dict = {}
        for n, c in coeffs.items():
            k, e, b = labels[n]
            _accumulate(out, k, A.basis_element(e, b).scale(c))
        return out


def _nakayama_select(gen: _Generated, candidates, lower, d: int, field):
    """Greedy choice of candidates of degree ``d`` independent modulo ``m A S + lower``.

    ``candidates`` index into ``gen``; ``lower`` too (all degrees).
    """
    dim = gen.C.dim(d)
    decomposable, _ = gen.products(d, candidates, min_e=1)
    low, _ = gen.products(d, lower)
    base = decomposable + low
    chosen = []
    span = Span(base, dim, field)
    for k in candidates:
        deg, _ = gen.items[k]
        if deg != d:
            continue
        v = gen.C.to_vector(d, gen.items[k][1])
        resid, _ = span.reduce(v)
        if resid:
            chosen.append(k)
            base.append(v)
            span = Span(base, dim, field)
    return chosen


def _normalized(gen: _Generated, k: int) -> dict:
    d, elem = gen.items[k]
    C = gen.C
    return C.to_element(d, normalize_leading(C.to_vector(d, elem), C.field))


def extract_free_basis(F: BasedDGModule, pi: Projector, window, generators=None, lower=None):
    """Free basis ``omega`` of ``A pi(S) / A pi(L)`` for generator subsets ``S``, ``L``.

    ``generators`` defaults to all of ``F``'s generators and ``lower`` to
    none.  Returns ``[(degree, element)]``; freeness of the layer quotient is
    verified degree by degree on the window.
    """
    lo, hi = _window(window)
    C = DegreewiseComplex(F)
    gen = _Generated(C)
    S = [j for j in (range(F.size) if generators is None else generators)]
    L = list(lower or [])
    cand = [gen.add(F.degrees[j], pi(F.generator(j))) for j in S]
    low = [gen.add(F.degrees[j], pi(F.generator(j))) for j in L]
    omegas = _layer_basis(gen, cand, low, C, (lo, hi))
    return [(gen.items[k][0], _normalized(gen, k)) for k in omegas]


def _layer_basis(gen: _Generated, cand, low, C, window):
    field = C.field
    cand = [k for k in cand if gen.items[k][1]]
    cand.sort(key=lambda k: (gen.items[k][0], k))
    degrees = sorted({gen.items[k][0] for k in cand})
    chosen = []
    for d in degrees:
        chosen.extend(_nakayama_select(gen, cand, low, d, field))
    _check_free_layer(gen, chosen, cand, low, C, window)
    return chosen


def _check_free_layer(gen, chosen, cand, low, C, window):
    """``{b omega}`` independent modulo the lower part and spanning the layer, per degree."""
    lo, hi = window
    field = C.field
    for d in range(lo, hi + 1):
        if not C.reachable(d):
            raise WindowTooSmall(f"degree {d} of the window exceeds the algebra cap")
        lowv, _ = gen.products(d, low)
        r_low = rank(lowv, field)
        omv, _ = gen.products(d, chosen)
        r_both = rank(lowv + omv, field)
        if r_both - r_low != len(omv):
            raise NotProjective(f"layer basis is not A-free in degree {d}")
        allv, _ = gen.products(d, cand)
        if rank(lowv + omv + allv, field) != r_both:
            raise NotProjective(f"layer basis does not span in degree {d}")


# -- semi-projective splitting ----------------------------------------------------

@dataclass
class SplitResult:
    module: BasedDGModule
    filtration: SemifreeFiltration
    inc: ModuleMap
    proj: ModuleMap
    layer_log: list = dc_field(default_factory=list)
    transcript: dict = dc_field(default_factory=dict)


def split_semiprojective(F: BasedDGModule, pi: Projector, window, filtration=None) -> SplitResult:
    """Rebuild ``im(pi)`` as a semi-free module with a filtration no longer than ``F``'s."""
    lo, hi = _window(window)
    filt = filtration or find_filtration(F)
    if isinstance(filt, NotFilterable):
        raise NotProjective(f"input has no semi-free filtration (cycle {filt.cycle})")
    C = DegreewiseComplex(F)
    gen = _Generated(C)
    images = [gen.add(F.degrees[j], pi(F.generator(j))) for j in range(F.size)]

    omegas: list = []        # (layer, degree, element)
    log = []
    for r in range(filt.length + 1):
        cand = [images[j] for j in range(F.size) if filt.levels[j] == r]
        low = [images[j] for j in range(F.size) if filt.levels[j] < r]
        chosen = _layer_basis(gen, cand, low, C, (lo, hi))
        if not chosen:
            log.append({"layer": r, "dropped": True})
            continue
        log.append({"layer": r, "dropped": False, "basis_size": len(chosen)})
        omegas.extend((r, gen.items[k][0], _normalized(gen, k)) for k in chosen)

    # re-index surviving layers 0..n
    used = sorted({r for r, _, _ in omegas})
    new_level = {r: n for n, r in enumerate(used)}
    basis = _Generated(C)
    for _, d, elem in omegas:
        basis.add(d, elem)

    diff = {}
    for k, (r, d, elem) in enumerate(omegas):
        below = [m for m, (r2, _, _) in enumerate(omegas) if r2 < r]
        dw = F.apply_diff(elem)
        if not dw:
            continue
        coeffs = basis.express(d + 1, dw, below)
        if coeffs is None:
            raise ExpressionFailure(f"d(w{k}) is not in the span of lower layers")
        for m, a in coeffs.items():
            diff[(m, k)] = a
    names = [f"w{k}" for k in range(len(omegas))]
    P = BasedDGModule(F.algebra, names, [d for _, d, _ in omegas], diff)
    levels = tuple(new_level[r] for r, _, _ in omegas)
    Pfilt = SemifreeFiltration(levels, max(levels, default=-1))

    inc_entries = {}
    for k, (_, _, elem) in enumerate(omegas):
        for j, a in elem.items():
            inc_entries[(j, k)] = a
    inc = ModuleMap(P, F, 0, inc_entries)
    proj_entries = {}
    for j in range(F.size):
        d, img = gen.items[images[j]]
        coeffs = basis.express(d, img)
        if coeffs is None:
            raise ExpressionFailure(f"pi({F.names[j]}) is not in the span of the basis")
        for m, a in coeffs.items():
            proj_entries[(m, j)] = a
    proj = ModuleMap(F, P, 0, proj_entries)
    transcript = _verify_split(P, Pfilt, inc, proj, pi)
    transcript["window"] = [lo, hi]
    return SplitResult(P, Pfilt, inc, proj, log, transcript)


def _verify_split(P, Pfilt, inc, proj, pi) -> dict:
    rep = validate_module(P)
    checks = {
        "module_valid": rep.ok,
        "filtration_valid": Pfilt.check(P),
        "inc_chain": d_hom(inc).is_zero(),
        "proj_chain": d_hom(proj).is_zero(),
        "proj_inc_id": compose(proj, inc).entries == identity(P).entries,
        "inc_proj_pi": compose(inc, proj).entries == pi.map.entries,
    }
    bad = [k for k, v in checks.items() if not v]
    if bad:
        raise ExpressionFailure(f"split verification failed: {bad}")
    return checks


# -- cone presentation ---------------------------------------------------------------

@dataclass
class ConePresentation:
    submodule: BasedDGModule
    map: ModuleMap             # S^-1 V -> F'
    cone: BasedDGModule
    iso: ModuleMap             # cone(f) -> F


def cone_presentation(F: BasedDGModule, sub) -> ConePresentation:
    """Write ``F`` as the cone of a map into the closed generator subset ``sub``."""
    sub = sorted(set(sub))
    inside = set(sub)
    rest = [j for j in range(F.size) if j not in inside]
    for (i, j) in F.diff:
        if j in inside and i not in inside:
            raise NotClosed(f"d({F.names[j]}) leaves the submodule through {F.names[i]}")
        if j not in inside and i not in inside:
            raise QuotientNotFree(f"quotient differential has entry at ({F.names[i]}, {F.names[j]})")
    pos = {j: n for n, j in enumerate(sub)}
    Fsub = BasedDGModule(F.algebra, [F.names[j] for j in sub], [F.degrees[j] for j in sub],
                         {(pos[i], pos[j]): a for (i, j), a in F.diff.items() if j in inside})
    V = BasedDGModule(F.algebra, [f"s^-1({F.names[j]})" for j in rest], [F.degrees[j] + 1 for j in rest], {})
    f = ModuleMap(V, Fsub, 0, {(pos[i], n): a for n, j in enumerate(rest) for i, a in F.column(j)})
    cone = mapping_cone(f).module
    one = F.algebra.one()
    order = sub + rest           # cone generator k corresponds to F generator order[k]
    iso = ModuleMap(cone, F, 0, {(order[k], k): one for k in range(cone.size)})
    if not d_hom(iso).is_zero():
        raise NotClosed("cone presentation does not match the differential")
    return ConePresentation(Fsub, f, cone, iso)


# -- categorically projective splitting -------------------------------------------

def find_pairs(F: BasedDGModule):
    """``[(y, z)]`` with ``d y = z`` and ``d z = 0`` if ``F`` is categorically free, else ``None``."""
    pairs = []
    targets = set()
    for j in range(F.size):
        col = F.column(j)
        if not col:
            continue
        if len(col) != 1:
            return None
        z, a = col[0]
        if a != F.algebra.one() or F.column(z) or z in targets:
            return None
        pairs.append((j, z))
        targets.add(z)
    if 2 * len(pairs) != F.size:
        return None
    return pairs


@dataclass
class CatSplitResult:
    eps: list                  # [(degree, element of F)]
    module: BasedDGModule      # generators eps_k, d(eps_k)
    inc: ModuleMap
    proj: ModuleMap
    zero_layer: list           # free basis of P(0)
    transcript: dict = dc_field(default_factory=dict)


def _image_homology_dims(F, pi, C, window):
    """``dim H^d(im pi)`` from ranks of ``pi`` and ``d pi`` degreewise."""
    lo, hi = window
    field = C.field
    A = F.algebra

    def image_vectors(d):
        if C.dim(d) == 0:
            return []
        return [C.to_vector(d, pi({j: A.basis_element(e, b)})) for j, e, b in C.basis(d)]

    def d_image(d):
        return [C.to_vector(d + 1, F.apply_diff(C.to_element(d, v))) for v in image_vectors(d)]

    dims = {}
    for d in range(lo, hi + 1):
        dims[d] = rank(image_vectors(d), field) - rank(d_image(d), field) - rank(d_image(d - 1), field)
    return dims


def split_categorically_projective(F: BasedDGModule, pi: Projector, window, pairs=None) -> CatSplitResult:
    """Pairs ``{eps, d eps}`` spanning ``im(pi)`` freely."""
    lo, hi = _window(window)
    pairs = pairs or find_pairs(F)
    if pairs is None:
        raise NotProjective("input is not categorically free")
    C = DegreewiseComplex(F)
    for d in range(lo - 1, hi + 2):
        if not C.reachable(d):
            raise WindowTooSmall(f"degree {d} exceeds the algebra cap")
    hdims = _image_homology_dims(F, pi, C, (lo, hi))
    if any(hdims.values()):
        raise NotQuasiTrivial(f"H(im pi) nonzero on window: {hdims}")

    gen = _Generated(C)
    zs = [gen.add(F.degrees[z], pi(F.generator(z))) for _, z in pairs]
    ys = [gen.add(F.degrees[y], pi(F.generator(y))) for y, _ in pairs]
    zeta = _layer_basis(gen, zs, [], C, (lo, hi))
    eps_k = _layer_basis(gen, ys, zs, C, (lo, hi))
    eps = [(gen.items[k][0], _normalized(gen, k)) for k in eps_k]

    # beta: S^-1 (P / P(0)) -> P(0), eps -> d eps; bijective degreewise
    dgen = _Generated(C)
    for d, e in eps:
        dgen.add(d + 1, F.apply_diff(e))
    zgen_idx = list(range(len(zs)))
    field = C.field
    for d in range(lo, hi + 1):
        vecs, _ = dgen.products(d)
        p0, _ = gen.products(d, zgen_idx)
        r = rank(vecs, field)
        if r != len(vecs):
            raise BetaNotBijective(f"d(eps) not A-independent in degree {d}")
        if rank(vecs + p0, field) != r or rank(p0, field) != r:
            raise BetaNotBijective(f"d(eps) does not span P(0) in degree {d}")

    names, degrees, diff = [], [], {}
    one = F.algebra.one()
    for k, (d, _) in enumerate(eps):
        names += [f"eps{k}", f"d(eps{k})"]
        degrees += [d, d + 1]
        diff[(2 * k + 1, 2 * k)] = one
    P = BasedDGModule(F.algebra, names, degrees, diff)
    basis = _Generated(C)
    for d, e in eps:
        basis.add(d, e)
        basis.add(d + 1, F.apply_diff(e))
    inc_entries = {}
    for k, (_, elem) in enumerate(basis.items):
        for j, a in elem.items():
            inc_entries[(j, k)] = a
    inc = ModuleMap(P, F, 0, inc_entries)
    proj_entries = {}
    for j in range(F.size):
        img = pi(F.generator(j))
        coeffs = basis.express(F.degrees[j], img)
        if coeffs is None:
            raise ExpressionFailure(f"pi({F.names[j]}) is not spanned by the pairs")
        for m, a in coeffs.items():
            proj_entries[(m, j)] = a
    proj = ModuleMap(F, P, 0, proj_entries)
    checks = {
        "inc_chain": d_hom(inc).is_zero(),
        "proj_chain": d_hom(proj).is_zero(),
        "proj_inc_id": compose(proj, inc).entries == identity(P).entries,
        "inc_proj_pi": compose(inc, proj).entries == pi.map.entries,
    }
    if not all(checks.values()):
        raise BetaNotBijective(f"decomposition failed: {[k for k, v in checks.items() if not v]}")
    # dim P^d = sum over eps of dim A^(d - |eps|) + dim A^(d - |eps| - 1)
    A = F.algebra
    dims = {}
    for d in range(lo, hi + 1):
        expect = sum(A.dim(d - e) + A.dim(d - e - 1) for e, _ in eps)
        got = rank([C.to_vector(d, pi({j: A.basis_element(e, b)})) for j, e, b in C.basis(d)], field)
        if expect != got:
            raise BetaNotBijective(f"dimension mismatch in degree {d}: {expect} != {got}")
        dims[d] = got
    checks["dims"] = dims
    checks["window"] = [lo, hi]
    zero_layer = [(gen.items[k][0], _normalized(gen, k)) for k in zeta]
    return CatSplitResult(eps, P, inc, proj, zero_layer, checks)
