"""Based DG modules: finitely many generators, differential as an algebra matrix.

Conventions (all derived from the element-wise rules, nothing else):

* ``d(g_j) = sum_i D[i, j] g_i`` and ``d(a m) = d(a) m + (-1)^|a| a d(m)``.
* a map ``f`` of degree ``r`` has ``f(g_j) = sum_i f[i, j] h_i`` and
  ``f(a m) = (-1)^(r |a|) a f(m)``.
* suspension: ``(S^i M)^j = M^(j+i)``, ``d(S^i m) = (-1)^i S^i d(m)``,
  ``a (S^i m) = (-1)^(|a| i) S^i (a m)``.
* ``d_Hom(f) = d_N f - (-1)^r f d_M``; homotopies satisfy
  ``f - g = d_N s + s d_M``.

Matrices are sparse ``dict[(row, col)] -> AlgebraElement``.
"""

from __future__ import annotations

from typing import NamedTuple

from .algebra import AlgebraElement, GradedAlgebra, ValidationReport
from .errors import CapExceeded, SignCheckFailed
from .linalg import Span


def _signed(a: AlgebraElement, exponent: int) -> AlgebraElement:
    return -a if exponent % 2 else a


def _accumulate(acc: dict, key, value: AlgebraElement):
    if not value:
        return
    prev = acc.get(key)
    new = value if prev is None else prev + value
    if new:
        acc[key] = new
    else:
        acc.pop(key, None)


def _columns(entries: dict) -> dict:
    cols: dict = {}
    for (i, j), a in entries.items():
        cols.setdefault(j, []).append((i, a))
    for j in cols:
        cols[j].sort(key=lambda t: t[0])
    return cols


def _clean(entries: dict) -> dict:
    return {k: entries[k] for k in sorted(entries) if entries[k]}


class BasedDGModule:
    """Graded-free DG module with explicit generators ``g_1 .. g_m``."""

    def __init__(self, algebra: GradedAlgebra, names, degrees, diff=None):
        self.algebra = algebra
        self.names = tuple(names)
        self.degrees = tuple(int(d) for d in degrees)
        if len(self.names) != len(self.degrees):
            raise ValueError("names and degrees differ in length")
        self.diff = _clean(dict(diff or {}))
        for (i, j) in self.diff:
            if not (0 <= i < self.size and 0 <= j < self.size):
                raise ValueError(f"differential entry {(i, j)} out of range")
        self._cols = None

    @property
    def size(self) -> int:
        return len(self.names)

    def __len__(self):
        return self.size

    @property
    def field(self):
        return self.algebra.field

    @property
    def min_degree(self):
        return min(self.degrees, default=None)

    @property
    def max_degree(self):
        return max(self.degrees, default=None)

    def entry_degree(self, i: int, j: int) -> int:
        return self.degrees[j] + 1 - self.degrees[i]

    def column(self, j: int) -> list:
        if self._cols is None:
            self._cols = _columns(self.diff)
        return self._cols.get(j, [])

    def is_minimal(self) -> bool:
        return all(0 not in a.degrees for a in self.diff.values())

    def is_dg_free(self) -> bool:
        return not self.diff

    def generator(self, j: int) -> dict:
        return {j: self.algebra.one()}

    def apply_diff(self, elem: dict) -> dict:
        """``d`` of a module element given as ``{generator: coefficient}``."""
        out: dict = {}
        for j, a in elem.items():
            _accumulate(out, j, a.d())
            sa = _signed(a, a.degree or 0)
            for i, dij in self.column(j):
                _accumulate(out, i, sa * dij)
        return out

    def same_shape(self, other: "BasedDGModule") -> bool:
        return self.degrees == other.degrees and self.diff == other.diff

    def renamed(self, names) -> "BasedDGModule":
        return BasedDGModule(self.algebra, names, self.degrees, self.diff)

    def __repr__(self):
        gens = ", ".join(f"{n}:{d}" for n, d in zip(self.names, self.degrees))
        return f"BasedDGModule([{gens}], {len(self.diff)} nonzero entries)"


class ModuleMap:
    """Degree-``r`` A-linear map between based modules."""

    def __init__(self, source: BasedDGModule, target: BasedDGModule, degree: int, entries=None):
        if source.algebra is not target.algebra:
            raise ValueError("source and target live over different algebras")
        self.source = source
        self.target = target
        self.degree = int(degree)
        self.entries = _clean(dict(entries or {}))
        for (i, j) in self.entries:
            if not (0 <= i < target.size and 0 <= j < source.size):
                raise ValueError(f"map entry {(i, j)} out of range")
        self._cols = None

    @property
    def algebra(self):
        return self.source.algebra

    def entry_degree(self, i: int, j: int) -> int:
        return self.source.degrees[j] + self.degree - self.target.degrees[i]

    def column(self, j: int) -> list:
        if self._cols is None:
            self._cols = _columns(self.entries)
        return self._cols.get(j, [])

    def __call__(self, elem: dict) -> dict:
        out: dict = {}
        r = self.degree
        for j, a in elem.items():
            sa = _signed(a, r * (a.degree or 0))
            for i, fij in self.column(j):
                _accumulate(out, i, sa * fij)
        return out

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        self._check_parallel(other)
        acc = dict(self.entries)
        for k, v in other.entries.items():
            _accumulate(acc, k, v)
        return ModuleMap(self.source, self.target, self.degree, acc)

    def __neg__(self):
        return ModuleMap(self.source, self.target, self.degree, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.degree, {k: v.scale(c) for k, v in self.entries.items()})

    def __eq__(self, other):
        if not isinstance(other, ModuleMap):
            return NotImplemented
        return (self.source is other.source and self.target is other.target
                and self.degree == other.degree and self.entries == other.entries)

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.entries

    def is_chain_map(self) -> bool:
        return d_hom(self).is_zero()

    def _check_parallel(self, other):
        if other.source is not self.source or other.target is not self.target or other.degree != self.degree:
            raise ValueError("maps are not parallel")

    def __repr__(self):
        return f"ModuleMap(deg {self.degree}, {self.source.size}->{self.target.size}, {len(self.entries)} entries)"


# A homotopy is just a degree -1 map; the witness identity is checked where used.
Homotopy = ModuleMap


def identity(M: BasedDGModule) -> ModuleMap:
    one = M.algebra.one()
    return ModuleMap(M, M, 0, {(j, j): one for j in range(M.size)})


def zero_map(M: BasedDGModule, N: BasedDGModule, degree: int = 0) -> ModuleMap:
    return ModuleMap(M, N, degree, {})


def zero_module(algebra: GradedAlgebra) -> BasedDGModule:
    return BasedDGModule(algebra, [], [])


def free_module(algebra: GradedAlgebra, degrees, names=None) -> BasedDGModule:
    """DG free module ``sum A e_i`` with zero differential."""
    degrees = list(degrees)
    names = names or [f"e{k}" for k in range(len(degrees))]
    return BasedDGModule(algebra, names, degrees, {})


# -- validation ----------------------------------------------------------------

def validate_module(M: BasedDGModule) -> ValidationReport:
    """Homogeneity and ``d^2 = 0`` in matrix form; notes minimality."""
    rep = ValidationReport()
    for (i, j), a in M.diff.items():
        want = M.entry_degree(i, j)
        if a.degrees != {want}:
            rep.add("homogeneity", (M.names[i], M.names[j]), f"expected degree {want}, got {sorted(a.degrees)}")
    if rep.violations:
        return rep.sort()
    sq = _d_squared(M)
    for (k, j), a in sorted(sq.items()):
        rep.add("d_squared", (M.names[k], M.names[j]), repr(a))
    rep.notes["minimal"] = M.is_minimal()
    return rep.sort()


def _d_squared(M: BasedDGModule) -> dict:
    # coefficient of g_k in d^2(g_j): d(D_kj) + sum_i (-1)^|D_ij| D_ij D_ki
    out: dict = {}
    for (k, j), a in M.diff.items():
        _accumulate(out, (k, j), a.d())
    for j in range(M.size):
        for i, dij in M.column(j):
            s = _signed(dij, M.entry_degree(i, j))
            for k, dki in M.column(i):
                _accumulate(out, (k, j), s * dki)
    return out


def check_map(f: ModuleMap) -> ValidationReport:
    rep = ValidationReport()
    for (i, j), a in f.entries.items():
        want = f.entry_degree(i, j)
        if a.degrees != {want}:
            rep.add("homogeneity", (f.target.names[i], f.source.names[j]), f"expected degree {want}")
    if not rep.violations:
        rep.notes["chain_map"] = f.is_chain_map()
    return rep.sort()


# -- maps ------------------------------------------------------------------------

def compose(g: ModuleMap, f: ModuleMap) -> ModuleMap:
    """``g o f``; ``(g f)[k, j] = sum_i (-1)^(|g| |f_ij|) f_ij g_ki``."""
    if f.target is not g.source:
        raise ValueError("compose: target(f) is not source(g)")
    s = g.degree
    acc: dict = {}
    for j in range(f.source.size):
        for i, fij in f.column(j):
            sf = _signed(fij, s * f.entry_degree(i, j))
            for k, gki in g.column(i):
                _accumulate(acc, (k, j), sf * gki)
    return ModuleMap(f.source, g.target, f.degree + g.degree, acc)


def d_hom(f: ModuleMap) -> ModuleMap:
    """``d_N f - (-1)^r f d_M`` as a degree ``r+1`` map."""
    M, N, r = f.source, f.target, f.degree
    acc: dict = {}
    for (k, j), a in f.entries.items():
        _accumulate(acc, (k, j), a.d())
    for j in range(M.size):
        for i, fij in f.column(j):
            s = _signed(fij, f.entry_degree(i, j))
            for k, dki in N.column(i):
                _accumulate(acc, (k, j), s * dki)
    # f d_M: (f d)[k, l] = sum_j (-1)^(r |D_jl|) D_jl f_kj
    # the leading minus and (-1)^r fold into the exponent r + 1
    for l in range(M.size):
        for j, djl in M.column(l):
            sd = _signed(djl, r * M.entry_degree(j, l) + r + 1)
            for k, fkj in f.column(j):
                _accumulate(acc, (k, l), sd * fkj)
    return ModuleMap(M, N, r + 1, acc)


def is_homotopy(f: ModuleMap, g: ModuleMap, sigma: ModuleMap) -> bool:
    """``f - g == d sigma + sigma d`` exactly."""
    return d_hom(sigma).entries == (f - g).entries


# -- constructions ---------------------------------------------------------------

def _suspended_name(name: str, i: int) -> str:
    return f"s({name})" if i == 1 else f"s^{i}({name})"


def suspend(M: BasedDGModule, i: int) -> BasedDGModule:
    """``S^i M``: degrees drop by ``i``, ``D'[k, j] = (-1)^(i (1 + |D_kj|)) D[k, j]``."""
    if i == 0:
        return M
    diff = {(k, j): _signed(a, i * (1 + M.entry_degree(k, j))) for (k, j), a in M.diff.items()}
    return BasedDGModule(M.algebra, [_suspended_name(n, i) for n in M.names], [d - i for d in M.degrees], diff)


def suspend_map(f: ModuleMap, i: int, source=None, target=None) -> ModuleMap:
    """``S^i f`` with ``(S^i f)(S^i m) = (-1)^(i |f|) S^i f(m)``."""
    source = source or suspend(f.source, i)
    target = target or suspend(f.target, i)
    r = f.degree
    entries = {(k, j): _signed(a, i * r + i * f.entry_degree(k, j)) for (k, j), a in f.entries.items()}
    return ModuleMap(source, target, r, entries)


class DirectSum(NamedTuple):
    module: BasedDGModule
    inclusions: tuple
    projections: tuple


def direct_sum(*modules: BasedDGModule) -> DirectSum:
    if not modules:
        raise ValueError("need at least one summand")
    A = modules[0].algebra
    names, degrees, diff = [], [], {}
    offsets = []
    for M in modules:
        if M.algebra is not A:
            raise ValueError("summands over different algebras")
        off = len(names)
        offsets.append(off)
        names.extend(M.names)
        degrees.extend(M.degrees)
        for (i, j), a in M.diff.items():
            diff[(i + off, j + off)] = a
    if len(set(names)) != len(names):
        names = [f"{n}#{k}" for k, M in enumerate(modules) for n in M.names]
    S = BasedDGModule(A, names, degrees, diff)
    one = A.one()
    incs, projs = [], []
    for M, off in zip(modules, offsets):
        incs.append(ModuleMap(M, S, 0, {(j + off, j): one for j in range(M.size)}))
        projs.append(ModuleMap(S, M, 0, {(j, j + off): one for j in range(M.size)}))
    return DirectSum(S, tuple(incs), tuple(projs))


class Cone(NamedTuple):
    module: BasedDGModule
    iota: ModuleMap
    pi: ModuleMap


def mapping_cone(f: ModuleMap, check: bool = True) -> Cone:
    """``Cone(f) = N + S M`` with ``d(n, S m) = (f(m) + d n, -S d m)``."""
    if f.degree != 0:
        raise ValueError("mapping cone needs a degree-0 map")
    M, N = f.source, f.target
    SM = suspend(M, 1)
    n = N.size
    diff = dict(N.diff)
    for (i, j), a in f.entries.items():
        diff[(i, n + j)] = a
    for (k, j), a in SM.diff.items():
        diff[(n + k, n + j)] = a
    names = list(N.names) + list(SM.names)
    if len(set(names)) != len(names):
        names = [f"{x}#N" for x in N.names] + [f"{x}#M" for x in SM.names]
    C = BasedDGModule(N.algebra, names, list(N.degrees) + list(SM.degrees), diff)
    if check:
        rep = validate_module(C)
        if rep.violations:
            raise SignCheckFailed(f"cone differential invalid: {rep.violations[:3]}")
    one = N.algebra.one()
    iota = ModuleMap(N, C, 0, {(i, i): one for i in range(n)})
    pi = ModuleMap(C, SM, 0, {(j, n + j): one for j in range(M.size)})
    return Cone(C, iota, pi)


# -- homotopies --------------------------------------------------------------------

def null_homotopy(f: ModuleMap):
    """Exact solve of ``d_Hom(s) = f`` for ``s`` of degree ``|f| - 1``.

    Returns the homotopy or ``None`` when none exists.  Only finitely many
    algebra degrees are involved since both sides have finitely many
    generators.
    """
    M, N, r = f.source, f.target, f.degree
    A = M.algebra
    if M.size == 0 or N.size == 0:
        return ModuleMap(M, N, r - 1, {}) if f.is_zero() else None
    need = max(M.degrees) + r - min(N.degrees)
    if need > A.max_degree:
        raise CapExceeded(f"null_homotopy needs algebra degree {need} > cap {A.max_degree}")

    keys: dict = {}

    def flatten(entries: dict) -> dict:
        vec = {}
        for (k, l), a in entries.items():
            for (d, b), c in a.terms.items():
                idx = keys.setdefault((k, l, d, b), len(keys))
                vec[idx] = c
        return vec

    unknowns = []
    columns = []
    for i in range(N.size):
        for j in range(M.size):
            e = M.degrees[j] + r - 1 - N.degrees[i]
            for b in range(A.dim(e)):
                s = ModuleMap(M, N, r - 1, {(i, j): A.basis_element(e, b)})
                unknowns.append((i, j, e, b))
                columns.append(flatten(d_hom(s).entries))
    target = flatten(f.entries)
    span = Span(columns, len(keys), A.field)
    coeffs = span.express(target)
    if coeffs is None:
        return None
    acc: dict = {}
    for u, c in coeffs.items():
        i, j, e, b = unknowns[u]
        _accumulate(acc, (i, j), A.basis_element(e, b).scale(c))
    sigma = ModuleMap(M, N, r - 1, acc)
    if d_hom(sigma).entries != f.entries:
        raise SignCheckFailed("null homotopy failed to re-verify")
    return sigma


def homotopic(f: ModuleMap, g: ModuleMap):
    """A homotopy ``s`` with ``f - g = d s + s d``, or ``None``."""
    return null_homotopy(f - g)
