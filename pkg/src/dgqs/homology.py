"""Degreewise realization of based modules and their cohomology.

``M^d`` has basis ``{b g_j : b in basis(A^(d - |g_j|))}``, enumerated
generator-major and then by algebra basis index.  Vectors over that basis are
sparse dicts ``index -> scalar``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import CapExceeded
from .linalg import Span, add_scaled, pivot_columns, rref
from .module import BasedDGModule, ModuleMap, _accumulate


def _window(window) -> tuple[int, int]:
    lo, hi = window
    if lo > hi:
        raise ValueError(f"empty window {window}")
    return int(lo), int(hi)


class DegreewiseComplex:
    """Lazy degreewise matrices of ``d: M^d -> M^(d+1)``."""

    def __init__(self, M: BasedDGModule):
        self.module = M
        self.algebra = M.algebra
        self.field = M.algebra.field
        self._basis: dict = {}
        self._index: dict = {}
        self._diff: dict = {}

    def reachable(self, d: int) -> bool:
        M = self.module
        return not M.size or d - M.min_degree <= self.algebra.max_degree

    def require(self, d: int):
        if not self.reachable(d):
            raise CapExceeded(
                f"degree {d} needs algebra degree {d - self.module.min_degree} > cap {self.algebra.max_degree}")

    def basis(self, d: int) -> list:
        if d not in self._basis:
            self.require(d)
            A, M = self.algebra, self.module
            out = []
            for j, gd in enumerate(M.degrees):
                e = d - gd
                if e >= 0:
                    out.extend((j, e, b) for b in range(A.dim(e)))
            self._basis[d] = out
            self._index[d] = {t: k for k, t in enumerate(out)}
        return self._basis[d]

    def dim(self, d: int) -> int:
        return len(self.basis(d))

    def index(self, d: int) -> dict:
        self.basis(d)
        return self._index[d]

    def to_vector(self, d: int, elem: dict) -> dict:
        """Module element (``{gen: AlgebraElement}``) of degree ``d`` to coordinates."""
        idx = self.index(d)
        vec = {}
        for j, a in elem.items():
            for (e, b), c in a.terms.items():
                if e != d - self.module.degrees[j]:
                    raise ValueError(f"element is not homogeneous of degree {d}")
                vec[idx[(j, e, b)]] = c
        return vec

    def to_element(self, d: int, vec: dict) -> dict:
        A = self.algebra
        basis = self.basis(d)
        out: dict = {}
        for k, c in vec.items():
            j, e, b = basis[k]
            _accumulate(out, j, A.basis_element(e, b).scale(c))
        return out

    def diff_matrix(self, d: int) -> list:
        """Columns (one per basis vector of ``M^d``) of ``d^d`` in ``M^(d+1)`` coordinates."""
        if d not in self._diff:
            self.require(d + 1)
            A, M = self.algebra, self.module
            cols = []
            for j, e, b in self.basis(d):
                image = M.apply_diff({j: A.basis_element(e, b)})
                cols.append(self.to_vector(d + 1, image))
            self._diff[d] = cols
        return self._diff[d]

    def map_matrix(self, f: ModuleMap, d: int, target: "DegreewiseComplex") -> list:
        """Columns of ``f: M^d -> N^(d+r)``."""
        A = self.algebra
        return [target.to_vector(d + f.degree, f({j: A.basis_element(e, b)})) for j, e, b in self.basis(d)]


def realize(M: BasedDGModule, window) -> DegreewiseComplex:
    lo, hi = _window(window)
    C = DegreewiseComplex(M)
    C.require(hi + 1)
    for d in range(lo, hi + 1):
        C.diff_matrix(d)
    return C


@dataclass
class CohomologyTable:
    complex: DegreewiseComplex
    window: tuple
    dims: dict = dc_field(default_factory=dict)
    representatives: dict = dc_field(default_factory=dict)
    _spans: dict = dc_field(default_factory=dict, repr=False)
    _cycles: dict = dc_field(default_factory=dict, repr=False)

    def total(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return not self.total()

    def is_cocycle(self, d: int, vec: dict) -> bool:
        return not _apply(self.complex.diff_matrix(d), vec, self.complex.field)

    def classify(self, d: int, vec: dict):
        """Coordinates of the class of cocycle ``vec`` in the representative basis."""
        if not self.is_cocycle(d, vec):
            raise ValueError("not a cocycle")
        coeffs = self._spans[d].express(vec)
        if coeffs is None:  # pragma: no cover - cocycles always lie in Z = reps + B
            raise ArithmeticError("cocycle outside representative span")
        n = len(self.representatives[d])
        return {k: c for k, c in coeffs.items() if k < n}

    def is_boundary(self, d: int, vec: dict) -> bool:
        return self.is_cocycle(d, vec) and not self.classify(d, vec)

    def representative_elements(self, d: int) -> list:
        return [self.complex.to_element(d, v) for v in self.representatives[d]]

    def cycles(self, d: int) -> list:
        return self._cycles[d]

    def boundaries(self, d: int) -> list:
        n = len(self.representatives[d])
        return list(self._spans[d]._vectors[n:])

    def as_dict(self) -> dict:
        C = self.complex
        degrees = []
        for d in sorted(self.dims):
            reps = [_element_repr(C.module, e) for e in self.representative_elements(d)]
            degrees.append({"degree": d, "dim": self.dims[d], "representatives": reps})
        return {"window": list(self.window), "degrees": degrees}

    def to_text(self) -> str:
        lines = [f"{'degree':>6}  {'dim':>4}  representatives"]
        for row in self.as_dict()["degrees"]:
            lines.append(f"{row['degree']:>6}  {row['dim']:>4}  {'; '.join(row['representatives'])}")
        return "\n".join(lines)


class _KeptSpan(Span):
    """Span that also keeps its input vectors."""

    def __init__(self, vectors, dim, field):
        super().__init__(vectors, dim, field)
        self._vectors = list(vectors)


def _apply(columns, vec, field) -> dict:
    acc: dict = {}
    for k, c in vec.items():
        add_scaled(acc, columns[k], c, field)
    return acc


def _element_repr(M: BasedDGModule, elem: dict) -> str:
    parts = []
    for j, a in sorted(elem.items()):
        s = repr(a)
        parts.append(f"({s})*{M.names[j]}" if len(a.terms) > 1 else
                     (M.names[j] if s == "1" else f"-{M.names[j]}" if s == "-1" else f"{s}*{M.names[j]}"))
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def _cocycle_basis(C: DegreewiseComplex, d: int) -> list:
    """RREF basis of ``ker d^d`` as vectors in ``M^d``."""
    n = C.dim(d)
    if not n:
        return []
    span = Span(C.diff_matrix(d), C.dim(d + 1), C.field)
    # kernel rows are in input-index coordinates == M^d coordinates
    return span.kernel()


def cohomology(M: BasedDGModule, window, complex: DegreewiseComplex | None = None) -> CohomologyTable:
    lo, hi = _window(window)
    C = complex or DegreewiseComplex(M)
    C.require(hi + 1)
    F = C.field
    table = CohomologyTable(C, (lo, hi))
    for d in range(lo, hi + 1):
        cycles = _cocycle_basis(C, d)
        bounds = [v for v in C.diff_matrix(d - 1) if v] if C.dim(d - 1) else []
        # greedy: boundaries first, then cocycles independent modulo them
        picked = pivot_columns(bounds + cycles, F)
        bound_basis = [bounds[k] for k in picked if k < len(bounds)]
        reps = [cycles[k - len(bounds)] for k in picked if k >= len(bounds)]
        table.dims[d] = len(reps)
        table.representatives[d] = reps
        table._cycles[d] = cycles
        table._spans[d] = _KeptSpan(reps + bound_basis, C.dim(d), F)
    return table


def induced_map(f: ModuleMap, window, source_table=None, target_table=None) -> dict:
    """``H^d(f)`` for ``d`` in window as column lists in representative bases."""
    lo, hi = _window(window)
    r = f.degree
    S = source_table or cohomology(f.source, (lo, hi))
    T = target_table or cohomology(f.target, (lo + r, hi + r))
    out = {}
    for d in range(lo, hi + 1):
        cols = S.complex.map_matrix(f, d, T.complex) if S.dims[d] else []
        out[d] = [T.classify(d + r, _apply(cols, z, S.complex.field)) for z in S.representatives[d]]
    return out


def is_ghost(f: ModuleMap, window, **tables) -> bool:
    return all(not col for cols in induced_map(f, window, **tables).values() for col in cols)


def is_quasi_iso(f: ModuleMap, window, **tables) -> bool:
    if f.degree != 0:
        return False
    lo, hi = _window(window)
    S = tables.get("source_table") or cohomology(f.source, (lo, hi))
    T = tables.get("target_table") or cohomology(f.target, (lo, hi))
    H = induced_map(f, (lo, hi), S, T)
    F = f.algebra.field
    for d in range(lo, hi + 1):
        if S.dims[d] != T.dims[d]:
            return False
        if S.dims[d] and len(rref(H[d], F)) != S.dims[d]:
            return False
    return True


@dataclass
class MinimalGenerators:
    generators: list          # (degree, cocycle vector)
    window: tuple
    stable: bool
    table: CohomologyTable

    def elements(self) -> list:
        return [(d, self.table.complex.to_element(d, v)) for d, v in self.generators]

    @property
    def degrees(self) -> list:
        return [d for d, _ in self.generators]


def _algebra_cocycles(A, e: int) -> list:
    """Basis of ``Z^e(A)`` as AlgebraElements."""
    n = A.dim(e)
    if not n:
        return []
    if e + 1 > A.max_degree:
        raise CapExceeded(f"cocycles of A^{e} need degree {e + 1}")
    cols = [{b: c for (_, b), c in A.diff_basis(e, i).items()} for i in range(n)]
    ker = Span(cols, A.dim(e + 1), A.field).kernel()
    return [A.from_vector(e, v) for v in ker]


def minimal_cohomology_generators(M: BasedDGModule, window, stability_margin: int = 1,
                                  table: CohomologyTable | None = None) -> MinimalGenerators:
    """Cocycles whose classes minimally generate ``H(M)`` as an ``H(A)``-module on the window.

    Generators below the window bottom cannot exist: the computation
    starts at the lowest generator degree whenever that is smaller.
    """
    lo, hi = _window(window)
    if not M.size:
        return MinimalGenerators([], (lo, hi), True, table or cohomology(M, (lo, hi)))
    start = min(lo, M.min_degree)
    if table is None or table.window[0] > start or table.window[1] < hi:
        table = cohomology(M, (start, hi), table.complex if table else None)
    C = table.complex
    A, F = C.algebra, C.field
    zcache: dict = {}
    gens = []
    for d in range(start, hi + 1):
        if not table.dims[d]:
            continue
        decomposable = list(table.boundaries(d))
        for e in range(1, d - start + 1):
            if e not in zcache:
                zcache[e] = _algebra_cocycles(A, e)
            for a in zcache[e]:
                for z in table.representative_elements(d - e):
                    prod = {j: a * b for j, b in z.items()}
                    prod = {j: v for j, v in prod.items() if v}
                    if prod:
                        decomposable.append(C.to_vector(d, prod))
        span = Span(decomposable, C.dim(d), F)
        for z in table.representatives[d]:
            resid, _ = span.reduce(z)
            if resid:
                gens.append((d, z))
                span = Span(decomposable + [z], C.dim(d), F)
                decomposable.append(z)
    top = hi - max(stability_margin, 0)
    stable = all(d <= top for d, _ in gens)
    return MinimalGenerators(gens, (lo, hi), stable, table)
