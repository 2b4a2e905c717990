"""Locally finite connected cochain DG algebras and their elements.

An algebra is described degree by degree up to a hard cap ``max_degree``:
a finite basis per degree, structure constants basis x basis -> A and the
differential of every basis element.  Two presentations are provided: DG
polynomial algebras ``A(t_1, ..., t_n)`` (commutative ``k[x_1..x_n]`` with
``|x_i| = 1`` and ``d(x_i) = sum_j t_j x_i x_j``) and explicit tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .errors import CapExceeded, MalformedTable
from .field import QQ, Field

Key = tuple  # (degree, basis index)


class AlgebraElement:
    """Sparse linear combination of algebra basis elements.

    ``terms`` maps ``(degree, index)`` to a nonzero scalar and is kept
    sorted, so structural equality is equality of elements.
    """

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "GradedAlgebra", terms=None, *, canonical=False):
        self.algebra = algebra
        if terms is None:
            self.terms = {}
        elif canonical:
            self.terms = terms
        else:
            F = algebra.field
            clean = {}
            for k, v in terms.items():
                v = F(v)
                if v:
                    clean[k] = v
            self.terms = {k: clean[k] for k in sorted(clean)}

    @classmethod
    def _from_dict(cls, algebra, acc):
        return cls(algebra, {k: acc[k] for k in sorted(acc)}, canonical=True)

    @property
    def degrees(self) -> set[int]:
        return {d for d, _ in self.terms}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    @property
    def degree(self):
        """The common degree of all terms, ``None`` for zero or mixed elements."""
        ds = self.degrees
        return next(iter(ds)) if len(ds) == 1 else None

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __neg__(self):
        F = self.algebra.field
        return AlgebraElement(self.algebra, {k: F.norm(-v) for k, v in self.terms.items()}, canonical=True)

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        F = self.algebra.field
        acc = dict(self.terms)
        for k, v in other.terms.items():
            nv = F.norm(acc.get(k, 0) + v)
            if nv:
                acc[k] = nv
            else:
                acc.pop(k, None)
        return AlgebraElement._from_dict(self.algebra, acc)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra.mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        F = self.algebra.field
        c = F(c)
        if not c:
            return AlgebraElement(self.algebra)
        return AlgebraElement(self.algebra, {k: F.norm(v * c) for k, v in self.terms.items()}, canonical=True)

    def d(self):
        return self.algebra.diff(self)

    def coefficient(self, degree: int, index: int):
        return self.terms.get((degree, index), self.algebra.field.zero)

    def __repr__(self):
        if not self.terms:
            return "0"
        A = self.algebra
        parts = []
        for (d, i), c in self.terms.items():
            lab = A.label(d, i)
            cs = A.field.to_str(c)
            if lab == "1":
                parts.append(cs)
            elif cs == "1":
                parts.append(lab)
            elif cs == "-1":
                parts.append("-" + lab)
            else:
                parts.append(f"{cs}*{lab}")
        return " + ".join(parts).replace("+ -", "- ")


class GradedAlgebra:
    """Base class: subclasses supply ``_basis``, ``_mul`` and ``_diff``."""

    kind = "abstract"

    def __init__(self, max_degree: int, field: Field = QQ):
        if max_degree < 0:
            raise ValueError("max_degree must be non-negative")
        self.max_degree = max_degree
        self.field = field
        self._mul_cache: dict = {}
        self._diff_cache: dict = {}

    # -- basis ---------------------------------------------------------
    def dim(self, d: int) -> int:
        if d < 0 or d > self.max_degree:
            return 0
        return len(self._basis(d))

    def label(self, d: int, i: int) -> str:
        raise NotImplementedError

    def check_degree(self, d: int):
        if d > self.max_degree:
            raise CapExceeded(f"degree {d} exceeds algebra cap {self.max_degree}")

    # -- elements ------------------------------------------------------
    def zero(self) -> AlgebraElement:
        return AlgebraElement(self)

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, {(0, 0): self.field.one}, canonical=True)

    def basis_element(self, d: int, i: int) -> AlgebraElement:
        return AlgebraElement(self, {(d, i): self.field.one}, canonical=True)

    def element(self, terms) -> AlgebraElement:
        return AlgebraElement(self, terms)

    def from_vector(self, d: int, vec: dict) -> AlgebraElement:
        """Element of degree ``d`` from coordinates in the degree-``d`` basis."""
        return AlgebraElement(self, {(d, i): vec[i] for i in sorted(vec)}, canonical=True)

    # -- structure -----------------------------------------------------
    def mul_basis(self, d1: int, i1: int, d2: int, i2: int) -> dict:
        key = (d1, i1, d2, i2)
        hit = self._mul_cache.get(key)
        if hit is None:
            self.check_degree(d1 + d2)
            hit = self._mul(d1, i1, d2, i2)
            self._mul_cache[key] = hit
        return hit

    def diff_basis(self, d: int, i: int) -> dict:
        key = (d, i)
        hit = self._diff_cache.get(key)
        if hit is None:
            self.check_degree(d + 1)
            hit = self._diff(d, i)
            self._diff_cache[key] = hit
        return hit

    def mul(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        F = self.field
        acc: dict = {}
        for (d1, i1), c1 in a.terms.items():
            for (d2, i2), c2 in b.terms.items():
                c = c1 * c2
                for k, v in self.mul_basis(d1, i1, d2, i2).items():
                    nv = F.norm(acc.get(k, 0) + c * v)
                    if nv:
                        acc[k] = nv
                    else:
                        acc.pop(k, None)
        return AlgebraElement._from_dict(self, acc)

    def diff(self, a: AlgebraElement) -> AlgebraElement:
        F = self.field
        acc: dict = {}
        for (d, i), c in a.terms.items():
            for k, v in self.diff_basis(d, i).items():
                nv = F.norm(acc.get(k, 0) + c * v)
                if nv:
                    acc[k] = nv
                else:
                    acc.pop(k, None)
        return AlgebraElement._from_dict(self, acc)


class PolynomialDGAlgebra(GradedAlgebra):
    """``A(t_1..t_n)``: commutative polynomials in degree-one variables."""

    kind = "dg_polynomial"

    def __init__(self, n: int, t, max_degree: int, field: Field = QQ):
        super().__init__(max_degree, field)
        self.n = n
        self.t = tuple(field(c) for c in t)
        self._bases: dict[int, list[tuple]] = {}
        self._index: dict[int, dict[tuple, int]] = {}

    def _basis(self, d):
        b = self._bases.get(d)
        if b is None:
            b = monomials(self.n, d)
            self._bases[d] = b
            self._index[d] = {m: i for i, m in enumerate(b)}
        return b

    def basis(self, d: int) -> list[tuple]:
        return list(self._basis(d)) if 0 <= d <= self.max_degree else []

    def index(self, exps) -> tuple[int, int]:
        exps = tuple(exps)
        d = sum(exps)
        self.check_degree(d)
        self._basis(d)
        return d, self._index[d][exps]

    def monomial(self, exps) -> AlgebraElement:
        d, i = self.index(exps)
        return self.basis_element(d, i)

    def variable(self, i: int) -> AlgebraElement:
        """``x_{i+1}`` (0-based index)."""
        e = [0] * self.n
        e[i] = 1
        return self.monomial(e)

    def label(self, d, i):
        exps = self._basis(d)[i]
        parts = []
        for v, e in enumerate(exps, 1):
            if e == 1:
                parts.append(f"x{v}")
            elif e:
                parts.append(f"x{v}^{e}")
        return "*".join(parts) or "1"

    def _mul(self, d1, i1, d2, i2):
        m = tuple(a + b for a, b in zip(self._basis(d1)[i1], self._basis(d2)[i2]))
        d = d1 + d2
        self._basis(d)
        return {(d, self._index[d][m]): self.field.one}

    def _diff(self, d, i):
        # Leibniz on m = x_v * rest, v the first variable present
        if d == 0:
            return {}
        exps = self._basis(d)[i]
        v = next(k for k, e in enumerate(exps) if e)
        rest = list(exps)
        rest[v] -= 1
        x = self.variable(v)
        rest_el = self.monomial(rest)
        dx = self._diff_generator(v)
        out = self.mul(dx, rest_el) - self.mul(x, self.diff(rest_el))
        return dict(out.terms)

    def _diff_generator(self, v):
        acc = self.zero()
        x = self.variable(v)
        for j, tj in enumerate(self.t):
            if tj:
                acc = acc + self.mul(x, self.variable(j)).scale(tj)
        return acc

    def __repr__(self):
        ts = ",".join(self.field.to_str(c) for c in self.t)
        return f"A({ts})"


class TableAlgebra(GradedAlgebra):
    """Algebra given by explicit basis names, products and differentials."""

    kind = "table"

    def __init__(self, basis: dict, mul: dict, diff: dict, max_degree: int, field: Field = QQ):
        super().__init__(max_degree, field)
        self.names = {d: list(v) for d, v in basis.items()}
        self.mul_table = {k: dict(v) for k, v in mul.items()}
        self.diff_table = {k: dict(v) for k, v in diff.items()}

    def _basis(self, d):
        return self.names.get(d, [])

    def basis(self, d: int) -> list[str]:
        return list(self._basis(d)) if d <= self.max_degree else []

    def label(self, d, i):
        return self.names[d][i]

    def _mul(self, d1, i1, d2, i2):
        if (d1, i1) == (0, 0) and self._unit_implicit((d2, i2), left=True):
            return {(d2, i2): self.field.one}
        if (d2, i2) == (0, 0) and self._unit_implicit((d1, i1), left=False):
            return {(d1, i1): self.field.one}
        return dict(self.mul_table.get(((d1, i1), (d2, i2)), {}))

    def _unit_implicit(self, other, left):
        key = ((0, 0), other) if left else (other, (0, 0))
        return key not in self.mul_table

    def _diff(self, d, i):
        return dict(self.diff_table.get((d, i), {}))

    def __repr__(self):
        dims = {d: len(v) for d, v in sorted(self.names.items())}
        return f"TableAlgebra({dims})"


def monomials(n: int, d: int) -> list[tuple]:
    """Exponent vectors of total degree ``d``, graded-lex with x1 > ... > xn."""
    out = []
    for bars in itertools.combinations(range(d + n - 1), n - 1):
        prev = -1
        exps = []
        for b in bars:
            exps.append(b - prev - 1)
            prev = b
        exps.append(d + n - 2 - prev)
        out.append(tuple(exps))
    out.sort(reverse=True)
    return out


# -- constructors --------------------------------------------------------

def make_dg_polynomial(n: int, t, max_degree: int, field: Field = QQ) -> PolynomialDGAlgebra:
    if n < 1:
        raise ValueError("need at least one variable")
    if len(t) != n:
        raise ValueError(f"t has {len(t)} entries, expected {n}")
    if max_degree < 2:
        raise ValueError("max_degree must be at least 2")
    return PolynomialDGAlgebra(n, t, max_degree, field)


def make_table_algebra(basis, mul, diff, max_degree: int, field: Field = QQ) -> TableAlgebra:
    """Build a table algebra.

    ``basis`` maps degree -> list of names (degree 0 must be exactly the
    unit).  ``mul`` maps ``((d1, i1), (d2, i2))`` and ``diff`` maps
    ``(d, i)`` to ``{(d, i): coeff}``.  Products with the unit that are
    not listed default to the unit law.
    """
    basis = {int(d): list(v) for d, v in basis.items() if v}
    if len(basis.get(0, [])) != 1:
        raise MalformedTable("degree 0 must contain exactly the unit")

    def known(key):
        d, i = key
        return d in basis and 0 <= i < len(basis[d])

    def clean(terms, want_degree, where):
        out = {}
        for key, c in terms.items():
            key = (int(key[0]), int(key[1]))
            if not known(key):
                raise MalformedTable(f"{where}: unknown basis element {key}")
            if key[0] != want_degree:
                raise MalformedTable(f"{where}: term {key} not in degree {want_degree}")
            c = field(c)
            if c:
                out[key] = c
        return out

    mul_t = {}
    for (a, b), terms in mul.items():
        a, b = (int(a[0]), int(a[1])), (int(b[0]), int(b[1]))
        for key in (a, b):
            if not known(key):
                raise MalformedTable(f"mul: unknown basis element {key}")
        mul_t[(a, b)] = clean(terms, a[0] + b[0], f"mul{(a, b)}")
    diff_t = {}
    for a, terms in diff.items():
        a = (int(a[0]), int(a[1]))
        if not known(a):
            raise MalformedTable(f"diff: unknown basis element {a}")
        diff_t[a] = clean(terms, a[0] + 1, f"diff{a}")
    for d in basis:
        if d > max_degree:
            raise MalformedTable(f"basis in degree {d} above cap {max_degree}")
    return TableAlgebra(basis, mul_t, diff_t, max_degree, field)


def alg_mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a.algebra.mul(a, b)


def alg_diff(a: AlgebraElement) -> AlgebraElement:
    return a.algebra.diff(a)


# -- validation ------------------------------------------------------------

@dataclass
class ValidationReport:
    violations: list = dc_field(default_factory=list)
    checked_up_to: int | None = None
    notes: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, witness, detail: str = ""):
        self.violations.append((kind, witness, detail))

    def sort(self):
        self.violations.sort(key=lambda v: (v[0], repr(v[1])))
        return self

    def as_dict(self):
        return {
            "ok": self.ok,
            "checked_up_to": self.checked_up_to,
            "violations": [{"kind": k, "witness": repr(w), "detail": d} for k, w, d in self.violations],
            **({"notes": self.notes} if self.notes else {}),
        }


def validate_algebra(A: GradedAlgebra, up_to: int | None = None) -> ValidationReport:
    """Check the connected cochain DG algebra axioms through degree ``up_to``."""
    N = A.max_degree if up_to is None else min(up_to, A.max_degree)
    rep = ValidationReport(checked_up_to=N)
    if isinstance(A, TableAlgebra):
        for d in A.names:
            if d < 0:
                rep.add("connectedness", (d,), "basis in negative degree")
    if A.dim(0) != 1:
        rep.add("connectedness", (0,), f"dim A^0 = {A.dim(0)}")
        return rep.sort()

    basis = [(d, i) for d in range(N + 1) for i in range(A.dim(d))]
    one = A.one()
    el = {b: A.basis_element(*b) for b in basis}

    for b in basis:
        if A.mul(one, el[b]) != el[b] or A.mul(el[b], one) != el[b]:
            rep.add("unit", b)

    for a in basis:
        for b in basis:
            if a[0] + b[0] > N:
                continue
            ab = A.mul(el[a], el[b])
            for c in basis:
                if a[0] + b[0] + c[0] > N:
                    continue
                if A.mul(ab, el[c]) != A.mul(el[a], A.mul(el[b], el[c])):
                    rep.add("associativity", (a, b, c))

    for a in basis:
        for b in basis:
            if a[0] + b[0] + 1 > N:
                continue
            lhs = A.diff(A.mul(el[a], el[b]))
            rhs = A.mul(A.diff(el[a]), el[b])
            second = A.mul(el[a], A.diff(el[b]))
            rhs = rhs - second if a[0] % 2 else rhs + second
            if lhs != rhs:
                rep.add("leibniz", (a, b))

    for a in basis:
        if a[0] + 2 > N:
            continue
        if A.diff(A.diff(el[a])):
            rep.add("d_squared", (a,), repr(A.diff(A.diff(el[a]))))
    return rep.sort()
