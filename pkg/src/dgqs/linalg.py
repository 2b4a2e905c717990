"""Exact sparse linear algebra over a :class:`~dgqs.field.Field`.

Vectors are ``dict[int, value]`` with no zero entries.  Everything here
funnels into one kernel call (``kernels.rref_int`` over Q, fraction-free,
or ``kernels.rref_mod`` over F_p).
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from . import kernels
from .field import Field


def _to_int_row(row):
    den = 1
    for v in row.values():
        den = lcm(den, v.denominator)
    return {k: int(v * den) for k, v in row.items() if v}


def rref(rows, field: Field):
    """Reduced row echelon form: list of ``(pivot, row)`` with pivot entry 1."""
    if field.p:
        return kernels.rref_mod(rows, field.p)
    out = []
    for c, row in kernels.rref_int([_to_int_row(r) for r in rows]):
        lead = row[c]
        out.append((c, {k: Fraction(v, lead) for k, v in row.items()}))
    return out


def rank(rows, field: Field) -> int:
    return len(rref(rows, field))


def transpose(columns):
    rows: dict[int, dict] = {}
    for j, col in enumerate(columns):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
    return [rows[i] for i in sorted(rows)]


def column_rank(columns, field: Field) -> int:
    return rank(columns, field)


def pivot_columns(columns, field: Field) -> list[int]:
    """Indices of the greedy (first-come) maximal independent subset of ``columns``."""
    return [c for c, _ in rref(transpose(columns), field)]


class Span:
    """Row space of ``vectors`` with coefficient tracking.

    The vectors live in coordinates ``0 .. dim-1``; tag columns
    ``dim + k`` record which input vector contributed, so a single RREF
    answers rank, kernel and expression queries.
    """

    def __init__(self, vectors, dim: int, field: Field):
        self.field = field
        self.dim = dim
        self.count = len(vectors)
        rows = []
        one = field.one
        for k, vec in enumerate(vectors):
            row = dict(vec)
            row[dim + k] = one
            rows.append(row)
        self.pivots: dict[int, tuple[dict, dict]] = {}
        self.relations: list[dict] = []
        for c, row in rref(rows, field):
            main = {i: v for i, v in row.items() if i < dim}
            tags = {i - dim: v for i, v in row.items() if i >= dim}
            if c < dim:
                self.pivots[c] = (main, tags)
            else:
                self.relations.append(tags)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def kernel(self) -> list[dict]:
        """RREF basis of ``{x : sum x_k v_k = 0}`` in input-index coordinates."""
        return self.relations

    def leading(self) -> set[int]:
        return set(self.pivots)

    def reduce(self, vec):
        """Return ``(residual, coefficients)`` with ``vec = sum c_k v_k + residual``."""
        F = self.field
        resid = dict(vec)
        coeffs: dict[int, object] = {}
        for c in [c for c in vec if c in self.pivots]:
            a = vec[c]
            main, tags = self.pivots[c]
            for i, v in main.items():
                nv = F.norm(resid.get(i, 0) - a * v)
                if nv:
                    resid[i] = nv
                else:
                    resid.pop(i, None)
            for k, v in tags.items():
                nv = F.norm(coeffs.get(k, 0) + a * v)
                if nv:
                    coeffs[k] = nv
                else:
                    coeffs.pop(k, None)
        return resid, coeffs

    def contains(self, vec) -> bool:
        return not self.reduce(vec)[0]

    def express(self, vec):
        """Coefficients ``c`` with ``vec = sum c_k v_k``, or ``None``."""
        resid, coeffs = self.reduce(vec)
        return None if resid else coeffs


def kernel(columns, field: Field, dim: int | None = None) -> list[dict]:
    """Kernel of the linear map whose ``j``-th column is ``columns[j]``."""
    if dim is None:
        dim = 1 + max((i for col in columns for i in col), default=-1)
    return Span(columns, dim, field).kernel()


def add_scaled(acc: dict, vec: dict, scale, field: Field) -> dict:
    """In place ``acc += scale * vec``."""
    for i, v in vec.items():
        nv = field.norm(acc.get(i, 0) + scale * v)
        if nv:
            acc[i] = nv
        else:
            acc.pop(i, None)
    return acc


def combine(vectors, coeffs: dict, field: Field) -> dict:
    acc: dict = {}
    for k, c in coeffs.items():
        add_scaled(acc, vectors[k], c, field)
    return acc


def apply_columns(columns, vec: dict, field: Field) -> dict:
    """Matrix-vector product with a column-stored matrix."""
    acc: dict = {}
    for j, c in vec.items():
        add_scaled(acc, columns[j], c, field)
    return acc


def normalize_leading(vec: dict, field: Field) -> dict:
    """Scale so that the lowest-index entry is 1."""
    if not vec:
        return vec
    inv = field.inv(vec[min(vec)])
    return {k: field.norm(v * inv) for k, v in vec.items()}
