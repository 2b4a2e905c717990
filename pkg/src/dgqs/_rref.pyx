# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled row reduction; same contract as ``_rref_py``.

Rows are reduced in C with 64-bit entries: sparse rows (sorted column /
value arrays) for sparse input, a dense Gauss-Jordan for dense input.
Integer arithmetic is overflow-checked; on overflow the matrix is redone
with Python integers by the object loop at the bottom.  The reduced
echelon form is unique, so every path returns the same rows.
"""

from libc.stdlib cimport calloc, free, malloc
from math import gcd

cdef extern from * nogil:
    """
    static int dg_mul_ovf(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static int dg_sub_ovf(long long a, long long b, long long *r) { return __builtin_sub_overflow(a, b, r); }
    """
    int dg_mul_ovf(long long a, long long b, long long *r)
    int dg_sub_ovf(long long a, long long b, long long *r)

DEF DENSE_LIMIT = 4000000
DEF DENSE_FILL = 0.2
cdef long long INT_BOUND = 1LL << 62

DEF OK = 0
DEF OVERFLOW = -1
DEF NOMEM = -2


cdef struct Row:
    Py_ssize_t n
    Py_ssize_t *c
    long long *v


cdef inline long long _gcd(long long a, long long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef inline void _row_free(Row *r) nogil:
    free(r.c)
    free(r.v)
    r.c = NULL
    r.v = NULL
    r.n = 0


cdef void _row_primitive(Row *r) nogil:
    cdef long long g = 0
    cdef Py_ssize_t k
    if not r.n:
        return
    for k in range(r.n):
        g = _gcd(g, r.v[k])
        if g == 1:
            break
    if r.v[0] < 0:
        g = -g
    if g != 1:
        for k in range(r.n):
            r.v[k] //= g


cdef int _row_combine(Row *r, long long x, long long y, Row *q, long long p) nogil:
    """``r = x r - y q``, reduced mod ``p`` when ``p`` is nonzero."""
    cdef Py_ssize_t cap = r.n + q.n, i = 0, j = 0, n = 0
    cdef Py_ssize_t *nc = <Py_ssize_t *> malloc(cap * sizeof(Py_ssize_t) + 1)
    cdef long long *nv = <long long *> malloc(cap * sizeof(long long) + 1)
    cdef long long a, b, val
    cdef Py_ssize_t col
    if nc == NULL or nv == NULL:
        free(nc)
        free(nv)
        return NOMEM
    while i < r.n or j < q.n:
        if j >= q.n or (i < r.n and r.c[i] < q.c[j]):
            col = r.c[i]
            a = r.v[i]
            b = 0
            i += 1
        elif i >= r.n or q.c[j] < r.c[i]:
            col = q.c[j]
            a = 0
            b = q.v[j]
            j += 1
        else:
            col = r.c[i]
            a = r.v[i]
            b = q.v[j]
            i += 1
            j += 1
        if p:
            val = (a * x - y * b) % p
            if val < 0:
                val += p
        else:
            if dg_mul_ovf(a, x, &a) or dg_mul_ovf(y, b, &b) or dg_sub_ovf(a, b, &val):
                free(nc)
                free(nv)
                return OVERFLOW
        if val:
            nc[n] = col
            nv[n] = val
            n += 1
    _row_free(r)
    r.c = nc
    r.v = nv
    r.n = n
    return OK


cdef inline long long _inverse(long long a, long long p) nogil:
    cdef long long inv = 1, e = p - 2
    a %= p
    while e:
        if e & 1:
            inv = inv * a % p
        a = a * a % p
        e >>= 1
    return inv


cdef void _row_monic(Row *r, long long p) nogil:
    cdef long long inv
    cdef Py_ssize_t k
    if r.n and r.v[0] != 1:
        inv = _inverse(r.v[0], p)
        for k in range(r.n):
            r.v[k] = r.v[k] * inv % p


cdef Py_ssize_t _lower_bound(Row *r, Py_ssize_t col) nogil:
    cdef Py_ssize_t lo = 0, hi = r.n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if r.c[mid] < col:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef int _sparse_reduce(Row *rows, Py_ssize_t n, Py_ssize_t m, Py_ssize_t *pivot, long long p) nogil:
    """Forward elimination and back substitution; ``pivot[col]`` is the owning row or -1."""
    cdef Py_ssize_t i, k, c, t, pos
    cdef long long a, b, g
    cdef int status
    cdef Row *r
    cdef Row *q
    for c in range(m):
        pivot[c] = -1
    for i in range(n):
        r = &rows[i]
        while r.n:
            c = r.c[0]
            if pivot[c] < 0:
                break
            q = &rows[pivot[c]]
            if p:
                status = _row_combine(r, 1, r.v[0], q, p)
            else:
                a = q.v[0]
                b = r.v[0]
                g = _gcd(a, b)
                status = _row_combine(r, a // g, b // g, q, 0)
                _row_primitive(r)
            if status != OK:
                return status
        if r.n:
            if p:
                _row_monic(r, p)
            else:
                _row_primitive(r)
            pivot[r.c[0]] = i
    for c in range(m - 1, -1, -1):
        if pivot[c] < 0:
            continue
        r = &rows[pivot[c]]
        k = 1
        while k < r.n:
            t = pivot[r.c[k]]
            if t < 0:
                k += 1
                continue
            q = &rows[t]
            if p:
                status = _row_combine(r, 1, r.v[k], q, p)
            else:
                a = q.v[0]
                b = r.v[k]
                g = _gcd(a, b)
                status = _row_combine(r, a // g, b // g, q, 0)
                _row_primitive(r)
            if status != OK:
                return status
            # q is already reduced, so nothing before its pivot column changed
            k = _lower_bound(r, q.c[0])
    return OK


cdef tuple _columns(list rows):
    cols = set()
    nnz = 0
    for r in rows:
        cols.update(r)
        nnz += len(r)
    order = sorted(cols)
    return order, {c: k for k, c in enumerate(order)}, nnz


cdef object _sparse(list rows, object p, list order, dict index):
    cdef Py_ssize_t n = len(rows), m = len(order), i, k, ln
    cdef long long lp = 0 if p is None else p
    cdef Row *buf = <Row *> calloc(n, sizeof(Row))
    cdef Py_ssize_t *pivot = <Py_ssize_t *> malloc(m * sizeof(Py_ssize_t))
    cdef int status
    if buf == NULL or pivot == NULL:
        free(buf)
        free(pivot)
        return None
    try:
        for i, src in enumerate(rows):
            items = sorted((index[c], v) for c, v in (<dict>src).items() if v)
            ln = len(items)
            buf[i].c = <Py_ssize_t *> malloc(ln * sizeof(Py_ssize_t) + 1)
            buf[i].v = <long long *> malloc(ln * sizeof(long long) + 1)
            if buf[i].c == NULL or buf[i].v == NULL:
                return None
            k = 0
            for c, v in items:
                if p is not None:
                    v %= p
                    if not v:
                        continue
                elif not (-INT_BOUND < v < INT_BOUND):
                    return None
                buf[i].c[k] = c
                buf[i].v[k] = v
                k += 1
            buf[i].n = k
        with nogil:
            status = _sparse_reduce(buf, n, m, pivot, lp)
        if status != OK:
            return None
        out = []
        for k in range(m):
            if pivot[k] >= 0:
                r = &buf[pivot[k]]
                out.append((order[k], {order[r.c[i]]: r.v[i] for i in range(r.n)}))
        return out
    finally:
        for i in range(n):
            _row_free(&buf[i])
        free(buf)
        free(pivot)


cdef int _primitive_c(long long *row, Py_ssize_t m) nogil:
    cdef long long g = 0
    cdef Py_ssize_t k, lead = -1
    for k in range(m):
        if row[k]:
            if lead < 0:
                lead = k
            g = _gcd(g, row[k])
            if g == 1:
                break
    if lead < 0:
        return 0
    if row[lead] < 0:
        g = -g
    if g != 1:
        for k in range(m):
            row[k] //= g
    return 1


cdef int _dense_reduce(long long *a, Py_ssize_t n, Py_ssize_t m, long long p, Py_ssize_t *pivcol) nogil:
    """Gauss-Jordan in place; returns the rank, or a negative status."""
    cdef Py_ssize_t rank = 0, c, i, k, q
    cdef long long pv, b, g, x, y, inv
    cdef long long *prow
    cdef long long *row
    for c in range(m):
        if rank == n:
            break
        q = -1
        for i in range(rank, n):
            if a[i * m + c]:
                q = i
                break
        if q < 0:
            continue
        if q != rank:
            for k in range(m):
                a[q * m + k], a[rank * m + k] = a[rank * m + k], a[q * m + k]
        prow = a + rank * m
        if p:
            inv = _inverse(prow[c], p)
            for k in range(c, m):
                prow[k] = prow[k] * inv % p
        else:
            _primitive_c(prow, m)
        pv = prow[c]
        for i in range(n):
            if i == rank:
                continue
            row = a + i * m
            b = row[c]
            if not b:
                continue
            if p:
                for k in range(c, m):
                    if prow[k]:
                        y = (row[k] - b * prow[k]) % p
                        row[k] = y + p if y < 0 else y
                continue
            g = _gcd(pv, b)
            x = pv // g
            b = b // g
            for k in range(c, m):
                if dg_mul_ovf(row[k], x, &y):
                    return OVERFLOW
                if prow[k]:
                    if dg_mul_ovf(b, prow[k], &g) or dg_sub_ovf(y, g, &y):
                        return OVERFLOW
                row[k] = y
            for k in range(c):
                if row[k] and dg_mul_ovf(row[k], x, &row[k]):
                    return OVERFLOW
            _primitive_c(row, m)
        pivcol[rank] = c
        rank += 1
    return rank


cdef object _dense(list rows, object p, list order, dict index):
    cdef Py_ssize_t n = len(rows), m = len(order), i, k, rank
    cdef long long lp = 0 if p is None else p
    cdef long long *a = <long long *> calloc(n * m, sizeof(long long))
    cdef Py_ssize_t *pivcol = <Py_ssize_t *> calloc(min(n, m), sizeof(Py_ssize_t))
    if a == NULL or pivcol == NULL:
        free(a)
        free(pivcol)
        return None
    try:
        for i, r in enumerate(rows):
            for c, v in (<dict>r).items():
                if p is not None:
                    v %= p
                elif not (-INT_BOUND < v < INT_BOUND):
                    return None
                a[i * m + <Py_ssize_t>index[c]] = v
        with nogil:
            rank = _dense_reduce(a, n, m, lp, pivcol)
        if rank < 0:
            return None
        out = []
        for i in range(rank):
            out.append((order[pivcol[i]], {order[k]: a[i * m + k] for k in range(m) if a[i * m + k]}))
        return out
    finally:
        free(a)
        free(pivcol)


cdef object _native(list rows, object p):
    """C reduction, or ``None`` when it cannot be done in 64 bits."""
    order, index, nnz = _columns(rows)
    n, m = len(rows), len(order)
    if not n or not m:
        return []
    if n * m <= DENSE_LIMIT and nnz >= DENSE_FILL * n * m:
        return _dense(rows, p, order, index)
    return _sparse(rows, p, order, index)


def rref_int(rows):
    rows = list(rows)
    out = _native(rows, None)
    if out is not None:
        return out
    return _rref_int_obj(rows)


def rref_mod(rows, long long p):
    rows = list(rows)
    out = _native(rows, p)
    if out is not None:
        return out
    return _rref_mod_obj(rows, p)


# -- object-integer loop (overflow fallback) ------------------------------------

cdef dict _primitive(dict row):
    cdef object g = 0
    cdef object v
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if row[min(row)] < 0:
        g = -g
    if g != 1:
        for k in row:
            row[k] //= g
    return row


cdef list _rref_int_obj(list rows):
    cdef dict pivots = {}
    cdef dict r, piv, row
    cdef object a, b, g, v, nv
    cdef Py_ssize_t c, k, j
    for src in rows:
        r = {kk: vv for kk, vv in src.items() if vv}
        while r:
            c = min(r)
            piv = pivots.get(c)
            if piv is None:
                break
            a = piv[c]
            b = r[c]
            g = gcd(a, b)
            a //= g
            b //= g
            if a != 1:
                for k in r:
                    r[k] *= a
            for k, v in piv.items():
                nv = r.get(k, 0) - b * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
            if r:
                _primitive(r)
        if r:
            pivots[min(r)] = _primitive(r)

    order = sorted(pivots)
    for c in reversed(order):
        row = pivots[c]
        hits = [kk for kk in row if kk != c and kk in pivots]
        if not hits:
            continue
        for k in hits:
            b = row.get(k)
            if not b:
                continue
            piv = pivots[k]
            a = piv[k]
            g = gcd(a, b)
            a //= g
            b //= g
            if a != 1:
                for j in row:
                    row[j] *= a
            for j, v in piv.items():
                nv = row.get(j, 0) - b * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
        _primitive(row)
    return [(c, pivots[c]) for c in order]


cdef list _rref_mod_obj(list rows, long long p):
    cdef dict pivots = {}
    cdef dict r, piv, row
    cdef long long b, v, nv, inv
    cdef Py_ssize_t c, k, j
    for src in rows:
        r = {}
        for k, v in src.items():
            v %= p
            if v < 0:
                v += p
            if v:
                r[k] = v
        while r:
            c = min(r)
            piv = pivots.get(c)
            if piv is None:
                break
            b = r[c]
            for k, v in piv.items():
                nv = (<long long>r.get(k, 0) - b * v) % p
                if nv < 0:
                    nv += p
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        if r:
            c = min(r)
            inv = pow(r[c], -1, p)
            if inv != 1:
                for k in r:
                    r[k] = (<long long>r[k]) * inv % p
            pivots[c] = r

    order = sorted(pivots)
    for c in reversed(order):
        row = pivots[c]
        hits = [kk for kk in row if kk != c and kk in pivots]
        for k in hits:
            if k not in row:
                continue
            b = row[k]
            for j, v in (<dict>pivots[k]).items():
                nv = (<long long>row.get(j, 0) - b * v) % p
                if nv < 0:
                    nv += p
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
    return [(c, pivots[c]) for c in order]
