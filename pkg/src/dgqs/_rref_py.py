"""Pure-Python sparse row reduction (reference kernel).

Rows are ``dict[int, int]`` (column -> value).  Both entry points return
the reduced row echelon form as a list of ``(pivot_column, row)`` pairs
sorted by pivot column.  Rows are processed in input order, so ties are
deterministic; the RREF of a row space is unique anyway.

``rref_int`` is fraction-free: rows stay integral and primitive (content 1,
positive pivot), the caller divides by the pivot value to get the
rational RREF.  ``rref_mod`` works in F_p with pivots normalized to 1.
"""

from math import gcd


def _primitive(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        for k in row:
            row[k] //= g
    return row


def rref_int(rows):
    pivots = {}
    for src in rows:
        r = {c: v for c, v in src.items() if v}
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
        hits = [k for k in row if k != c and k in pivots]
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


def rref_mod(rows, p):
    pivots = {}
    for src in rows:
        r = {}
        for c, v in src.items():
            v %= p
            if v:
                r[c] = v
        while r:
            c = min(r)
            piv = pivots.get(c)
            if piv is None:
                break
            b = r[c]
            for k, v in piv.items():
                nv = (r.get(k, 0) - b * v) % p
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        if r:
            c = min(r)
            inv = pow(r[c], -1, p)
            if inv != 1:
                for k in r:
                    r[k] = r[k] * inv % p
            pivots[c] = r

    order = sorted(pivots)
    for c in reversed(order):
        row = pivots[c]
        hits = [k for k in row if k != c and k in pivots]
        for k in hits:
            b = row.get(k)
            if not b:
                continue
            for j, v in pivots[k].items():
                nv = (row.get(j, 0) - b * v) % p
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
    return [(c, pivots[c]) for c in order]
