# cython: language_level=3
"""Exact row reduction over the rationals, compiled kernel.

Same contract as ocat._rref_py.rref_int: integer rows in, primitive
echelon rows plus pivot columns out.  Entries stay Python ints (exact,
arbitrary precision); Cython removes the interpreter loop overhead,
which dominates on the dense eliminations the symbol-cohomology and
jet computations produce.
"""

from math import gcd


cdef list _reduce_row(list row, Py_ssize_t ncols):
    cdef Py_ssize_t j
    g = 0
    lead = 0
    for j in range(ncols):
        v = row[j]
        if v:
            if lead == 0:
                lead = v
            g = gcd(g, v)
    if g == 0:
        return row
    if lead < 0:
        g = -g
    return [row[j] // g for j in range(ncols)]


def rref_int(rows, Py_ssize_t ncols):
    """Reduce integer rows; return (primitive echelon rows, pivot columns)."""
    cdef list work = []
    cdef list out = []
    cdef list pivots = []
    cdef list r, piv, nxt
    cdef Py_ssize_t col = 0, i, j, npb
    for r0 in rows:
        r = list(r0)
        for j in range(ncols):
            if r[j]:
                work.append(r)
                break
    while work and col < ncols:
        piv = None
        for i in range(len(work)):
            r = work[i]
            if r[col]:
                piv = r
                del work[i]
                break
        if piv is None:
            col += 1
            continue
        p = piv[col]
        nxt = []
        for i in range(len(work)):
            r = work[i]
            v = r[col]
            if v:
                for j in range(col, ncols):
                    r[j] = r[j] * p - piv[j] * v
                r = _reduce_row(r, ncols)
            keep = 0
            for j in range(ncols):
                if r[j]:
                    keep = 1
                    break
            if keep:
                nxt.append(r)
        work = nxt
        npb = len(out)
        for i in range(npb):
            r = out[i]
            v = r[col]
            if v:
                for j in range(ncols):
                    r[j] = r[j] * p - piv[j] * v
                out[i] = _reduce_row(r, ncols)
        out.append(_reduce_row(piv, ncols))
        pivots.append(col)
        col += 1
    return out, pivots
