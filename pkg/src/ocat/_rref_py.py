"""Exact row reduction over the rationals, pure-Python kernel.

Rows come in as dense lists of Python ints (callers clear denominators
first).  The output rows are primitive (coprime entries) with a positive
pivot entry; the rational reduced row echelon form is recovered by
dividing each row by its pivot entry.  Primitive rows make row-space
equality a plain list comparison.
"""

from math import gcd


def _reduce_row(row):
    """Divide a row by the gcd of its entries, making the first nonzero positive."""
    g = 0
    lead = 0
    for v in row:
        if v:
            if lead == 0:
                lead = v
            g = gcd(g, v)
    if g == 0:
        return row
    if lead < 0:
        g = -g
    return [v // g for v in row]


def rref_int(rows, ncols):
    """Reduce integer rows; return (primitive echelon rows, pivot columns)."""
    work = [list(r) for r in rows if any(r)]
    out = []
    pivots = []
    col = 0
    while work and col < ncols:
        pivot_row = None
        for i, r in enumerate(work):
            if r[col]:
                pivot_row = i
                break
        if pivot_row is None:
            col += 1
            continue
        piv = work.pop(pivot_row)
        p = piv[col]
        for r in work:
            v = r[col]
            if v:
                for j in range(col, ncols):
                    r[j] = r[j] * p - piv[j] * v
        work = [_reduce_row(r) for r in work]
        work = [r for r in work if any(r)]
        # eliminate this column from rows already placed
        for r in out:
            v = r[col]
            if v:
                for j in range(ncols):
                    r[j] = r[j] * p - piv[j] * v
        out = [_reduce_row(r) for r in out]
        out.append(_reduce_row(piv))
        pivots.append(col)
        col += 1
    return out, pivots
