"""Independent oracles: deliberately separate implementations used to
cross-check package results.  Everything here is written directly from
first principles (textbook elimination, minor expansion, explicit
constraint enumeration) and never calls the package's linear algebra
kernels.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def naive_rref(rows):
    """Plain Gauss-Jordan over Fraction lists; returns (rref rows, rank)."""
    m = [[Fraction(v) for v in row] for row in rows]
    if not m:
        return [], 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(m)):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        m[rank] = [v / pv for v in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return [row for row in m if any(row)], rank


def naive_rank(rows):
    return naive_rref(rows)[1]


def det(matrix):
    """Fraction determinant by expansion with elimination-free recursion."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return matrix[0][0]
    total = Fraction(0)
    sign = 1
    for j in range(n):
        if matrix[0][j] != 0:
            minor = [[row[k] for k in range(n) if k != j] for row in matrix[1:]]
            total += sign * matrix[0][j] * det(minor)
        sign = -sign
    return total


def minor_rank(rows, max_minors=200000):
    """Rank via nonzero minors: the largest size with a nonvanishing minor.

    Checks sizes downward from the dimension bound; raises if the minor
    count exceeds the budget (callers fall back to feasible instances).
    """
    m = [[Fraction(v) for v in row] for row in rows]
    if not m or not m[0]:
        return 0
    nr, nc = len(m), len(m[0])
    for size in range(min(nr, nc), 0, -1):
        row_sets = list(combinations(range(nr), size))
        col_sets = list(combinations(range(nc), size))
        if len(row_sets) * len(col_sets) > max_minors:
            raise ValueError("minor budget exceeded")
        for rs in row_sets:
            for cs in col_sets:
                sub = [[m[r][c] for c in cs] for r in rs]
                if det(sub) != 0:
                    return size
    return 0


# ------------------------------------------------- symbol prolongations


def monomials(n, d):
    """Exponent tuples of total degree d, lexicographically descending."""
    if d < 0:
        return []
    if n == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in monomials(n - 1, d - first):
            out.append((first,) + rest)
    return out


def brute_prolongation_dims(n, k, q, relation_rows, r_max):
    """Prolongation dimensions by direct constraint assembly.

    A degree-(q+r) tensor lies in the r-th prolongation when every
    iterated derivative of total order r satisfies the original
    relations; this version writes those conditions monomial by
    monomial instead of iterating one kernel at a time.
    """
    dims = []
    base = monomials(n, q)
    for r in range(r_max + 1):
        top = monomials(n, q + r)
        ambient = [(alpha, j) for alpha in top for j in range(k)]
        pos = {b: i for i, b in enumerate(ambient)}
        constraints = []
        for deriv in monomials(n, r):
            # coefficient of x^beta in d^deriv (x^alpha) is
            # prod_i (alpha_i)! / (alpha_i - deriv_i)! when alpha = beta + deriv
            for row in relation_rows:
                constraint = [Fraction(0)] * len(ambient)
                for col_idx, (beta, j) in enumerate(
                    (b, jj) for b in base for jj in range(k)
                ):
                    coeff = row[col_idx]
                    if coeff == 0:
                        continue
                    alpha = tuple(b + d for b, d in zip(beta, deriv))
                    mult = Fraction(1)
                    for ai, di in zip(alpha, deriv):
                        for step in range(di):
                            mult *= ai - step
                    constraint[pos[(alpha, j)]] += coeff * mult
                constraints.append(constraint)
        rank = naive_rank(constraints) if constraints else 0
        dims.append(len(ambient) - rank)
    return dims
