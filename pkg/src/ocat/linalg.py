"""Exact rational matrices, row spaces, kernels, and solving.

Everything is over Q (fractions.Fraction); no floating point anywhere.
Subspaces are kept with their basis in reduced row echelon form, so two
subspaces are equal exactly when their basis matrices are equal.

The elimination kernel has two interchangeable backends: a compiled
Cython extension and a pure-Python fallback, selected at import time
(force the fallback with OCAT_PURE_LINALG=1).
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import lcm

from ocat import _rref_py

try:
    from ocat import _rref_c
except ImportError:  # extension not built
    _rref_c = None

if _rref_c is not None and os.environ.get("OCAT_PURE_LINALG") != "1":
    _rref_int = _rref_c.rref_int
    BACKEND = "compiled"
else:
    _rref_int = _rref_py.rref_int
    BACKEND = "pure"


class LinAlgError(ValueError):
    pass


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise LinAlgError(f"not a rational scalar: {x!r}")


class QMatrix:
    """Immutable dense matrix over Q."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols=None):
        rows = tuple(tuple(_q(v) for v in r) for r in rows)
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise LinAlgError("ragged rows")
        elif ncols is None:
            raise LinAlgError("empty matrix needs an explicit column count")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def identity(cls, n):
        return cls([[Fraction(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls([[Fraction(0)] * ncols for _ in range(nrows)], ncols)

    def __eq__(self, other):
        return isinstance(other, QMatrix) and self.rows == other.rows and self.ncols == other.ncols

    def __hash__(self):
        return hash((self.rows, self.ncols))

    def __repr__(self):
        return f"QMatrix({[[str(v) for v in r] for r in self.rows]}, ncols={self.ncols})"

    def transpose(self) -> "QMatrix":
        return QMatrix([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)], self.nrows)

    def __mul__(self, other: "QMatrix") -> "QMatrix":
        if self.ncols != other.nrows:
            raise LinAlgError(f"shape mismatch {self.nrows}x{self.ncols} * {other.nrows}x{other.ncols}")
        ot = other.transpose()
        return QMatrix(
            [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ot.rows] for r in self.rows],
            other.ncols,
        )

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise LinAlgError("shape mismatch in addition")
        return QMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise LinAlgError("shape mismatch in subtraction")
        return QMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def scale(self, k) -> "QMatrix":
        k = _q(k)
        return QMatrix([[k * v for v in r] for r in self.rows], self.ncols)

    def apply(self, vec):
        """Matrix times column vector (a sequence of scalars)."""
        vec = [_q(v) for v in vec]
        if len(vec) != self.ncols:
            raise LinAlgError("vector length mismatch")
        return [sum((a * b for a, b in zip(r, vec)), Fraction(0)) for r in self.rows]

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.rows for v in r)


def _int_rows(m: QMatrix):
    out = []
    for r in m.rows:
        mult = lcm(*(v.denominator for v in r)) if r else 1
        out.append([int(v * mult) for v in r])
    return out


def rref(m: QMatrix) -> QMatrix:
    """Reduced row echelon form with unit pivots; zero rows dropped."""
    red, pivots = _rref_int(_int_rows(m), m.ncols)
    return QMatrix([[Fraction(v, r[p]) for v in r] for r, p in zip(red, pivots)], m.ncols)


def rank(m: QMatrix) -> int:
    return len(_rref_int(_int_rows(m), m.ncols)[0])


class Subspace:
    """A linear subspace of Q^n held as an RREF basis (rows independent)."""

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient: int, basis: QMatrix):
        if basis.ncols != ambient:
            raise LinAlgError("basis does not live in the stated ambient space")
        self.ambient = ambient
        self.basis = basis

    @classmethod
    def from_rows(cls, ambient: int, rows) -> "Subspace":
        return cls(ambient, rref(QMatrix(rows, ambient)))

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, QMatrix([], ambient))

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls(ambient, QMatrix.identity(ambient))

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of Q^{self.ambient})"

    def contains(self, vec) -> bool:
        vec = [_q(v) for v in vec]
        if len(vec) != self.ambient:
            raise LinAlgError("vector length mismatch")
        rest = list(vec)
        for row in self.basis.rows:
            p = next((j for j, v in enumerate(row) if v), None)
            if p is None:
                continue
            coef = rest[p] / row[p]
            if coef:
                rest = [a - coef * b for a, b in zip(rest, row)]
        return all(v == 0 for v in rest)

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.basis.rows)


def kernel(m: QMatrix) -> Subspace:
    """Null space {x : Mx = 0} of an nrows x ncols matrix."""
    red, pivots = _rref_int(_int_rows(m), m.ncols)
    pivset = set(pivots)
    free = [j for j in range(m.ncols) if j not in pivset]
    basis = []
    for f in free:
        vec = [Fraction(0)] * m.ncols
        vec[f] = Fraction(1)
        for row, p in zip(red, pivots):
            vec[p] = Fraction(-row[f], row[p])
        basis.append(vec)
    return Subspace.from_rows(m.ncols, basis) if basis else Subspace.zero(m.ncols)


def image(m: QMatrix) -> Subspace:
    """Column space of M, i.e. the image of x -> Mx."""
    return Subspace(m.nrows, rref(m.transpose()))


def row_space(m: QMatrix) -> Subspace:
    return Subspace(m.ncols, rref(m))


def sum_spaces(s: Subspace, t: Subspace) -> Subspace:
    if s.ambient != t.ambient:
        raise LinAlgError("ambient mismatch")
    return Subspace.from_rows(s.ambient, list(s.basis.rows) + list(t.basis.rows))


def intersect(s: Subspace, t: Subspace) -> Subspace:
    """Intersection via (S^perp + T^perp)^perp, all exact."""
    if s.ambient != t.ambient:
        raise LinAlgError("ambient mismatch")
    s_perp = kernel(s.basis) if s.dim else Subspace.full(s.ambient)
    t_perp = kernel(t.basis) if t.dim else Subspace.full(t.ambient)
    both = sum_spaces(s_perp, t_perp)
    if both.dim == 0:
        return Subspace.full(s.ambient)
    return kernel(both.basis)


def quotient_dim(s: Subspace, t: Subspace) -> int:
    """dim(T/S) for S a subspace of T; raises if S is not contained in T."""
    if s.ambient != t.ambient:
        raise LinAlgError("ambient mismatch")
    if not t.contains_space(s):
        raise LinAlgError("quotient requires containment")
    return t.dim - s.dim


def solve(m: QMatrix, b):
    """One solution x of Mx = b, or None when inconsistent."""
    b = [_q(v) for v in b]
    if len(b) != m.nrows:
        raise LinAlgError("right-hand side length mismatch")
    aug = QMatrix([list(r) + [v] for r, v in zip(m.rows, b)] or [], m.ncols + 1)
    red, pivots = _rref_int(_int_rows(aug), m.ncols + 1)
    x = [Fraction(0)] * m.ncols
    for row, p in zip(red, pivots):
        if p == m.ncols:
            return None
        x[p] = Fraction(row[m.ncols], row[p])
    return x


def coordinates(s: Subspace, vec):
    """Coordinates of vec in the RREF basis of s, or None if outside."""
    vec = [_q(v) for v in vec]
    if s.dim == 0:
        return [] if all(v == 0 for v in vec) else None
    return solve(s.basis.transpose(), vec)
