"""Cohomological involutivity test for linear PDE symbols.

A symbol of order q in n variables with k unknowns is a subspace
g of S_q(Q^n) tensor Q^k, given by linear relations on the coefficient
basis.  Prolongations raise the degree; the boundary-style maps
delta: g^(r-l) (x) Lambda^l -> g^(r-l-1) (x) Lambda^(l+1) act on the
polynomial model by P (x) w |-> sum_i dP/dx_i (x) (dx_i ^ w).  The system
is involutive (up to the swept range) exactly when every such complex is
exact at every position.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from ocat.linalg import QMatrix, Subspace, kernel, rank


def multi_indices(n: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors over n variables of the given total degree.

    Order within a degree is lexicographically descending on the tuple,
    so x1^d comes first and xn^d last.
    """
    if degree < 0:
        return []
    if n == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in multi_indices(n - 1, degree - first):
            out.append((first,) + rest)
    return out


def sym_dim(n: int, degree: int) -> int:
    if degree < 0:
        return 0
    return len(multi_indices(n, degree))


def tensor_basis(n: int, degree: int, k: int) -> list[tuple[tuple[int, ...], int]]:
    """Coordinate basis of S_degree (x) Q^k: multi-index major, component minor."""
    return [(alpha, j) for alpha in multi_indices(n, degree) for j in range(k)]


def wedge_basis(n: int, l: int) -> list[tuple[int, ...]]:
    """Sorted index tuples for Lambda^l(Q^n)."""
    return [tuple(c) for c in combinations(range(n), l)]


def partial_matrix(n: int, k: int, degree: int, i: int) -> QMatrix:
    """Matrix of d/dx_i from S_degree (x) Q^k to S_(degree-1) (x) Q^k."""
    src = tensor_basis(n, degree, k)
    tgt = tensor_basis(n, degree - 1, k)
    tgt_pos = {b: p for p, b in enumerate(tgt)}
    rows = [[Fraction(0)] * len(src) for _ in tgt]
    for col, (alpha, j) in enumerate(src):
        if alpha[i] == 0:
            continue
        shifted = list(alpha)
        shifted[i] -= 1
        rows[tgt_pos[(tuple(shifted), j)]][col] = Fraction(alpha[i])
    return QMatrix(rows, len(src))


@dataclass(frozen=True)
class SymbolInput:
    """Order-q symbol: relation rows over the basis of S_q (x) Q^k."""

    n: int
    k: int
    q: int
    relations: QMatrix

    def __post_init__(self):
        ambient = sym_dim(self.n, self.q) * self.k
        if self.relations.ncols != ambient:
            raise ValueError(
                f"relations have {self.relations.ncols} columns, expected {ambient}"
            )


def full_symbol(n: int, k: int, q: int) -> SymbolInput:
    return SymbolInput(n, k, q, QMatrix([], sym_dim(n, q) * k))


@dataclass
class ProlongationTower:
    symbol: SymbolInput
    spaces: list[Subspace] = field(default_factory=list)  # spaces[r] = g^(r)

    def level(self, r: int) -> Subspace:
        """g^(r); for r < 0 the full symmetric power (zero below degree 0)."""
        n, k, q = self.symbol.n, self.symbol.k, self.symbol.q
        if r < 0:
            ambient = sym_dim(n, q + r) * k
            return Subspace.full(ambient) if ambient else Subspace.zero(0)
        if r >= len(self.spaces):
            raise ValueError(f"tower only built up to r={len(self.spaces) - 1}")
        return self.spaces[r]


def prolong(sym: SymbolInput, r: int) -> Subspace:
    """r-th prolongation of the symbol, as one exact kernel computation."""
    return build_tower(sym, r).level(r)


def build_tower(sym: SymbolInput, r_max: int) -> ProlongationTower:
    n, k, q = sym.n, sym.k, sym.q
    tower = ProlongationTower(sym)
    tower.spaces.append(kernel(sym.relations))
    for r in range(1, r_max + 1):
        prev = tower.spaces[r - 1]
        ambient_prev = sym_dim(n, q + r - 1) * k
        # membership in prev is  K_prev . v = 0  with K_prev = ann(prev)
        if prev.dim:
            ann = kernel(prev.basis).basis
        else:
            ann = QMatrix.identity(ambient_prev)
        stacked = []
        for i in range(n):
            di = partial_matrix(n, k, q + r, i)
            stacked.extend((ann * di).rows)
        ambient = sym_dim(n, q + r) * k
        space = kernel(QMatrix(stacked, ambient)) if stacked else Subspace.full(ambient)
        for vec in space.basis.rows:
            for i in range(n):
                di = partial_matrix(n, k, q + r, i)
                if not prev.contains(di.apply(vec)):
                    raise AssertionError("prolongation basis vector escapes the tower")
        tower.spaces.append(space)
    return tower


def _wedge_insert(i: int, taken: tuple[int, ...]):
    """Sign and sorted tuple for dx_i ^ dx_taken, or None when i is taken."""
    if i in taken:
        return None
    before = sum(1 for t in taken if t < i)
    merged = tuple(sorted(taken + (i,)))
    return (-1) ** before, merged


def delta(tower: ProlongationTower, r: int, l: int) -> QMatrix:
    """Matrix of delta: g^(r-l) (x) Lambda^l -> g^(r-l-1) (x) Lambda^(l+1)."""
    sym = tower.symbol
    n, k, q = sym.n, sym.k, sym.q
    if not 0 <= l < n:
        raise ValueError(f"position l={l} outside 0..{n - 1}")
    src_space = tower.level(r - l)
    tgt_space = tower.level(r - l - 1)
    src_wedges = wedge_basis(n, l)
    tgt_wedges = wedge_basis(n, l + 1)
    tgt_wpos = {w: p for p, w in enumerate(tgt_wedges)}
    srows = src_space.basis.rows
    tdim = tgt_space.dim
    ncols = len(srows) * len(src_wedges)
    rows = [[Fraction(0)] * ncols for _ in range(tdim * len(tgt_wedges))]
    partials = [partial_matrix(n, k, q + r - l, i) for i in range(n)]
    for sv, vec in enumerate(srows):
        for sw, wedge in enumerate(src_wedges):
            col = sv * len(src_wedges) + sw
            for i in range(n):
                ins = _wedge_insert(i, wedge)
                if ins is None:
                    continue
                sign, merged = ins
                dvec = partials[i].apply(vec)
                coords = _coords_in(tgt_space, dvec)
                wrow = tgt_wpos[merged]
                for t, cval in enumerate(coords):
                    if cval:
                        rows[t * len(tgt_wedges) + wrow][col] += sign * cval
    return QMatrix(rows, ncols)


def _coords_in(space: Subspace, vec):
    from ocat.linalg import coordinates

    coords = coordinates(space, vec)
    if coords is None:
        raise AssertionError("delta image left the target subspace")
    return coords


def term_dim(tower: ProlongationTower, r: int, l: int) -> int:
    n = tower.symbol.n
    return tower.level(r - l).dim * len(wedge_basis(n, l))


def cohomology_dims(sym: SymbolInput, r: int, tower: ProlongationTower | None = None) -> list[int]:
    """Cohomology dimensions at positions l = 0..n of the degree-r complex.

    Position 0 receives nothing; position n maps to zero, so its kernel
    is the whole term.
    """
    if r < 1:
        raise ValueError("complex needs r >= 1")
    n = sym.n
    if tower is None:
        tower = build_tower(sym, r)
    dims = []
    maps = [delta(tower, r, l) for l in range(n)]
    for l in range(n + 1):
        tdim = term_dim(tower, r, l)
        ker_dim = tdim - rank(maps[l]) if l < n else tdim
        im_dim = rank(maps[l - 1]) if l > 0 else 0
        dims.append(ker_dim - im_dim)
    return dims


@dataclass
class InvolutivityReport:
    involutive: bool
    r_max: int
    table: dict[int, list[int]]  # r -> [dim H^0, ..., dim H^n]

    def first_nonzero(self):
        for r in sorted(self.table):
            for l, h in enumerate(self.table[r]):
                if h:
                    return (r, l)
        return None


def check_involutive(sym: SymbolInput, r_max: int) -> InvolutivityReport:
    """Involutive up to r_max iff every complex 1 <= r <= r_max is exact."""
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    tower = build_tower(sym, r_max)
    table = {r: cohomology_dims(sym, r, tower) for r in range(1, r_max + 1)}
    ok = all(all(h == 0 for h in row) for row in table.values())
    return InvolutivityReport(ok, r_max, table)
