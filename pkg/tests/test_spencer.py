import random
from fractions import Fraction

import pytest

from ocat.linalg import QMatrix, rank
from ocat.spencer import (
    SymbolInput,
    build_tower,
    check_involutive,
    cohomology_dims,
    delta,
    full_symbol,
    multi_indices,
    sym_dim,
    tensor_basis,
    term_dim,
)
from oracles import brute_prolongation_dims, minor_rank, naive_rank


def uxx_symbol():
    # single equation killing the pure second derivative in the first variable
    basis = tensor_basis(2, 2, 1)
    row = [Fraction(1) if b == ((2, 0), 0) else Fraction(0) for b in basis]
    return SymbolInput(2, 1, 2, QMatrix([row], 3))


def uxx_uyy_symbol():
    basis = tensor_basis(2, 2, 1)
    rows = [
        [Fraction(1) if b == ((2, 0), 0) else Fraction(0) for b in basis],
        [Fraction(1) if b == ((0, 2), 0) else Fraction(0) for b in basis],
    ]
    return SymbolInput(2, 1, 2, QMatrix(rows, 3))


def zero_symbol(n=2, k=1, q=1):
    return SymbolInput(n, k, q, QMatrix.identity(sym_dim(n, q) * k))


def test_monomial_order_canonical():
    assert multi_indices(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert multi_indices(3, 1) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_full_symbol_prolongation_dims_are_binomials():
    # no relations: the prolongation is the whole symmetric power
    tower = build_tower(full_symbol(2, 1, 1), 3)
    assert [tower.level(r).dim for r in range(4)] == [2, 3, 4, 5]
    tower3 = build_tower(full_symbol(3, 2, 1), 2)
    assert [tower3.level(r).dim for r in range(3)] == [6, 12, 20]


def test_zero_symbol_prolongations_vanish():
    tower = build_tower(zero_symbol(), 3)
    assert all(tower.level(r).dim == 0 for r in range(4))


def test_uxx_prolongations_match_brute_force():
    sym = uxx_symbol()
    tower = build_tower(sym, 4)
    got = [tower.level(r).dim for r in range(5)]
    want = brute_prolongation_dims(2, 1, 2, [[1, 0, 0]], 4)
    assert got == want == [2, 2, 2, 2, 2]


def test_random_symbol_prolongations_match_brute_force():
    rng = random.Random(11)
    basis = tensor_basis(2, 2, 2)
    for _ in range(4):
        rows = [[Fraction(rng.randint(-2, 2)) for _ in basis] for _ in range(2)]
        sym = SymbolInput(2, 2, 2, QMatrix(rows, len(basis)))
        tower = build_tower(sym, 2)
        got = [tower.level(r).dim for r in range(3)]
        assert got == brute_prolongation_dims(2, 2, 2, rows, 2)


def test_delta_squared_is_zero():
    for sym in (full_symbol(2, 1, 1), uxx_symbol(), full_symbol(3, 1, 2)):
        n = sym.n
        tower = build_tower(sym, 3)
        for r in range(1, 4):
            for l in range(n - 1):
                first = delta(tower, r, l)
                second = delta(tower, r, l + 1)
                assert (second * first).is_zero()


def test_delta_on_one_variable_is_injective_derivative():
    sym = full_symbol(1, 1, 1)
    tower = build_tower(sym, 3)
    for r in range(1, 4):
        mat = delta(tower, r, 0)
        assert kernel_dim(mat) == 0


def kernel_dim(mat):
    from ocat.linalg import kernel

    return kernel(mat).dim


def test_full_symbol_ranks_match_minor_oracle():
    sym = full_symbol(2, 1, 1)
    tower = build_tower(sym, 2)
    for r in (1, 2):
        for l in range(2):
            mat = delta(tower, r, l)
            rows = [list(row) for row in mat.rows]
            assert rank(mat) == minor_rank(rows)


def test_full_symbols_acyclic():
    for n in (1, 2, 3):
        for q in (1, 2):
            rep = check_involutive(full_symbol(n, 1, q), 4 if n < 3 else 3)
            assert rep.involutive, (n, q, rep.table)


def test_euler_characteristic_identity():
    for sym in (full_symbol(2, 1, 1), uxx_symbol(), uxx_uyy_symbol()):
        n = sym.n
        r_max = 3
        tower = build_tower(sym, r_max)
        for r in range(1, r_max + 1):
            dims = cohomology_dims(sym, r, tower)
            lhs = sum((-1) ** l * term_dim(tower, r, l) for l in range(n + 1))
            rhs = sum((-1) ** l * dims[l] for l in range(n + 1))
            assert lhs == rhs


def test_uxx_involutive_and_crosschecked():
    rep = check_involutive(uxx_symbol(), 4)
    assert rep.involutive
    # cohomology recomputed with the naive eliminator
    tower = build_tower(uxx_symbol(), 4)
    for r in range(1, 5):
        dims = []
        mats = [delta(tower, r, l) for l in range(2)]
        for l in range(3):
            tdim = term_dim(tower, r, l)
            ker = tdim - naive_rank([list(row) for row in mats[l].rows]) if l < 2 else tdim
            im = naive_rank([list(row) for row in mats[l - 1].rows]) if l > 0 else 0
            dims.append(ker - im)
        assert dims == cohomology_dims(uxx_symbol(), r, tower) == [0, 0, 0]


def test_two_equation_symbol_not_involutive():
    rep = check_involutive(uxx_uyy_symbol(), 3)
    assert not rep.involutive
    assert rep.first_nonzero() == (2, 2)
    assert rep.table[2] == [0, 0, 1]


def test_truncated_tower_detected():
    # replacing the top prolongation with a strict subspace breaks exactness
    sym = uxx_symbol()
    tower = build_tower(sym, 1)
    from ocat.linalg import Subspace

    full = tower.spaces[1]
    cut = Subspace.from_rows(full.ambient, [full.basis.rows[0]])
    tower.spaces[1] = cut
    dims = cohomology_dims(sym, 1, tower)
    assert dims[1] != 0
    # the naive eliminator sees the same defect
    mats = [delta(tower, 1, l) for l in range(2)]
    ker1 = term_dim(tower, 1, 1) - naive_rank([list(r) for r in mats[1].rows])
    im1 = naive_rank([list(r) for r in mats[0].rows])
    assert ker1 - im1 == dims[1] != 0


def test_zero_symbol_cohomology_all_zero_once_terms_vanish():
    sym = zero_symbol()
    for r in (2, 3, 4):  # all terms are zero spaces from r = n on
        assert cohomology_dims(sym, r) == [0, 0, 0]


def test_contraction_closure_of_prolongations():
    from ocat.spencer import partial_matrix

    sym = uxx_symbol()
    tower = build_tower(sym, 3)
    for r in range(1, 4):
        space = tower.level(r)
        prev = tower.level(r - 1)
        for vec in space.basis.rows:
            for i in range(sym.n):
                d = partial_matrix(sym.n, sym.k, sym.q + r, i)
                assert prev.contains(d.apply(list(vec)))


def test_involutive_rejects_bad_rmax():
    with pytest.raises(ValueError):
        check_involutive(full_symbol(2, 1, 1), 0)
