import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ocat import _rref_py
from ocat.linalg import (
    QMatrix,
    Subspace,
    coordinates,
    image,
    intersect,
    kernel,
    quotient_dim,
    rank,
    rref,
    solve,
    sum_spaces,
)
from oracles import minor_rank, naive_rank

try:
    from ocat import _rref_c
except ImportError:
    _rref_c = None


def test_kernel_of_identity_is_zero():
    assert kernel(QMatrix.identity(4)).dim == 0


def test_kernel_of_difference_row():
    k = kernel(QMatrix([[1, -1]]))
    assert k.dim == 1
    assert k.basis.rows == ((Fraction(1), Fraction(1)),)


def test_rank_matches_minor_oracle_on_random_5x5():
    rng = random.Random(7)
    for _ in range(8):
        rows = [[rng.randint(-4, 4) for _ in range(5)] for _ in range(5)]
        assert rank(QMatrix(rows)) == minor_rank(rows)


def test_rref_idempotent_and_unit_pivots():
    m = QMatrix([[2, 4, 6], [1, 2, 4], [0, 0, 1]])
    r = rref(m)
    assert rref(r) == r
    for row in r.rows:
        lead = next(v for v in row if v != 0)
        assert lead == 1


small = st.integers(min_value=-6, max_value=6)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_nullity(rows):
    m = QMatrix(rows)
    assert rank(m) + kernel(m).dim == m.ncols


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4))
def test_backends_agree(rows):
    pure = _rref_py.rref_int([list(r) for r in rows], 3)
    if _rref_c is not None:
        compiled = _rref_c.rref_int([list(r) for r in rows], 3)
        assert pure == compiled
    assert naive_rank(rows) == len(pure[0])


def test_intersect_self_and_quotient():
    s = Subspace.from_rows(4, [[1, 0, 0, 0], [0, 1, 1, 0]])
    assert intersect(s, s) == s
    assert quotient_dim(s, s) == 0
    full = Subspace.full(4)
    assert quotient_dim(s, full) == 2
    with pytest.raises(Exception):
        quotient_dim(full, s)


def test_intersect_against_rank_formula():
    rng = random.Random(3)
    for _ in range(10):
        a = Subspace.from_rows(4, [[rng.randint(-3, 3) for _ in range(4)] for _ in range(2)])
        b = Subspace.from_rows(4, [[rng.randint(-3, 3) for _ in range(4)] for _ in range(2)])
        inter = intersect(a, b)
        union = sum_spaces(a, b)
        assert inter.dim + union.dim == a.dim + b.dim
        for row in inter.basis.rows:
            assert a.contains(row) and b.contains(row)


def test_solve_consistent_and_inconsistent():
    m = QMatrix([[1, 1], [0, 1]])
    x = solve(m, [3, 2])
    assert m.apply(x) == [Fraction(3), Fraction(2)]
    assert solve(QMatrix([[1, 1], [1, 1]]), [0, 1]) is None


def test_image_and_coordinates():
    m = QMatrix([[1, 0], [0, 1], [1, 1]])
    im = image(m)
    assert im.dim == 2
    s = Subspace.from_rows(3, [[1, 0, 1], [0, 1, 1]])
    coords = coordinates(s, [2, 3, 5])
    assert coords is not None
    rebuilt = [
        sum((c * row[j] for c, row in zip(coords, s.basis.rows)), Fraction(0))
        for j in range(3)
    ]
    assert rebuilt == [Fraction(2), Fraction(3), Fraction(5)]
    assert coordinates(s, [1, 0, 0]) is None
