"""Row reduction, kernels and solving over F2, checked against enumeration."""

from itertools import product as iproduct

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from a1ext.f2 import F2Matrix, Subspace, kernel_basis, rref, solve


def brute_kernel(m: F2Matrix):
    """Oracle: all kernel vectors by trying every v in F2^ncols."""
    return [v for v in range(1 << m.ncols) if m.apply(v) == 0]


def test_rref_identity():
    rank, pivots, red = rref(F2Matrix.identity(3))
    assert rank == 3
    assert pivots == [0, 1, 2]
    assert red.rows == F2Matrix.identity(3).rows


def test_rref_zero():
    rank, pivots, _ = rref(F2Matrix.zero(2, 4))
    assert rank == 0
    assert pivots == []


def test_rref_rank_one():
    # [[1,1],[1,1]] row reduces to [[1,1],[0,0]]; enumeration agrees
    m = F2Matrix.from_rows([[1, 1], [1, 1]])
    rank, pivots, red = rref(m)
    assert rank == 1
    assert pivots == [0]
    assert red.to_lists() == [[1, 1], [0, 0]]
    assert len(brute_kernel(m)) == 2 ** (m.ncols - rank)


def test_kernel_identity_and_zero():
    assert kernel_basis(F2Matrix.identity(2)) == []
    assert kernel_basis(F2Matrix.zero(1, 3)) == [1, 2, 4]


def test_kernel_example():
    m = F2Matrix.from_rows([[1, 1, 0], [0, 0, 1]])
    basis = kernel_basis(m)
    # enumeration of all 8 vectors gives kernel {000, 110}
    assert brute_kernel(m) == [0, 0b011]
    assert basis == [0b011]


def test_solve_examples():
    assert solve(F2Matrix.identity(2), 0b01) == 0b01
    assert solve(F2Matrix.zero(1, 2), 0b1) is None
    x = solve(F2Matrix.from_rows([[1, 1]]), 0b1)
    assert x in (0b01, 0b10)
    with pytest.raises(ValueError):
        solve(F2Matrix.identity(2), 0b100)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    nrows = draw(st.integers(0, max_rows))
    ncols = draw(st.integers(0, max_cols))
    rows = draw(st.lists(st.integers(0, (1 << ncols) - 1),
                         min_size=nrows, max_size=nrows))
    return F2Matrix(nrows, ncols, rows)


@settings(max_examples=1000, deadline=None)
@given(matrices())
def test_rank_of_transpose(m):
    assert m.rank() == m.transpose().rank()


@settings(max_examples=1000, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    assert m.rank() + len(kernel_basis(m)) == m.ncols


@settings(max_examples=1000, deadline=None)
@given(matrices())
def test_kernel_vectors_annihilate(m):
    basis = kernel_basis(m)
    span = Subspace(m.ncols)
    for v in basis:
        assert m.apply(v) == 0
        assert span.add(v)       # independence
    assert span.dim == m.ncols - m.rank()


@settings(max_examples=1000, deadline=None)
@given(matrices(max_rows=5, max_cols=5), st.integers(0, 31))
def test_solve_iff_in_column_space(m, b):
    b &= (1 << m.nrows) - 1
    x = solve(m, b)
    # rank-augmentation criterion for consistency
    aug = F2Matrix(m.nrows, m.ncols + 1,
                   [m.rows[i] | (((b >> i) & 1) << m.ncols) for i in range(m.nrows)])
    consistent = aug.rank() == m.rank()
    assert (x is not None) == consistent
    if x is not None:
        assert m.apply(x) == b


@settings(max_examples=300, deadline=None)
@given(matrices(max_rows=4, max_cols=4))
def test_rref_preserves_row_space(m):
    _, _, red = rref(m)
    span = Subspace(m.ncols)
    for r in m.rows:
        span.add(r)
    red_span = Subspace(m.ncols)
    for r in red.rows:
        red_span.add(r)
    assert span.rows == red_span.rows


def test_matmul_matches_composition():
    for _ in range(50):
        import random
        rng = random.Random(_)
        a = F2Matrix(3, 4, [rng.randrange(16) for _ in range(3)])
        b = F2Matrix(4, 5, [rng.randrange(32) for _ in range(4)])
        ab = a.matmul(b)
        for v in range(32):
            assert ab.apply(v) == a.apply(b.apply(v))
