import itertools

import numpy as np
import pytest
from conftest import matrices
from hypothesis import given
from hypothesis import strategies as st

from idemext.exactlin import (
    Matrix,
    NoSolution,
    NotInvertible,
    PrimeField,
    _rref_kernel,
    _rref_small,
    batched_rank,
    coset_reduce,
    invert,
    kernel_basis,
    rank,
    rref,
    solve_canonical,
)

F2, F3 = PrimeField(2), PrimeField(3)


def brute_rank(a: np.ndarray, p: int) -> int:
    """log_p of the number of distinct vectors in the row space."""
    rows = a.shape[0]
    span = {tuple((np.array(c) @ a) % p) for c in itertools.product(range(p), repeat=rows)} if rows else {()}
    return round(np.log(len(span)) / np.log(p))


def test_field_rejects_composite():
    with pytest.raises(ValueError):
        PrimeField(4)


def test_rref_known():
    m = F3.matrix([[1, 2, 0], [2, 1, 1]])
    r, piv = rref(m)
    assert piv == [0, 2]
    assert r.to_list() == [[1, 2, 0], [0, 0, 1]]


def test_rank_zero_and_identity():
    assert rank(F2.zeros(3, 2)) == 0
    assert rank(F3.eye(4)) == 4
    assert rank(F2.zeros(0, 3)) == 0


def test_invert_singular():
    with pytest.raises(NotInvertible):
        invert(F2.matrix([[1, 1], [1, 1]]))


def test_solve_inconsistent():
    with pytest.raises(NoSolution):
        solve_canonical(F2.matrix([[1, 1], [1, 1]]), F2.matrix([[0], [1]]))


@given(matrices(max_rows=3, max_cols=3))
def test_rank_matches_brute_force(fm):
    f, a = fm
    assert rank(Matrix(f, a)) == brute_rank(a % f.p, f.p)


@given(matrices())
def test_rank_nullity(fm):
    f, a = fm
    m = Matrix(f, a)
    k = kernel_basis(m)
    assert k.cols + rank(m) == m.cols
    assert (m @ k).is_zero()
    assert rank(k) == k.cols


@given(matrices())
def test_rref_idempotent_and_row_equivalent(fm):
    f, a = fm
    m = Matrix(f, a)
    r, piv = rref(m)
    assert rref(r)[0] == r
    assert len(piv) == rank(m)
    for i, c in enumerate(piv):
        col = r.a[:, c]
        assert col[i] == 1 and col.sum() % f.p == 1


@given(matrices(), matrices())
def test_solve_is_solution(fm, fx):
    f, a = fm
    m = Matrix(f, a)
    x = Matrix(f, np.resize(fx[1], (m.cols, 2)) % f.p) if m.cols else f.zeros(0, 2)
    b = m @ x
    y = solve_canonical(m, b)
    assert m @ y == b


@given(matrices(max_rows=4, max_cols=4))
def test_invert_roundtrip(fm):
    f, a = fm
    n = min(a.shape)
    m = Matrix(f, a[:n, :n])
    if rank(m) == n:
        assert invert(m) @ m == f.eye(n)
        assert m @ invert(m) == f.eye(n)


@given(matrices(max_rows=4, max_cols=3))
def test_coset_reduce_canonical(fm):
    f, a = fm
    basis = Matrix(f, a)
    if basis.rows == 0:
        return
    v = f.matrix(np.arange(basis.rows).reshape(-1, 1) % f.p, shape=(basis.rows, 1))
    w = v + basis @ f.matrix(np.ones((basis.cols, 1), dtype=np.int64), shape=(basis.cols, 1))
    assert coset_reduce(v, basis) == coset_reduce(w, basis)


def test_batched_rank_matches_rank():
    rng = np.random.default_rng(0)
    stack = rng.integers(0, 3, size=(50, 3, 4))
    out = batched_rank(stack, 3)
    assert [rank(Matrix(F3, s)) for s in stack] == out.tolist()


@given(matrices(max_rows=6, max_cols=6), st.integers(0, 6))
def test_small_path_matches_kernel(fm, ncols):
    field, a = fm
    ncols = min(ncols, a.shape[1])
    small = a.copy() % field.p
    piv = _rref_small(small, field.p, ncols)
    big = np.ascontiguousarray(a % field.p)
    assert _rref_kernel(big, field.p, ncols).tolist() == piv
    assert np.array_equal(small, big)
