from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from leibdef.exact_linalg import (
    LinearSolver,
    Subspace,
    as_fraction_array,
    column_space,
    matmul,
    nullspace,
    quotient_basis,
    rank,
    rref,
    solve,
    zeros,
)

F = Fraction


def mat(rows):
    return as_fraction_array(rows)


def rational_matrices(max_rows=5, max_cols=5):
    entry = st.builds(Fraction, st.integers(-6, 6), st.sampled_from([1, 1, 1, 2, 3]))
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(entry, min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


def test_rref_examples():
    r, piv = rref(mat([[1, 0], [0, 1]]))
    assert r.tolist() == [[1, 0], [0, 1]] and piv == [0, 1]
    r, piv = rref(zeros((2, 3)))
    assert all(x == 0 for x in r.reshape(-1)) and piv == []
    r, piv = rref(mat([[2, 4], [1, 2]]))
    assert r.tolist() == [[1, 2], [0, 0]] and piv == [0]


def test_rref_is_exact():
    r, _ = rref(mat([[3, 1], [1, 3]]))
    assert r.tolist() == [[1, 0], [0, 1]]
    r, _ = rref(mat([[3, 1, 1]]))
    assert r[0, 1] == F(1, 3) and isinstance(r[0, 1], Fraction)


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_fraction_array([[0.5]])


def test_nullspace_examples():
    assert nullspace(mat(np.eye(3, dtype=int))).dim == 0
    assert nullspace(zeros((3, 3))).dim == 3
    ns = nullspace(mat([[1, 2]]))
    assert ns.dim == 1
    assert ns == Subspace.span([[-2, 1]], 2)
    assert ns.basis == ((F(1), F(-1, 2)),)


def test_column_space_examples():
    assert column_space(mat(np.eye(2, dtype=int))) == Subspace.full(2)
    assert column_space(zeros((2, 2))).dim == 0
    assert column_space(mat([[1], [2]])) == Subspace.span([[1, 2]], 2)


def test_solve_examples():
    b = as_fraction_array([F(1, 2), 7])
    assert list(solve(mat(np.eye(2, dtype=int)), b)) == [F(1, 2), 7]
    assert solve(zeros((2, 2)), as_fraction_array([1, 0])) is None
    assert list(solve(mat([[1, 1]]), as_fraction_array([3]))) == [3, 0]


def test_quotient_basis_examples():
    full = Subspace.full(2)
    assert quotient_basis(full, full) == ()
    assert quotient_basis(Subspace.zero(3), Subspace.full(3)) == (
        (1, 0, 0), (0, 1, 0), (0, 0, 1),
    )
    assert quotient_basis(Subspace.span([[1, 1]], 2), full) == ((F(1), F(0)),)


def test_quotient_basis_rejects_non_subspace():
    with pytest.raises(ValueError):
        quotient_basis(Subspace.span([[1, 0]], 2), Subspace.span([[0, 1]], 2))


def test_linear_solver_reuse():
    solver = LinearSolver(mat([[1, 2], [2, 4], [0, 1]]))
    assert solver.rank == 2
    x = solver.solve(as_fraction_array([1, 2, 5]))
    assert list(x) == [-9, 5]
    assert solver.solve(as_fraction_array([1, 0, 0])) is None


def test_matmul_shapes():
    a = mat([[1, 2], [3, 4]])
    assert matmul(a, mat([[F(1, 2)], [0]])).tolist() == [[F(1, 2)], [F(3, 2)]]
    with pytest.raises(ValueError):
        matmul(a, mat([[1, 2, 3]]))
    assert matmul(zeros((2, 0)), zeros((0, 3))).shape == (2, 3)


@given(rational_matrices())
def test_rank_nullity(rows):
    m = mat(rows)
    assert nullspace(m).dim + column_space(m).dim == m.shape[1]
    assert rank(m) == column_space(m).dim


@given(rational_matrices())
def test_rref_idempotent(rows):
    r, piv = rref(mat(rows))
    r2, piv2 = rref(r)
    assert piv == piv2
    assert r.tolist() == r2.tolist()


@given(rational_matrices())
def test_nullspace_vectors_are_killed(rows):
    m = mat(rows)
    for v in nullspace(m).basis:
        assert all(x == 0 for x in matmul(m, as_fraction_array(v).reshape(-1, 1)).reshape(-1))


@given(rational_matrices(), st.data())
def test_solve_is_exact(rows, data):
    m = mat(rows)
    x0 = as_fraction_array(data.draw(st.lists(st.integers(-4, 4), min_size=m.shape[1], max_size=m.shape[1])))
    b = matmul(m, x0.reshape(-1, 1)).reshape(-1)
    x = solve(m, b)
    assert x is not None
    assert matmul(m, x.reshape(-1, 1)).reshape(-1).tolist() == b.tolist()


@given(
    st.integers(1, 4).flatmap(
        lambda d: st.tuples(
            st.just(d),
            st.lists(st.lists(st.integers(-2, 2), min_size=d, max_size=d), max_size=4),
            st.lists(st.lists(st.integers(-2, 2), min_size=d, max_size=d), max_size=4),
        )
    )
)
def test_canonical_form_iff_equal_sets(args):
    d, u, v = args
    a, b = Subspace.span(u, d), Subspace.span(v, d)
    same_set = a.issubspace(b) and b.issubspace(a)
    assert (a.basis == b.basis) == same_set
    # a spanning set in a different order and scaling gives identical data
    shuffled = [[2 * x for x in row] for row in reversed(u)]
    assert Subspace.span(shuffled, d) == a


@given(
    st.integers(1, 4).flatmap(
        lambda d: st.tuples(
            st.just(d),
            st.lists(st.lists(st.integers(-2, 2), min_size=d, max_size=d), max_size=3),
            st.lists(st.lists(st.integers(-2, 2), min_size=d, max_size=d), max_size=3),
        )
    )
)
def test_quotient_basis_completes(args):
    d, u, v = args
    sub = Subspace.span(u, d)
    within = sub + Subspace.span(v, d)
    comp = quotient_basis(sub, within)
    assert len(comp) == within.dim - sub.dim
    assert Subspace.span(list(sub.basis) + list(comp), d) == within
    assert all(tuple(c) in within for c in comp)
