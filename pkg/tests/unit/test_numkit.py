import numpy as np
import pytest
from scipy import sparse

from extrapbenchlib.errors import BreakdownError, DimensionError, SingularError
from extrapbenchlib.numkit import (
    KroneckerOperator,
    KronMode,
    empty_basis,
    kron_apply,
    mgs_append,
    solve_normal_from_r,
    solve_upper,
)


def _laplacian_1d(n):
    return sparse.diags([-1.0, 2.0, -1.0], [-1, 0, 1], shape=(n, n))


# ---------------------------------------------------------------------------
# mgs_append
# ---------------------------------------------------------------------------

def test_mgs_append_normalizes_first_column():
    q, r = mgs_append(*empty_basis(2), np.array([3.0, 4.0]))
    np.testing.assert_allclose(q[:, 0], [0.6, 0.8])
    np.testing.assert_allclose(r, [[5.0]])


def test_mgs_append_orthogonal_input():
    q0 = np.array([[1.0], [0.0], [0.0]])
    q, r = mgs_append(q0, np.array([[1.0]]), np.array([0.0, 2.0, 0.0]))
    np.testing.assert_allclose(q[:, 1], [0.0, 1.0, 0.0])
    np.testing.assert_allclose(r, [[1.0, 0.0], [0.0, 2.0]])


def test_mgs_append_reconstructs_random_matrix(rng):
    u = rng.standard_normal((8, 4))
    q, r = empty_basis(8)
    for j in range(4):
        q, r = mgs_append(q, r, u[:, j])

    assert np.max(np.abs(q.T @ q - np.eye(4))) < 1e-12
    assert np.linalg.norm(q @ r - u) / np.linalg.norm(u) < 1e-12
    assert np.allclose(np.tril(r, -1), 0.0)
    # same factor as a one-shot QR up to column signs
    _, r_ref = np.linalg.qr(u)
    np.testing.assert_allclose(np.abs(np.diag(r)), np.abs(np.diag(r_ref)), rtol=1e-12)


def test_mgs_append_many_nearly_dependent_columns(rng):
    base = rng.standard_normal((20, 1))
    u = base + 1e-6 * rng.standard_normal((20, 10))
    q, r = empty_basis(20)
    for j in range(10):
        q, r = mgs_append(q, r, u[:, j])
    assert np.max(np.abs(q.T @ q - np.eye(10))) <= 1e-11
    assert np.linalg.norm(q @ r - u) <= 1e-11 * np.linalg.norm(u)


def test_mgs_append_breakdown_carries_coefficients():
    q, r = mgs_append(*empty_basis(3), np.array([1.0, 0.0, 0.0]))
    with pytest.raises(BreakdownError) as exc:
        mgs_append(q, r, np.array([2.0, 0.0, 0.0]))
    assert exc.value.index == 1
    np.testing.assert_allclose(exc.value.coeffs, [2.0])


def test_mgs_append_zero_vector_breaks_down():
    with pytest.raises(BreakdownError):
        mgs_append(*empty_basis(3), np.zeros(3))


def test_mgs_append_length_mismatch():
    with pytest.raises(DimensionError):
        mgs_append(*empty_basis(3), np.ones(4))


# ---------------------------------------------------------------------------
# triangular solves
# ---------------------------------------------------------------------------

def test_solve_upper_identity():
    np.testing.assert_allclose(solve_upper(np.eye(3), np.array([1.0, 2.0, 3.0])), [1.0, 2.0, 3.0])


def test_solve_upper_by_hand():
    x = solve_upper(np.array([[2.0, 1.0], [0.0, 3.0]]), np.array([4.0, 3.0]))
    np.testing.assert_allclose(x, [1.5, 1.0])


def test_solve_upper_zero_diagonal_is_singular():
    with pytest.raises(SingularError):
        solve_upper(np.array([[1.0, 1.0], [0.0, 0.0]]), np.ones(2))


def test_solve_upper_tiny_diagonal_is_singular():
    with pytest.raises(SingularError):
        solve_upper(np.diag([1.0, 1e-15]), np.ones(2))


def test_solve_upper_dimension_mismatch():
    with pytest.raises(DimensionError):
        solve_upper(np.eye(2), np.ones(3))


def test_solve_normal_diagonal():
    d = solve_normal_from_r(np.diag([2.0, 3.0]), np.ones(2))
    np.testing.assert_allclose(d, [0.25, 1.0 / 9.0])


def test_solve_normal_identity():
    np.testing.assert_allclose(solve_normal_from_r(np.eye(4), np.ones(4)), np.ones(4))


@pytest.mark.parametrize("order", [1, 5, 12, 20])
def test_solve_normal_matches_dense_solve(rng, order):
    r = np.triu(rng.standard_normal((order, order))) + 3.0 * np.eye(order)
    b = rng.standard_normal(order)
    d = solve_normal_from_r(r, b)
    ref = np.linalg.solve(r.T @ r, b)
    assert np.linalg.norm(d - ref) <= 1e-10 * np.linalg.norm(ref)


def test_solve_normal_singular():
    with pytest.raises(SingularError):
        solve_normal_from_r(np.zeros((2, 2)), np.ones(2))


# ---------------------------------------------------------------------------
# Kronecker operators
# ---------------------------------------------------------------------------

def test_kron_apply_zero():
    op = KroneckerOperator(_laplacian_1d(4), KronMode.A_KRON_I)
    np.testing.assert_array_equal(kron_apply(op, np.zeros(16)), np.zeros(16))


def test_kron_apply_laplacian_of_ones():
    l1 = _laplacian_1d(3)
    x = np.ones(9)
    out = (kron_apply(KroneckerOperator(l1, KronMode.A_KRON_I), x)
           + kron_apply(KroneckerOperator(l1, KronMode.I_KRON_A), x))
    np.testing.assert_allclose(out.reshape(3, 3), [[2, 1, 2], [1, 0, 1], [2, 1, 2]])


@pytest.mark.parametrize("mode", list(KronMode))
def test_kron_apply_matches_dense_assembly(rng, mode):
    a = sparse.csr_matrix(rng.standard_normal((4, 4)))
    op = KroneckerOperator(a, mode)
    x = rng.standard_normal(16)
    dense = np.kron(a.toarray(), np.eye(4)) if mode is KronMode.A_KRON_I else np.kron(np.eye(4), a.toarray())
    np.testing.assert_allclose(kron_apply(op, x), dense @ x, atol=1e-13)
    np.testing.assert_allclose(op.assemble().toarray(), dense)


def test_kron_apply_is_linear(rng):
    op = KroneckerOperator(_laplacian_1d(5), KronMode.I_KRON_A)
    x, y = rng.standard_normal(25), rng.standard_normal(25)
    lhs = kron_apply(op, 2.5 * x - 0.5 * y)
    rhs = 2.5 * kron_apply(op, x) - 0.5 * kron_apply(op, y)
    np.testing.assert_allclose(lhs, rhs, atol=1e-13)


def test_kron_transpose_matches_dense(rng):
    d1 = sparse.diags([-1.0, 1.0], [0, 1], shape=(4, 4))
    op = KroneckerOperator(d1, KronMode.A_KRON_I)
    r = rng.standard_normal(16)
    np.testing.assert_allclose(kron_apply(op.transpose(), r), op.assemble().T @ r, atol=1e-13)


def test_kron_apply_length_mismatch():
    op = KroneckerOperator(_laplacian_1d(3), KronMode.A_KRON_I)
    with pytest.raises(DimensionError):
        kron_apply(op, np.ones(8))


def test_kron_operator_requires_square_factor():
    with pytest.raises(DimensionError):
        KroneckerOperator(sparse.csr_matrix(np.ones((2, 3))), KronMode.A_KRON_I)
