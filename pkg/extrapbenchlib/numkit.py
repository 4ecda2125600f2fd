"""Small linear-algebra kernels used by the extrapolation methods and the
problem operators.

* :func:`mgs_append` grows a thin QR factorization one column at a time
  (modified Gram-Schmidt with one reorthogonalization pass).
* :func:`solve_upper` / :func:`solve_normal_from_r` solve with the
  triangular factor.
* :class:`KroneckerOperator` / :func:`kron_apply` apply ``A (x) I`` or
  ``I (x) A`` to a vectorized n x n grid without forming the n^2 x n^2
  matrix.

Dense matrices are plain ``numpy`` arrays; banded factors are
``scipy.sparse`` matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import sparse
from scipy.linalg import solve_triangular

from .errors import BreakdownError, DimensionError, SingularError

BREAKDOWN_TOL = 1e-14
SINGULAR_TOL = 1e-14


# ---------------------------------------------------------------------------
# Incremental QR
# ---------------------------------------------------------------------------


def empty_basis(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Return the (Q, R) pair of an empty factorization in R^n."""
    return np.zeros((n, 0)), np.zeros((0, 0))


def mgs_append(
    q_basis: np.ndarray,
    r: np.ndarray,
    v: np.ndarray,
    *,
    breakdown_tol: float = BREAKDOWN_TOL,
) -> tuple[np.ndarray, np.ndarray]:
    """Append column *v* to the factorization ``U = Q R``.

    Returns new ``(Q, R)`` with one more column each. Raises
    :class:`BreakdownError` when the orthogonalized remainder of *v* is
    below ``breakdown_tol * ||v||``; the error carries the projection
    coefficients of *v* onto the current basis.
    """
    v = np.asarray(v, dtype=float).ravel()
    n, k = q_basis.shape
    if v.shape[0] != n:
        raise DimensionError(f"column has length {v.shape[0]}, basis has {n} rows")

    w = v.copy()
    coeffs = np.zeros(k)
    for _ in range(2):  # MGS plus one reorthogonalization pass
        for j in range(k):
            c = q_basis[:, j] @ w
            w -= c * q_basis[:, j]
            coeffs[j] += c

    rho = float(np.linalg.norm(w))
    v_norm = float(np.linalg.norm(v))
    # k == n: the basis already spans R^n
    if k >= n or rho <= breakdown_tol * v_norm:
        raise BreakdownError(
            f"column {k} is numerically dependent on the basis "
            f"(residual {rho:.3e}, norm {v_norm:.3e})",
            index=k,
            coeffs=coeffs,
        )

    new_q = np.empty((n, k + 1))
    new_q[:, :k] = q_basis
    new_q[:, k] = w / rho
    new_r = np.zeros((k + 1, k + 1))
    new_r[:k, :k] = r
    new_r[:k, k] = coeffs
    new_r[k, k] = rho
    return new_q, new_r


# ---------------------------------------------------------------------------
# Triangular solves
# ---------------------------------------------------------------------------


def _check_nonsingular(r: np.ndarray) -> None:
    diag = np.abs(np.diag(r))
    if diag.size == 0:
        return
    dmax = float(diag.max())
    if dmax == 0.0 or np.any(diag < SINGULAR_TOL * dmax):
        raise SingularError(
            f"triangular factor is singular (min |diag| {diag.min():.3e}, "
            f"max |diag| {dmax:.3e})"
        )


def solve_upper(r: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Back substitution: return x with ``r @ x = b``."""
    r = np.asarray(r, dtype=float)
    b = np.asarray(b, dtype=float)
    if r.shape[0] != b.shape[0]:
        raise DimensionError(f"rhs has length {b.shape[0]}, factor has order {r.shape[0]}")
    _check_nonsingular(r)
    if r.shape[0] == 0:
        return np.zeros(0)
    return solve_triangular(r, b, lower=False)


def solve_normal_from_r(r: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``R^T R d = b`` with a forward and a backward triangular solve."""
    r = np.asarray(r, dtype=float)
    b = np.asarray(b, dtype=float)
    if r.shape[0] != b.shape[0]:
        raise DimensionError(f"rhs has length {b.shape[0]}, factor has order {r.shape[0]}")
    _check_nonsingular(r)
    if r.shape[0] == 0:
        return np.zeros(0)
    z = solve_triangular(r, b, trans="T", lower=False)
    return solve_triangular(r, z, lower=False)


# ---------------------------------------------------------------------------
# Kronecker-structured operators
# ---------------------------------------------------------------------------


class KronMode(Enum):
    A_KRON_I = "A(x)I"
    I_KRON_A = "I(x)A"


@dataclass(frozen=True)
class KroneckerOperator:
    """``A (x) I`` or ``I (x) A`` for a square banded factor ``A``.

    Grid vectors are vectorized row-major: ``x[i * n + j]`` is grid point
    ``(i, j)``, so ``A (x) I`` acts along the first grid index.
    """
    factor_a: sparse.csr_matrix
    mode: KronMode

    def __post_init__(self):
        a = sparse.csr_matrix(self.factor_a, dtype=float)
        if a.shape[0] != a.shape[1]:
            raise DimensionError(f"Kronecker factor must be square, got {a.shape}")
        object.__setattr__(self, "factor_a", a)

    @property
    def n(self) -> int:
        return self.factor_a.shape[0]

    def transpose(self) -> "KroneckerOperator":
        return KroneckerOperator(self.factor_a.T.tocsr(), self.mode)

    def assemble(self) -> sparse.csr_matrix:
        """Explicit n^2 x n^2 sparse matrix (for checks and small solves)."""
        eye = sparse.identity(self.n, format="csr")
        if self.mode is KronMode.A_KRON_I:
            return sparse.kron(self.factor_a, eye, format="csr")
        return sparse.kron(eye, self.factor_a, format="csr")


def kron_apply(op: KroneckerOperator, x: np.ndarray) -> np.ndarray:
    """Apply *op* to *x* (length n^2) through n x n panels."""
    x = np.asarray(x, dtype=float)
    n = op.n
    if x.shape != (n * n,):
        raise DimensionError(f"expected vector of length {n * n}, got shape {x.shape}")
    grid = x.reshape(n, n)
    if op.mode is KronMode.A_KRON_I:
        out = op.factor_a @ grid
    else:
        out = (op.factor_a @ grid.T).T
    return np.ascontiguousarray(out).ravel()
