import numpy as np
import pytest
from scipy import sparse

from extrapbenchlib.models import BratuSpec, SequenceWindow
from extrapbenchlib.problem import NllsProblem
from extrapbenchlib.problems import build_bratu, build_sparse_sine


class ScalarSquare(NllsProblem):
    """f(x) = x^2 in R^1, for hand-checkable Newton and line-search cases."""
    id = "scalar"
    name = "Scalar square"

    def __init__(self, y=1.0):
        super().__init__(1, 1)
        self.y = np.array([float(y)])

    def f(self, x):
        x = self.check_x(x)
        return x ** 2

    def jacobian_apply(self, x, v):
        return 2.0 * self.check_x(x) * v

    def jacobian_transpose_apply(self, x, r):
        return 2.0 * self.check_x(x) * r

    def jacobian_diag(self, x):
        return 2.0 * self.check_x(x)

    def jtj_diag(self, x):
        return 4.0 * self.check_x(x) ** 2

    def jacobian_sparse(self, x):
        return sparse.csr_matrix([[2.0 * self.check_x(x)[0]]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def scalar_square():
    return ScalarSquare()


@pytest.fixture
def small_bratu():
    """Extended Bratu on a 6x6 grid, alpha=1, lambda=10."""
    return build_bratu(BratuSpec(n=6, alpha=1.0, lam=10.0))


@pytest.fixture
def sparse50():
    return build_sparse_sine(50)


@pytest.fixture
def sequences():
    """Factory for linearly generated windows s_{k+1} = M s_k + b."""

    class Factory:
        @staticmethod
        def linear(dim, n_vectors, rng, radius=0.9, symmetric=True):
            """Return ``(window, fixed_point)``.

            Symmetric maps get Chebyshev-node eigenvalues scaled to
            *radius*; otherwise a Gaussian matrix is rescaled to spectral
            radius *radius*.
            """
            if symmetric:
                q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
                k = np.arange(dim)
                eig = radius * np.cos(np.pi * (2 * k + 1) / (2 * dim))
                m = (q * eig) @ q.T
            else:
                a = rng.standard_normal((dim, dim))
                m = a * (radius / np.max(np.abs(np.linalg.eigvals(a))))
            b = rng.standard_normal(dim)
            vecs = [rng.standard_normal(dim)]
            for _ in range(n_vectors - 1):
                vecs.append(m @ vecs[-1] + b)
            limit = np.linalg.solve(np.eye(dim) - m, b)
            return SequenceWindow(tuple(vecs)), limit

        @staticmethod
        def geometric(ratio, direction, n_vectors):
            direction = np.asarray(direction, dtype=float)
            return SequenceWindow(tuple(ratio ** k * direction for k in range(n_vectors)))

    return Factory()
