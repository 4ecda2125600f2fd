from __future__ import annotations

import numpy as np
from scipy import sparse

from ..errors import ConfigError
from ..problem import NllsProblem


class SparseSineProblem(NllsProblem):
    """``f_i(x) = sin(x_i + x_{i+1})``, i = 1..n-1.

    The Jacobian is (n-1) x n upper bidiagonal with both entries of row i
    equal to ``cos(x_i + x_{i+1})``. The truth samples ``t -> sin(t) / 2``
    at the n interior points of an equispaced grid on (-pi, pi).
    """
    id = "sparse"
    name = "Sparse sine"

    def __init__(self, n: int):
        if n < 2:
            raise ConfigError(f"sparse sine problem needs n >= 2, got {n}")
        super().__init__(n, n - 1)
        t = -np.pi + 2.0 * np.pi * np.arange(1, n + 1) / (n + 1)
        self._set_truth(0.5 * np.sin(t))

    def _cos(self, x: np.ndarray) -> np.ndarray:
        return np.cos(x[:-1] + x[1:])

    def f(self, x):
        x = self.check_x(x)
        return np.sin(x[:-1] + x[1:])

    def jacobian_apply(self, x, v):
        x = self.check_x(x)
        v = self.check_x(v)
        return self._cos(x) * (v[:-1] + v[1:])

    def _scatter(self, w: np.ndarray) -> np.ndarray:
        out = np.zeros(self.n_unknowns)
        out[:-1] += w
        out[1:] += w
        return out

    def jacobian_transpose_apply(self, x, r):
        x = self.check_x(x)
        r = np.asarray(r, dtype=float)
        return self._scatter(self._cos(x) * r)

    def jtj_diag(self, x):
        x = self.check_x(x)
        return self._scatter(self._cos(x) ** 2)

    def jacobian_sparse(self, x):
        x = self.check_x(x)
        c = self._cos(x)
        return sparse.diags([c, c], [0, 1], shape=(self.n_residuals, self.n_unknowns), format="csr")


def build_sparse_sine(n: int) -> SparseSineProblem:
    return SparseSineProblem(n)
