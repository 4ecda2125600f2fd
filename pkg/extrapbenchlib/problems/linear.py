from __future__ import annotations

import numpy as np
from scipy import sparse

from ..errors import DimensionError
from ..problem import NllsProblem


class LinearProblem(NllsProblem):
    """Affine residual ``f(x) = A x + c``.

    Data come from *x_true* when given, else from *y* (default zeros), so
    inconsistent right-hand sides can be posed as well.
    """
    id = "linear"
    name = "Linear"

    def __init__(self, a, c=None, *, y=None, x_true=None):
        a = sparse.csr_matrix(a, dtype=float)
        super().__init__(a.shape[1], a.shape[0])
        self._a = a
        self._at = a.T.tocsr()
        self._c = np.zeros(self.n_residuals) if c is None else np.asarray(c, dtype=float)
        if self._c.shape != (self.n_residuals,):
            raise DimensionError(f"offset has shape {self._c.shape}, expected ({self.n_residuals},)")
        self._col_sq = np.asarray(a.multiply(a).sum(axis=0)).ravel()

        if x_true is not None:
            self._set_truth(x_true)
        elif y is not None:
            y = np.asarray(y, dtype=float)
            if y.shape != (self.n_residuals,):
                raise DimensionError(f"data has shape {y.shape}, expected ({self.n_residuals},)")
            self.y = y.copy()

    def f(self, x):
        x = self.check_x(x)
        return self._a @ x + self._c

    def jacobian_apply(self, x, v):
        return self._a @ self.check_x(v)

    def jacobian_transpose_apply(self, x, r):
        return self._at @ np.asarray(r, dtype=float)

    def jacobian_diag(self, x):
        if not self.is_square:
            return super().jacobian_diag(x)
        return self._a.diagonal().copy()

    def jtj_diag(self, x):
        return self._col_sq.copy()

    def jacobian_sparse(self, x):
        return self._a.copy()
