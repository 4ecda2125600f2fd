"""Extended 2D Bratu problem on [-3, 3]^2.

    f(x) = L x + alpha D x + lambda exp(x)

with ``L = L1 (x) I + I (x) L1`` and ``D = D1 (x) I``. The stencils carry
no grid-spacing factor; ``y`` is generated from the sampled truth through
the same operator, so the instance is self-consistent at any scale.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from ..models import BRATU_DOMAIN, BratuSpec
from ..numkit import KroneckerOperator, KronMode, kron_apply
from ..problem import NllsProblem

# exp() argument cap for line-search probes far from the solution
EXP_CLAMP = 700.0


def second_difference(n: int) -> sparse.csr_matrix:
    """``tridiag(-1, 2, -1)``."""
    return sparse.diags([-1.0, 2.0, -1.0], [-1, 0, 1], shape=(n, n), format="csr")


def forward_difference(n: int) -> sparse.csr_matrix:
    """-1 on the diagonal, +1 on the superdiagonal; last row keeps only -1."""
    return sparse.diags([-1.0, 1.0], [0, 1], shape=(n, n), format="csr")


def _offdiag_col_sq(a: sparse.csr_matrix) -> np.ndarray:
    col_sq = np.asarray(a.multiply(a).sum(axis=0)).ravel()
    return col_sq - a.diagonal() ** 2


class BratuProblem(NllsProblem):
    id = "bratu"
    name = "Bratu"

    def __init__(self, spec: BratuSpec):
        n = spec.n
        super().__init__(n * n, n * n)
        self.spec = spec

        l1 = second_difference(n)
        d1 = forward_difference(n)
        self._lap_s = KroneckerOperator(l1, KronMode.A_KRON_I)
        self._lap_t = KroneckerOperator(l1, KronMode.I_KRON_A)
        self._conv = KroneckerOperator(d1, KronMode.A_KRON_I)
        self._conv_t = self._conv.transpose()

        # J columns: (L1 + alpha D1) along s, L1 along t, plus the diagonal
        self._jtj_offdiag = np.add.outer(
            _offdiag_col_sq((l1 + spec.alpha * d1).tocsr()),
            _offdiag_col_sq(l1),
        ).ravel()

        s = np.linspace(*BRATU_DOMAIN, n)
        ss, tt = np.meshgrid(s, s, indexing="ij")
        self._set_truth(np.exp(-10.0 * (ss ** 2 + tt ** 2)).ravel())

    @property
    def alpha(self) -> float:
        return self.spec.alpha

    @property
    def lam(self) -> float:
        return self.spec.lam

    def _exp(self, x: np.ndarray) -> np.ndarray:
        return np.exp(np.minimum(x, EXP_CLAMP))

    def linear_apply(self, x: np.ndarray) -> np.ndarray:
        """``(L + alpha D) x``."""
        out = kron_apply(self._lap_s, x) + kron_apply(self._lap_t, x)
        if self.alpha != 0.0:
            out += self.alpha * kron_apply(self._conv, x)
        return out

    def f(self, x):
        x = self.check_x(x)
        return self.linear_apply(x) + self.lam * self._exp(x)

    def jacobian_apply(self, x, v):
        x = self.check_x(x)
        v = self.check_x(v)
        return self.linear_apply(v) + self.lam * self._exp(x) * v

    def jacobian_transpose_apply(self, x, r):
        x = self.check_x(x)
        r = self.check_x(r)
        out = kron_apply(self._lap_s, r) + kron_apply(self._lap_t, r)
        if self.alpha != 0.0:
            out += self.alpha * kron_apply(self._conv_t, r)
        return out + self.lam * self._exp(x) * r

    def jacobian_diag(self, x):
        x = self.check_x(x)
        return 4.0 - self.alpha + self.lam * self._exp(x)

    def jtj_diag(self, x):
        return self._jtj_offdiag + self.jacobian_diag(x) ** 2

    def linear_sparse(self) -> sparse.csr_matrix:
        """Assembled ``L + alpha D``."""
        mat = self._lap_s.assemble() + self._lap_t.assemble()
        if self.alpha != 0.0:
            mat = mat + self.alpha * self._conv.assemble()
        return mat.tocsr()

    def jacobian_sparse(self, x):
        x = self.check_x(x)
        return (self.linear_sparse() + sparse.diags(self.lam * self._exp(x))).tocsr()


def build_bratu(spec: BratuSpec) -> BratuProblem:
    """Extended Bratu instance; ``alpha = 0`` gives the standard problem."""
    return BratuProblem(spec)
