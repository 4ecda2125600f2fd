from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np
from scipy import sparse

from .errors import DimensionError, ShapeError

# Largest unknown count for which dense Jacobians are formed.
DENSE_LIMIT = 2000


class NllsProblem(ABC):
    """A nonlinear least-squares instance ``min_x ||y - f(x)||^2``.

    Subclasses provide ``f`` and the Jacobian actions; the data ``y`` and
    the optional reference solution ``x_true`` are set at construction and
    never change afterwards, so one instance may be shared by threads.
    """
    id: str = ""
    name: str = ""

    def __init__(self, n_unknowns: int, n_residuals: int):
        self.n_unknowns = int(n_unknowns)
        self.n_residuals = int(n_residuals)
        self.y: np.ndarray = np.zeros(self.n_residuals)
        self.x_true: np.ndarray | None = None

    def _set_truth(self, x_true: np.ndarray) -> None:
        """Store *x_true* and generate consistent data ``y = f(x_true)``."""
        self.x_true = self.check_x(x_true).copy()
        self.y = self.f(self.x_true)

    # -- evaluators ---------------------------------------------------------

    @abstractmethod
    def f(self, x: np.ndarray) -> np.ndarray:
        """Forward map, length ``n_residuals``."""

    @abstractmethod
    def jacobian_apply(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Return ``J_f(x) v``."""

    @abstractmethod
    def jacobian_transpose_apply(self, x: np.ndarray, r: np.ndarray) -> np.ndarray:
        """Return ``J_f(x)^T r``."""

    @abstractmethod
    def jtj_diag(self, x: np.ndarray) -> np.ndarray:
        """Diagonal of ``J_f(x)^T J_f(x)`` without forming the product."""

    @abstractmethod
    def jacobian_sparse(self, x: np.ndarray) -> sparse.csr_matrix:
        """Assembled Jacobian in CSR format."""

    def jacobian_diag(self, x: np.ndarray) -> np.ndarray:
        """Diagonal of ``J_f(x)``; only defined for square Jacobians."""
        raise ShapeError(
            f"{self.name or type(self).__name__}: Jacobian is "
            f"{self.n_residuals}x{self.n_unknowns}, diagonal preconditioner undefined"
        )

    def jacobian_dense(self, x: np.ndarray) -> np.ndarray:
        if self.n_unknowns > DENSE_LIMIT:
            raise DimensionError(
                f"dense Jacobian limited to {DENSE_LIMIT} unknowns, problem has {self.n_unknowns}"
            )
        return self.jacobian_sparse(x).toarray()

    # -- derived quantities -------------------------------------------------

    @property
    def is_square(self) -> bool:
        return self.n_unknowns == self.n_residuals

    def check_x(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_unknowns,):
            raise DimensionError(
                f"expected a vector of length {self.n_unknowns}, got shape {x.shape}"
            )
        return x

    def residual(self, x: np.ndarray) -> np.ndarray:
        return self.y - self.f(x)

    def objective(self, x: np.ndarray) -> float:
        """``g(x) = ||y - f(x)||^2``."""
        r = self.residual(x)
        return float(r @ r)

    def relative_error(self, x: np.ndarray) -> float | None:
        if self.x_true is None:
            return None
        denom = float(np.linalg.norm(self.x_true))
        diff = float(np.linalg.norm(x - self.x_true))
        return diff / denom if denom > 0.0 else diff


def finite_difference_jacobian_check(
    p: NllsProblem,
    x: np.ndarray,
    h: float = 1e-6,
    seed: int = 0,
) -> float:
    """Compare ``J^T r`` against central differences of ``x -> <f(x), r>``.

    *r* is a standard normal vector drawn from *seed*; the step for
    coordinate i is ``h * (1 + |x_i|)``. Returns
    ``max|analytic - fd| / max|analytic|``.
    """
    x = p.check_x(x)
    if p.n_unknowns > DENSE_LIMIT:
        raise DimensionError(
            f"finite-difference check limited to {DENSE_LIMIT} unknowns, got {p.n_unknowns}"
        )
    rng = np.random.default_rng(seed)
    r = rng.standard_normal(p.n_residuals)
    analytic = p.jacobian_transpose_apply(x, r)

    fd = np.empty(p.n_unknowns)
    for i in range(p.n_unknowns):
        step = h * (1.0 + abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += step
        xm[i] -= step
        fd[i] = ((p.f(xp) - p.f(xm)) @ r) / (2.0 * step)

    scale = max(float(np.max(np.abs(analytic))), np.finfo(float).tiny)
    return float(np.max(np.abs(analytic - fd))) / scale
