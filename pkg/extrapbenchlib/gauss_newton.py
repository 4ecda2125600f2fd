"""Damped Gauss-Newton baseline.

Each iteration solves the linearized problem
``min_delta ||(y - f(x)) - J_f(x) delta||`` and damps the step with the
same Armijo backtracking the gradient steppers use. Small problems go
through a dense QR of ``J``; larger ones through a sparse LU (square),
sparse normal equations (overdetermined) or a sparse LU of the leading
square block (underdetermined). An underdetermined system gets the basic
solution of the QR of ``J``: the trailing ``n - m`` components of the step
are zero.
"""

from __future__ import annotations

import logging
import time

import numpy as np
from scipy import linalg
from scipy.sparse.linalg import norm as sparse_norm
from scipy.sparse.linalg import splu

from .descent import armijo_search, gradient_of_g, relative_change, start_tracker
from .errors import LineSearchError, SingularError
from .models import HistoryKind, RunReport, RunStatus, SolveConfig, StepperConfig, StepperMethod
from .problem import DENSE_LIMIT, NllsProblem

log = logging.getLogger(__name__)

RANK_TOL = 1e-12


def _check_pivots(pivots: np.ndarray, j_norm: float) -> None:
    pivots = np.abs(pivots)
    if j_norm == 0.0 or np.any(pivots < RANK_TOL * j_norm):
        raise SingularError(
            f"linearized system is rank deficient (min pivot {pivots.min(initial=0.0):.3e}, "
            f"||J||_F {j_norm:.3e})"
        )


def _dense_direction(j: np.ndarray, r: np.ndarray) -> np.ndarray:
    m, n = j.shape
    j_norm = float(np.linalg.norm(j))
    q, rr = linalg.qr(j, mode="economic")
    k = min(m, n)
    _check_pivots(np.diag(rr[:, :k]), j_norm)
    delta = np.zeros(n)
    delta[:k] = linalg.solve_triangular(rr[:k, :k], q.T @ r)
    return delta


def _sparse_lu(a, j_norm: float, symmetric: bool = False):
    try:
        if symmetric:
            lu = splu(a.tocsc(), permc_spec="MMD_AT_PLUS_A", diag_pivot_thresh=0.0,
                      options={"SymmetricMode": True})
        else:
            lu = splu(a.tocsc())
    except RuntimeError as exc:
        raise SingularError(f"linearized system is singular: {exc}") from exc
    pivots = np.abs(lu.U.diagonal())
    # LDL^T pivots of J^T J are squared R diagonals
    _check_pivots(np.sqrt(pivots) if symmetric else pivots, j_norm)
    return lu


def _sparse_direction(j, r: np.ndarray) -> np.ndarray:
    m, n = j.shape
    j = j.tocsc()
    j_norm = float(sparse_norm(j))
    if m == n:
        delta = _sparse_lu(j, j_norm).solve(r)
    elif m > n:
        jt = j.T.tocsc()
        delta = _sparse_lu(jt @ j, j_norm, symmetric=True).solve(jt @ r)
    else:
        delta = np.zeros(n)
        delta[:m] = _sparse_lu(j[:, :m], j_norm).solve(r)
    delta = np.asarray(delta, dtype=float).ravel()
    if not np.all(np.isfinite(delta)):
        raise SingularError("sparse linearized system produced a non-finite step")
    return delta


def gauss_newton_direction(p: NllsProblem, x: np.ndarray) -> np.ndarray:
    """Least-squares step for the linearization at *x* (basic solution when underdetermined)."""
    r = p.residual(x)
    if p.n_unknowns <= DENSE_LIMIT:
        return _dense_direction(p.jacobian_dense(x), r)
    return _sparse_direction(p.jacobian_sparse(x), r)


def gauss_newton_solve(
    p: NllsProblem,
    x0: np.ndarray,
    c: SolveConfig,
    s: StepperConfig | None = None,
) -> RunReport:
    """Damped Gauss-Newton with the relative successive-iterate stopping rule.

    *s* supplies the Armijo constants (default: omega 1e-4, tau0 1).
    Raises :class:`SingularError` on a rank-deficient linearization.
    """
    s = s or StepperConfig(method=StepperMethod.GD)
    started = time.perf_counter()
    tracker, x, g = start_tracker(p, x0)

    while True:
        if tracker.iterations >= c.itermax:
            return tracker.report(
                RunStatus.NON_CONVERGENCE, tracker.best_x, started,
                f"iteration budget {c.itermax} exhausted",
            )
        delta = gauss_newton_direction(p, x)
        inner = -float(gradient_of_g(p, x) @ delta)
        try:
            tau, g_next = armijo_search(p, x, delta, s, inner, g)
        except LineSearchError as exc:
            return tracker.report(
                RunStatus.NON_CONVERGENCE, tracker.best_x, started, str(exc),
            )
        x_next = x + tau * delta
        tracker.iterations += 1
        rel = relative_change(x, x_next)
        tracker.record(x_next, HistoryKind.STEP, rel)
        tracker.offer(x_next, g_next)
        log.debug("GN iteration %d: tau=%g, g=%.3e, rel change %.3e",
                  tracker.iterations, tau, g_next, rel)
        x, g = x_next, g_next
        if rel < c.tol:
            return tracker.report(RunStatus.CONVERGED, x, started)
