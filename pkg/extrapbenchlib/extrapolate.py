"""Vector extrapolation of a window of fixed-point iterates.

RRE and MPE follow the QR-based formulation: the first differences
``dU = [ds_0, ..., ds_q]`` are factored incrementally, the coefficient
vector ``d`` comes from one small triangular system, and the extrapolated
vector is ``t = s_0 + Q_q (R_q alpha)``. Every window is treated with
``k = 0``.

When a difference column turns out to be dependent on the previous ones,
the window already contains the limit direction: the dependent column's
projection coefficients give the null vector of ``dU`` and the
extrapolation is finished on the reduced window with ``breakdown`` set.

VEA builds Wynn's epsilon table with the Samelson inverse
``v^-1 = v / (v . v)`` and returns ``eps_{2q}^{(0)}``.
"""

from __future__ import annotations

import logging

import numpy as np

from .errors import (
    BreakdownError,
    DegenerateError,
    DimensionError,
    UnsupportedError,
)
from .models import ExtrapConfig, ExtrapMethod, ExtrapolationOutcome, SequenceWindow
from .numkit import empty_basis, mgs_append, solve_normal_from_r, solve_upper

log = logging.getLogger(__name__)

_DEFAULT_CONFIG = ExtrapConfig()


def first_differences(w: SequenceWindow) -> np.ndarray:
    """Return ``dU`` with column ``i = s_{i+1} - s_i``."""
    if w.size < 2:
        raise DimensionError(f"need at least 2 vectors for differences, got {w.size}")
    return np.diff(w.matrix(), axis=1)


def _alpha_from_gamma(gamma: np.ndarray) -> np.ndarray:
    q = gamma.size - 1
    alpha = np.empty(q)
    if q == 0:
        return alpha
    alpha[0] = 1.0 - gamma[0]
    for j in range(1, q):
        alpha[j] = alpha[j - 1] - gamma[j]
    return alpha


def _factor_differences(d_u: np.ndarray, tol: float):
    """Incremental QR of *d_u*. Returns ``(Q, R, dependent_coeffs)``.

    ``dependent_coeffs`` is None when every column was appended, otherwise
    the projection coefficients of the first dependent column.
    """
    q_mat, r_mat = empty_basis(d_u.shape[0])
    for j in range(d_u.shape[1]):
        try:
            q_mat, r_mat = mgs_append(q_mat, r_mat, d_u[:, j], breakdown_tol=tol)
        except BreakdownError as exc:
            log.debug("difference column %d dependent, reducing window", exc.index)
            return q_mat, r_mat, exc.coeffs
    return q_mat, r_mat, None


def _combine(
    w: SequenceWindow,
    q_mat: np.ndarray,
    r_mat: np.ndarray,
    d: np.ndarray,
    method: ExtrapMethod,
    config: ExtrapConfig,
    breakdown: bool,
) -> ExtrapolationOutcome:
    lam = float(d.sum())
    scale = float(np.abs(d).sum())
    if scale == 0.0 or abs(lam) <= config.degeneracy_tol * scale:
        raise DegenerateError(
            f"{method.name}: coefficient sum {lam:.3e} vanishes (scale {scale:.3e})"
        )
    gamma = d / lam
    alpha = _alpha_from_gamma(gamma)
    k = alpha.size
    t = w.vectors[0] + q_mat[:, :k] @ (r_mat[:k, :k] @ alpha)

    drift = abs(float(gamma.sum()) - 1.0)
    if drift > config.normalization_tol:
        log.warning("%s: gamma sums to 1 only within %.3e", method.name, drift)
    return ExtrapolationOutcome(
        t=t, gamma=gamma, alpha=alpha, method=method, breakdown=breakdown
    )


def _reduced_outcome(
    w: SequenceWindow,
    q_mat: np.ndarray,
    r_mat: np.ndarray,
    coeffs: np.ndarray,
    method: ExtrapMethod,
    config: ExtrapConfig,
) -> ExtrapolationOutcome:
    if q_mat.shape[1] == 0:
        # the very first difference vanished: the window is stationary
        return ExtrapolationOutcome(
            t=w.vectors[0].copy(),
            gamma=np.ones(1),
            alpha=np.zeros(0),
            method=method,
            breakdown=True,
        )
    d = np.append(solve_upper(r_mat, -coeffs), 1.0)
    return _combine(w, q_mat, r_mat, d, method, config, breakdown=True)


def _polynomial_order(w: SequenceWindow, name: str) -> int:
    q = w.size - 2
    if q < 1:
        raise DimensionError(f"{name} needs q+2 >= 3 vectors, got {w.size}")
    return q


def rre(w: SequenceWindow, config: ExtrapConfig | None = None) -> ExtrapolationOutcome:
    """Reduced rank extrapolation of a window with q+2 vectors."""
    config = config or _DEFAULT_CONFIG
    q = _polynomial_order(w, "RRE")
    q_mat, r_mat, coeffs = _factor_differences(first_differences(w), config.breakdown_tol)
    if coeffs is not None:
        return _reduced_outcome(w, q_mat, r_mat, coeffs, ExtrapMethod.RRE, config)
    d = solve_normal_from_r(r_mat, np.ones(q + 1))
    return _combine(w, q_mat, r_mat, d, ExtrapMethod.RRE, config, breakdown=False)


def mpe(w: SequenceWindow, config: ExtrapConfig | None = None) -> ExtrapolationOutcome:
    """Minimal polynomial extrapolation of a window with q+2 vectors."""
    config = config or _DEFAULT_CONFIG
    q = _polynomial_order(w, "MPE")
    q_mat, r_mat, coeffs = _factor_differences(first_differences(w), config.breakdown_tol)
    if coeffs is not None:
        return _reduced_outcome(w, q_mat, r_mat, coeffs, ExtrapMethod.MPE, config)
    d = np.append(solve_upper(r_mat[:q, :q], -r_mat[:q, q]), 1.0)
    return _combine(w, q_mat, r_mat, d, ExtrapMethod.MPE, config, breakdown=False)


def vea(w: SequenceWindow, config: ExtrapConfig | None = None) -> ExtrapolationOutcome:
    """Vector epsilon algorithm on a window with 2q+1 vectors.

    On a degenerate difference the last entry of the last completed even
    column is returned with ``breakdown`` set; for column 0 that entry is
    ``s_{2q}`` itself.
    """
    config = config or _DEFAULT_CONFIG
    if w.size < 3 or w.size % 2 == 0:
        raise DimensionError(f"VEA needs 2q+1 >= 3 vectors, got {w.size}")
    n_cols = w.size - 1

    prev = [np.zeros(w.dim) for _ in range(w.size + 1)]  # column -1
    curr = list(w.vectors)                               # column 0
    last_even = curr
    for k in range(n_cols):
        nxt = []
        for j in range(len(curr) - 1):
            diff = curr[j + 1] - curr[j]
            sq = float(diff @ diff)
            if sq < config.vea_guard * (1.0 + float(curr[j] @ curr[j])):
                log.debug("VEA: degenerate difference in column %d, row %d", k, j)
                return ExtrapolationOutcome(
                    t=last_even[-1].copy(),
                    gamma=np.zeros(0),
                    alpha=np.zeros(0),
                    method=ExtrapMethod.VEA,
                    breakdown=True,
                )
            nxt.append(prev[j + 1] + diff / sq)
        prev, curr = curr, nxt
        if (k + 1) % 2 == 0:
            last_even = curr

    t = curr[0]
    if not np.all(np.isfinite(t)):
        raise DegenerateError("VEA: epsilon table overflowed")
    return ExtrapolationOutcome(
        t=t.copy(),
        gamma=np.zeros(0),
        alpha=np.zeros(0),
        method=ExtrapMethod.VEA,
    )


def generalized_residual(w: SequenceWindow, outcome: ExtrapolationOutcome) -> np.ndarray:
    """Return ``sum_j gamma_j ds_j``, the residual of the shifted extrapolation."""
    if outcome.method is ExtrapMethod.VEA or outcome.gamma.size == 0:
        raise UnsupportedError("generalized residual is defined for RRE and MPE only")
    d_u = first_differences(w)
    k = outcome.gamma.size
    if k > d_u.shape[1]:
        raise DimensionError(f"outcome has {k} coefficients, window only {d_u.shape[1]} differences")
    return d_u[:, :k] @ outcome.gamma


_METHODS = {
    ExtrapMethod.RRE: rre,
    ExtrapMethod.MPE: mpe,
    ExtrapMethod.VEA: vea,
}


def extrapolate(
    w: SequenceWindow,
    method: ExtrapMethod,
    config: ExtrapConfig | None = None,
) -> ExtrapolationOutcome:
    """Dispatch to :func:`rre`, :func:`mpe` or :func:`vea`."""
    try:
        fn = _METHODS[ExtrapMethod(method)]
    except (KeyError, ValueError):
        raise UnsupportedError(f"no extrapolation for method {method!r}") from None
    return fn(w, config)
