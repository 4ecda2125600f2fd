"""Gradient-descent steppers and the restarted extrapolation driver.

The objective is ``g(x) = ||y - f(x)||^2``. A step moves along
``d = -H^-1 grad g(x)`` with a diagonal ``H``:

* GD:  ``H = I``
* PGD: ``H = diag(J_f(x))``         (square Jacobians only)
* SGD: ``H = diag(J_f(x)^T J_f(x))``

and the step length comes from Armijo backtracking by halving, starting at
``tau0`` on every step.

:func:`restarted_solve` runs cycles of q+1 steps (RRE, MPE) or 2q steps
(VEA), extrapolates the window and restarts from the extrapolated vector.
"""

from __future__ import annotations

import dataclasses
import logging
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DegenerateError, DimensionError, LineSearchError, ShapeError, SingularError
from .extrapolate import extrapolate
from .models import (
    ExtrapMethod,
    HistoryEntry,
    HistoryKind,
    RunReport,
    RunStatus,
    SequenceWindow,
    SolveConfig,
    StepperConfig,
    StepperMethod,
)
from .problem import NllsProblem

log = logging.getLogger(__name__)

# tau0 factor for the single retry after a failed line search
RETRY_TAU_FACTOR = 0.1

StepCallback = Callable[[np.ndarray, float, float], None]


def gradient_of_g(p: NllsProblem, x: np.ndarray) -> np.ndarray:
    """``grad g(x) = -2 J_f(x)^T (y - f(x))``."""
    x = p.check_x(x)
    return -2.0 * p.jacobian_transpose_apply(x, p.residual(x))


def relative_change(x_old: np.ndarray, x_new: np.ndarray) -> float:
    """``||x_new - x_old|| / ||x_old||``; inf for a move away from zero."""
    diff = float(np.linalg.norm(x_new - x_old))
    base = float(np.linalg.norm(x_old))
    if base == 0.0:
        return 0.0 if diff == 0.0 else float("inf")
    return diff / base


def armijo_search(p, x, d, s: StepperConfig, inner: float, g0: float) -> tuple[float, float]:
    """Halving search returning ``(tau, g(x + tau d))``; see :func:`armijo_backtrack`."""
    tau = s.tau0
    for _ in range(s.max_halvings):
        g_trial = p.objective(x + tau * d)
        # NaN compares False and triggers another halving
        if g_trial <= g0 - s.omega * tau * inner:
            return tau, g_trial
        tau *= 0.5
    raise LineSearchError(
        f"no step in {s.max_halvings} halvings from tau0={s.tau0:g} satisfied "
        f"the Armijo condition (inner product {inner:.3e})"
    )


def armijo_backtrack(
    p: NllsProblem,
    x: np.ndarray,
    d: np.ndarray,
    s: StepperConfig,
    sufficient_decrease_inner: float,
    g0: float | None = None,
) -> float:
    """First tau in ``tau0, tau0/2, ...`` with
    ``g(x + tau d) <= g(x) - omega tau <H^-1 grad, grad>``.

    At most ``max_halvings`` values are tried.
    """
    x = p.check_x(x)
    if g0 is None:
        g0 = p.objective(x)
    tau, _ = armijo_search(p, x, d, s, sufficient_decrease_inner, g0)
    return tau


def floor_diagonal(h: np.ndarray, floor: float) -> np.ndarray:
    """Replace entries with ``|h_i| < floor`` by ``sign(h_i) floor`` (sign(0) = +1)."""
    small = np.abs(h) < floor
    if not np.any(small):
        return h
    h = np.array(h, dtype=float)
    h[small] = np.where(h[small] < 0.0, -floor, floor)
    return h


def preconditioner(p: NllsProblem, x: np.ndarray, s: StepperConfig) -> np.ndarray:
    """Diagonal ``H`` of the selected stepper, floored."""
    if s.method is StepperMethod.GD:
        return np.ones(p.n_unknowns)
    if s.method is StepperMethod.PGD:
        if not p.is_square:
            raise ShapeError(
                f"PGD needs a square Jacobian; {p.name or type(p).__name__} is "
                f"{p.n_residuals}x{p.n_unknowns} (use SGD)"
            )
        h = p.jacobian_diag(x)
    else:
        h = p.jtj_diag(x)
    return floor_diagonal(np.asarray(h, dtype=float), s.diag_floor)


def _step(p, x, s: StepperConfig, g0: float) -> tuple[np.ndarray, float, float]:
    grad = gradient_of_g(p, x)
    scaled = grad / preconditioner(p, x, s)
    tau, g_new = armijo_search(p, x, -scaled, s, float(grad @ scaled), g0)
    return x - tau * scaled, tau, g_new


def step(p: NllsProblem, x: np.ndarray, s: StepperConfig) -> tuple[np.ndarray, float]:
    """One preconditioned gradient step. Returns ``(x_next, tau)``."""
    x = p.check_x(x)
    x_next, tau, _ = _step(p, x, s, p.objective(x))
    return x_next, tau


def fixed_point_window(
    p: NllsProblem,
    x0: np.ndarray,
    m: int,
    s: StepperConfig,
    tol: float = 1e-5,
    on_step: StepCallback | None = None,
) -> SequenceWindow:
    """Window ``x0, x1, ..., xm`` of *m* stepper applications.

    Generation stops early, with ``early_stop`` set, once the relative
    successive-iterate norm drops below *tol*. *on_step* receives
    ``(x_next, tau, rel_change)`` after every step.
    """
    if m < 1:
        raise DimensionError(f"window needs m >= 1 steps, got {m}")
    x = p.check_x(x0).copy()
    g = p.objective(x)
    vectors = [x]
    early = False
    for _ in range(m):
        x_next, tau, g = _step(p, x, s, g)
        rel = relative_change(x, x_next)
        vectors.append(x_next)
        if on_step is not None:
            on_step(x_next, tau, rel)
        if rel < tol:
            early = True
            break
        x = x_next
    return SequenceWindow(tuple(vectors), early_stop=early)


@dataclass
class _RunTracker:
    """Iteration count, history and best-objective iterate of one run."""
    problem: NllsProblem
    best_x: np.ndarray
    best_g: float
    iterations: int = 0
    cycles: int = 0
    history: list[HistoryEntry] = field(default_factory=list)

    def record(self, x: np.ndarray, kind: HistoryKind, rel: float | None) -> None:
        self.history.append(HistoryEntry(
            iteration=self.iterations,
            kind=kind,
            rel_successive_norm=rel,
            relative_error=self.problem.relative_error(x),
        ))

    def offer(self, x: np.ndarray, g: float) -> None:
        if g < self.best_g or not np.isfinite(self.best_g):
            self.best_x = x
            self.best_g = g

    def report(self, status: RunStatus, x: np.ndarray, started: float,
               message: str | None = None) -> RunReport:
        return RunReport(
            status=status,
            iterations=self.iterations,
            cycles=self.cycles,
            final_x=np.array(x, copy=True),
            relative_error=self.problem.relative_error(x),
            wall_seconds=time.perf_counter() - started,
            history=self.history,
            message=message,
        )


def start_tracker(p: NllsProblem, x0: np.ndarray) -> tuple[_RunTracker, np.ndarray, float]:
    """Validate *x0*, record the initial history entry and return the tracker."""
    x = p.check_x(x0).astype(float, copy=True)
    g = p.objective(x)
    tracker = _RunTracker(problem=p, best_x=x, best_g=g)
    tracker.record(x, HistoryKind.STEP, None)
    return tracker, x, g


def restarted_solve(
    p: NllsProblem,
    x0: np.ndarray,
    s: StepperConfig,
    c: SolveConfig,
) -> RunReport:
    """Restarted extrapolation around a gradient stepper.

    Every stepper step counts as one iteration; extrapolations are free.
    With ``c.extrap`` NONE the plain stepper loop runs. The run converges
    when a step, or the extrapolated vector compared with the cycle's last
    step, changes the iterate by less than ``c.tol`` relative. When the
    budget runs out the best-objective iterate is returned.
    """
    started = time.perf_counter()
    tracker, x, g = start_tracker(p, x0)
    extrap = c.extrap
    cycle_len = c.window_steps if extrap is not ExtrapMethod.NONE else None
    stepper = s
    retried = False

    while True:
        window = [x]
        x_cur, g_cur = x, g
        try:
            while cycle_len is None or len(window) <= cycle_len:
                if tracker.iterations >= c.itermax:
                    return tracker.report(
                        RunStatus.NON_CONVERGENCE, tracker.best_x, started,
                        f"iteration budget {c.itermax} exhausted",
                    )
                x_next, _, g_next = _step(p, x_cur, stepper, g_cur)
                tracker.iterations += 1
                rel = relative_change(x_cur, x_next)
                tracker.record(x_next, HistoryKind.STEP, rel)
                tracker.offer(x_next, g_next)
                window.append(x_next)
                x_cur, g_cur = x_next, g_next
                if rel < c.tol:
                    return tracker.report(RunStatus.CONVERGED, x_cur, started)
        except LineSearchError as exc:
            if retried:
                return tracker.report(
                    RunStatus.NON_CONVERGENCE, tracker.best_x, started,
                    f"line search failed after retry: {exc}",
                )
            retried = True
            stepper = dataclasses.replace(s, tau0=s.tau0 * RETRY_TAU_FACTOR)
            log.warning("line search failed (%s); restarting from best iterate with tau0=%g",
                        exc, stepper.tau0)
            x, g = tracker.best_x, tracker.best_g
            continue

        tracker.cycles += 1
        try:
            outcome = extrapolate(SequenceWindow(tuple(window)), extrap, c.extrap_config)
            t = outcome.t
            if not np.all(np.isfinite(t)):
                raise DegenerateError("extrapolated vector is not finite")
        except (DegenerateError, SingularError) as exc:
            log.warning("cycle %d: %s extrapolation failed (%s); restarting from last step",
                        tracker.cycles, extrap.name, exc)
            tracker.record(x_cur, HistoryKind.EXTRAP, None)
            x, g = x_cur, g_cur
            continue

        rel = relative_change(x_cur, t)
        g_t = p.objective(t)
        tracker.record(t, HistoryKind.EXTRAP, rel)
        tracker.offer(t, g_t)
        log.debug("cycle %d: %s order %d, breakdown=%s, rel change %.3e",
                  tracker.cycles, extrap.name, outcome.q, outcome.breakdown, rel)
        if rel < c.tol:
            return tracker.report(RunStatus.CONVERGED, t, started)
        x, g = t, g_t
