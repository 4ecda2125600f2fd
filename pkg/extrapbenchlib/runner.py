from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any

from .config import validate_spec
from .descent import restarted_solve
from .events import EXPERIMENT_COMPLETE, EXPERIMENT_START, EventBus
from .gauss_newton import gauss_newton_solve
from .models import ExperimentSpec, RunReport, RunStatus, SolveConfig, StepperConfig, StepperMethod
from .problems import build_problem, initial_guess
from .reports import method_label, report_row, write_history_csv, write_report_csv

log = logging.getLogger(__name__)


def _solve(spec: ExperimentSpec) -> RunReport:
    problem = build_problem(spec)
    x0 = initial_guess(problem, spec.x0, spec.seed)
    if spec.stepper == "gn":
        stepper = StepperConfig(method=StepperMethod.GD, omega=spec.omega, tau0=spec.tau0)
        return gauss_newton_solve(problem, x0, SolveConfig(tol=spec.tol, itermax=spec.itermax), stepper)
    stepper = StepperConfig(method=spec.stepper, omega=spec.omega, tau0=spec.tau0)
    solve = SolveConfig(q=spec.q, extrap=spec.extrap, tol=spec.tol, itermax=spec.itermax)
    return restarted_solve(problem, x0, stepper, solve)


def run_experiment(spec: ExperimentSpec) -> RunReport:
    """Build the problem, run the solver and write the configured outputs.

    Raises :class:`ConfigError` for an inconsistent spec. Solver time
    excludes problem construction.
    """
    spec = validate_spec(spec)
    label = method_label(spec)
    log.info("run %s on %s n=%d alpha=%g lambda=%g", label, spec.problem, spec.n, spec.alpha, spec.lam)
    t0 = time.perf_counter()
    report = _solve(spec)
    log.info("%s: %s after %d iterations (%d cycles), RE=%s, %.2f s solver / %.2f s total",
             label, report.status.value, report.iterations, report.cycles,
             "n/a" if report.relative_error is None else f"{report.relative_error:.3e}",
             report.wall_seconds, time.perf_counter() - t0)

    if spec.report_path:
        write_report_csv([report_row(spec, report)], spec.report_path)
    if spec.history_path:
        write_history_csv(report.history, spec.history_path)
    return report


def _sort_key(row: dict[str, Any]):
    return (row["problem"], row["n"], row["alpha"], row["lambda"],
            row["stepper"], row["extrap"] or "", row["q"])


def _run_one(spec: ExperimentSpec, idx: int, total: int, bus: EventBus | None) -> dict[str, Any]:
    if bus:
        bus.emit(EXPERIMENT_START, index=idx, total=total, spec=spec)
    try:
        report = run_experiment(spec)
        row = report_row(spec, report)
        row["message"] = report.message
    except Exception as e:  # pylint: disable=broad-except
        log.warning("experiment %d/%d (%s) failed: %s", idx + 1, total, method_label(spec), e)
        row = report_row(spec, None, status=RunStatus.FAILED.value)
        row["message"] = str(e)
    row["label"] = method_label(spec)
    if bus:
        bus.emit(EXPERIMENT_COMPLETE, index=idx, total=total, spec=spec, row=row)
    return row


def run_matrix(
    specs: list[ExperimentSpec],
    parallelism: int = 1,
    out: str | None = None,
    bus: EventBus | None = None,
) -> list[dict[str, Any]]:
    """Run independent experiments and aggregate their report rows.

    Each experiment builds its own problem, so up to *parallelism* of them
    run in worker threads. Failures become ``failed`` rows. Rows are
    stably sorted by problem, parameters and method; duplicates are kept.
    When *out* is given the table is written there as CSV.
    """
    total = len(specs)
    rows: list[dict[str, Any] | None] = [None] * total
    t0 = time.perf_counter()
    if total:
        workers = max(1, min(parallelism, total))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_run_one, spec, idx, total, bus): idx
                for idx, spec in enumerate(specs)
            }
            for future in as_completed(futures):
                rows[futures[future]] = future.result()
    log.info("matrix: %d experiments in %.2f s", total, time.perf_counter() - t0)

    table = sorted(rows, key=_sort_key)
    if out:
        write_report_csv(table, out)
    return table
