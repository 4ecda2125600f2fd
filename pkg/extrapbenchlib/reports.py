"""CSV report and convergence-history files.

Column order is fixed; ``None`` is written as an empty cell and read back
as ``None``. Floats are written with ``repr`` precision so rows parse
back losslessly.
"""

from __future__ import annotations

import contextlib
import csv
import os
from typing import IO, Any, Iterable, Iterator

from .models import ExperimentSpec, HistoryEntry, HistoryKind, RunReport

REPORT_COLUMNS = [
    "problem", "n", "alpha", "lambda", "stepper", "extrap", "q",
    "status", "iterations", "cycles", "relative_error", "wall_seconds",
]
HISTORY_COLUMNS = ["iteration", "kind", "rel_successive_norm", "relative_error"]

_REPORT_TYPES = {
    "n": int, "alpha": float, "lambda": float, "q": int,
    "iterations": int, "cycles": int,
    "relative_error": float, "wall_seconds": float,
}

PathOrFile = str | os.PathLike | IO[str]


def method_label(spec: ExperimentSpec) -> str:
    """Table label of a run: ``GN``, ``PGD``, ``RRE(6)-PGD``, ..."""
    stepper = spec.stepper.upper()
    if spec.extrap is None:
        return stepper
    return f"{spec.extrap.upper()}({spec.q})-{stepper}"


def report_row(spec: ExperimentSpec, report: RunReport | None,
               status: str | None = None) -> dict[str, Any]:
    """One report row; *report* is None for runs that failed before solving."""
    return {
        "problem": spec.problem,
        "n": spec.n,
        "alpha": spec.alpha,
        "lambda": spec.lam,
        "stepper": spec.stepper,
        "extrap": spec.extrap,
        "q": spec.q,
        "status": status or report.status.value,
        "iterations": report.iterations if report else 0,
        "cycles": report.cycles if report else 0,
        "relative_error": report.relative_error if report else None,
        "wall_seconds": report.wall_seconds if report else 0.0,
    }


@contextlib.contextmanager
def _opened(target: PathOrFile, mode: str) -> Iterator[IO[str]]:
    if hasattr(target, "write") or hasattr(target, "read"):
        yield target
        return
    if "w" in mode:
        os.makedirs(os.path.dirname(os.fspath(target)) or ".", exist_ok=True)
    with open(target, mode, newline="", encoding="utf-8") as f:
        yield f


def _cell(value: Any) -> Any:
    return "" if value is None else value


def write_report_csv(rows: Iterable[dict[str, Any]], target: PathOrFile) -> None:
    with _opened(target, "w") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        for row in rows:
            w.writerow([_cell(row[c]) for c in REPORT_COLUMNS])


def read_report_csv(source: PathOrFile) -> list[dict[str, Any]]:
    with _opened(source, "r") as f:
        rows = []
        for raw in csv.DictReader(f):
            row: dict[str, Any] = {}
            for col in REPORT_COLUMNS:
                cell = raw[col]
                if cell == "":
                    row[col] = None
                else:
                    row[col] = _REPORT_TYPES.get(col, str)(cell)
            rows.append(row)
        return rows


def write_history_csv(history: Iterable[HistoryEntry], target: PathOrFile) -> None:
    with _opened(target, "w") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(HISTORY_COLUMNS)
        for e in history:
            w.writerow([
                e.iteration,
                e.kind.value,
                _cell(e.rel_successive_norm),
                _cell(e.relative_error),
            ])


def read_history_csv(source: PathOrFile) -> list[HistoryEntry]:
    def opt(cell: str) -> float | None:
        return None if cell == "" else float(cell)

    with _opened(source, "r") as f:
        return [
            HistoryEntry(
                iteration=int(raw["iteration"]),
                kind=HistoryKind(raw["kind"]),
                rel_successive_norm=opt(raw["rel_successive_norm"]),
                relative_error=opt(raw["relative_error"]),
            )
            for raw in csv.DictReader(f)
        ]
