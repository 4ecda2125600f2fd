"""Canned experiment sets: the in-scope rows of the three benchmark tables
and the runs behind the convergence figures."""

from __future__ import annotations

import dataclasses
import os
import re

from .errors import ConfigError
from .models import ExperimentSpec
from .reports import method_label

TABLES = (1, 2, 3)
FIGURE_SETS = (
    "bratu-residual", "bratu-error", "extrap-comparison", "high-lambda",
    "bratu-grid", "sparse-grid", "sparse-fixed",
)
DEFAULT_MAX_N = 100_000

# (alpha, lambda, q for RRE-PGD, q for MPE-PGD); SGD rows always use q=6
_TABLE1_ROWS = [
    (1.0, 10.0, 6, 6), (1.0, 9.0, 6, 6), (1.0, 8.0, 6, 6), (1.0, 7.0, 6, 6), (1.0, 6.0, 5, 5),
    (2.0, 10.0, 6, 6), (2.0, 9.0, 5, 5), (2.0, 8.0, 7, 7), (2.0, 7.0, 10, 6), (2.0, 6.0, 8, 6),
    (3.0, 10.0, 6, 6), (3.0, 9.0, 7, 6), (3.0, 8.0, 4, 3),
    (4.0, 10.0, 5, 5),
    (5.0, 10.0, 7, 7),
]
_TABLE1_SGD_Q = 6

_TABLE2_LAMBDAS = (10.0, 1e4, 1e5, 1e6)

# grid sweep: n per direction and the (alpha, lambda) pairs run at each n
_GRID_SIZES = (50, 100, 200, 400)
_GRID_PARAMS = ((0.0, 10.0), (1.0, 10.0))

_SPARSE_FIXED_N = 1_000

# n -> (method, q) pairs of the extrapolated SGD rows; GN runs at every n
_TABLE3_GRIDS = {
    1_000: [(m, q) for q in (1, 3, 5) for m in ("rre", "mpe", "vea")],
    10_000: [(m, 1) for m in ("rre", "mpe", "vea")],
    100_000: [(m, 1) for m in ("rre", "mpe", "vea")],
    1_000_000: [(m, q) for q in (1, 5, 6) for m in ("rre", "mpe", "vea")],
    10_000_000: [("rre", 1), ("mpe", 1), ("vea", 1), ("rre", 7), ("mpe", 7), ("vea", 4)],
}


def _bratu(alpha: float, lam: float, stepper: str, extrap: str | None = None,
           q: int = 1, n: int = 100) -> ExperimentSpec:
    return ExperimentSpec(problem="bratu", n=n, alpha=alpha, lam=lam,
                          stepper=stepper, extrap=extrap, q=q)


def _sparse(n: int, stepper: str, extrap: str | None = None, q: int = 1) -> ExperimentSpec:
    return ExperimentSpec(problem="sparse", n=n, stepper=stepper, extrap=extrap, q=q)


def _table1() -> list[ExperimentSpec]:
    specs = []
    for alpha, lam, q_rre, q_mpe in _TABLE1_ROWS:
        specs += [
            _bratu(alpha, lam, "pgd", "rre", q_rre),
            _bratu(alpha, lam, "pgd", "mpe", q_mpe),
            _bratu(alpha, lam, "sgd", "rre", _TABLE1_SGD_Q),
            _bratu(alpha, lam, "sgd", "mpe", _TABLE1_SGD_Q),
        ]
    return specs


def _table2() -> list[ExperimentSpec]:
    specs = []
    for lam in _TABLE2_LAMBDAS:
        q_sgd = 5 if lam == 10.0 else 2
        specs += [_bratu(0.0, lam, "pgd", m, 5) for m in ("vea", "rre", "mpe")]
        specs += [_bratu(0.0, lam, "sgd", m, q_sgd) for m in ("vea", "rre", "mpe")]
    return specs


def _table3(max_n: int) -> list[ExperimentSpec]:
    specs = []
    for n, rows in _TABLE3_GRIDS.items():
        if n > max_n:
            continue
        specs.append(_sparse(n, "gn"))
        specs += [_sparse(n, "sgd", m, q) for m, q in rows]
    return specs


def table_specs(which: int, max_n: int = DEFAULT_MAX_N) -> list[ExperimentSpec]:
    """Specs reproducing a table's rows; *max_n* caps the sparse grid sweep."""
    if which == 1:
        return _table1()
    if which == 2:
        return _table2()
    if which == 3:
        return _table3(max_n)
    raise ConfigError(f"unknown table {which!r}; expected one of {TABLES}")


def figure_specs(which: str) -> list[ExperimentSpec]:
    """Runs whose history files reproduce one convergence figure."""
    if which in ("bratu-residual", "bratu-error"):
        specs = [_bratu(1.0, 10.0, s) for s in ("gd", "pgd", "sgd")]
        specs += [_bratu(1.0, 10.0, s, m, 6) for s in ("gd", "pgd", "sgd") for m in ("rre", "mpe")]
        return specs
    if which == "extrap-comparison":
        return [_bratu(1.0, 10.0, "pgd", "rre", 6), _bratu(1.0, 10.0, "pgd", "mpe", 6),
                _bratu(1.0, 10.0, "pgd", "vea", 3)]
    if which == "high-lambda":
        return [_bratu(0.0, lam, "sgd", m, 2) for lam in (1e4, 1e5, 1e6) for m in ("vea", "rre", "mpe")]
    if which == "bratu-grid":
        specs = []
        for n in _GRID_SIZES:
            for alpha, lam in _GRID_PARAMS:
                specs.append(_bratu(alpha, lam, "gn", n=n))
                specs += [_bratu(alpha, lam, s, m, 6, n=n) for s in ("pgd", "sgd") for m in ("rre", "mpe")]
        return specs
    if which == "sparse-grid":
        specs = []
        for n in (1_000, 10_000, 100_000):
            specs.append(_sparse(n, "gn"))
            specs += [_sparse(n, "sgd", m, 1) for m in ("rre", "mpe", "vea")]
        return specs
    if which == "sparse-fixed":
        n = _SPARSE_FIXED_N
        return [_sparse(n, "gd"), _sparse(n, "sgd"), _sparse(n, "gn"),
                _sparse(n, "sgd", "rre", 1), _sparse(n, "sgd", "mpe", 1)]
    raise ConfigError(f"unknown figure set {which!r}; expected one of {', '.join(FIGURE_SETS)}")


def history_filename(spec: ExperimentSpec) -> str:
    """File name for a run's history CSV, unique within a canned set."""
    label = re.sub(r"[^A-Za-z0-9]+", "-", method_label(spec)).strip("-").lower()
    if spec.problem == "bratu":
        return f"bratu_n{spec.n}_a{spec.alpha:g}_l{spec.lam:g}_{label}.csv"
    return f"{spec.problem}_n{spec.n}_{label}.csv"


def with_outputs(specs: list[ExperimentSpec], history_dir: str) -> list[ExperimentSpec]:
    """Attach a history path under *history_dir* to every spec."""
    return [
        dataclasses.replace(s, history_path=os.path.join(history_dir, history_filename(s)))
        for s in specs
    ]
