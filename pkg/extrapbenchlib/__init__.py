from ._version import __version__
from .errors import (
    ExtrapBenchError,
    DimensionError,
    ShapeError,
    BreakdownError,
    SingularError,
    DegenerateError,
    UnsupportedError,
    LineSearchError,
    ConfigError,
    ConfigIOError,
)
from .models import (
    ParamSpec,
    StepperMethod,
    ExtrapMethod,
    RunStatus,
    HistoryKind,
    SequenceWindow,
    ExtrapConfig,
    ExtrapolationOutcome,
    StepperConfig,
    SolveConfig,
    HistoryEntry,
    RunReport,
    BratuSpec,
    ExperimentSpec,
)
from .extrapolate import rre, mpe, vea, extrapolate, first_differences, generalized_residual
from .problem import NllsProblem, finite_difference_jacobian_check
from .problems import build_bratu, build_sparse_sine, build_problem, LinearProblem
from .descent import (
    gradient_of_g,
    armijo_backtrack,
    step,
    fixed_point_window,
    restarted_solve,
)
from .gauss_newton import gauss_newton_solve
from .config import (
    default_config,
    merge_configs,
    validate_config,
    validate_param_values,
    spec_from_config,
    load_matrix_config,
    ConfigFieldError,
    EXPERIMENT_PARAMS,
)
from .reports import (
    method_label,
    report_row,
    write_report_csv,
    read_report_csv,
    write_history_csv,
    read_history_csv,
)
from .runner import run_experiment, run_matrix
from .experiments import table_specs, figure_specs
from .events import EventBus

__all__ = [
    "__version__",
    "ExtrapBenchError",
    "DimensionError",
    "ShapeError",
    "BreakdownError",
    "SingularError",
    "DegenerateError",
    "UnsupportedError",
    "LineSearchError",
    "ConfigError",
    "ConfigIOError",
    "ParamSpec",
    "StepperMethod",
    "ExtrapMethod",
    "RunStatus",
    "HistoryKind",
    "SequenceWindow",
    "ExtrapConfig",
    "ExtrapolationOutcome",
    "StepperConfig",
    "SolveConfig",
    "HistoryEntry",
    "RunReport",
    "BratuSpec",
    "ExperimentSpec",
    "rre",
    "mpe",
    "vea",
    "extrapolate",
    "first_differences",
    "generalized_residual",
    "NllsProblem",
    "finite_difference_jacobian_check",
    "build_bratu",
    "build_sparse_sine",
    "build_problem",
    "LinearProblem",
    "gradient_of_g",
    "armijo_backtrack",
    "step",
    "fixed_point_window",
    "restarted_solve",
    "gauss_newton_solve",
    "default_config",
    "merge_configs",
    "validate_config",
    "validate_param_values",
    "spec_from_config",
    "load_matrix_config",
    "ConfigFieldError",
    "EXPERIMENT_PARAMS",
    "method_label",
    "report_row",
    "write_report_csv",
    "read_report_csv",
    "write_history_csv",
    "read_history_csv",
    "run_experiment",
    "run_matrix",
    "table_specs",
    "figure_specs",
    "EventBus",
]
