from __future__ import annotations

import dataclasses
import os
import platform
import tomllib
from dataclasses import dataclass
from typing import Any

from .errors import ConfigError, ConfigIOError
from .models import ExperimentSpec, ParamSpec


def get_app_dir() -> str:
    """Return the OS-specific data directory for extrapbench (log files)."""
    system = platform.system()
    if system == "Windows":
        base = os.environ.get("APPDATA")
        if not base:
            base = os.path.expanduser("~")
        return os.path.join(base, "extrapbench")
    if system == "Darwin":
        return os.path.join(
            os.path.expanduser("~"),
            "Library",
            "Application Support",
            "extrapbench",
        )
    # Linux / BSD / …
    base = os.environ.get("XDG_CONFIG_HOME")
    if not base:
        base = os.path.join(os.path.expanduser("~"), ".config")
    return os.path.join(base, "extrapbench")


@dataclass
class ConfigFieldError:
    """A single validation error for one experiment field.

    Attributes:
        key:     The config key that failed validation.
        value:   The offending value.
        message: Human-readable explanation of what is wrong.
    """

    key: str
    value: Any
    message: str


# ---------------------------------------------------------------------------
# Experiment parameters
# ---------------------------------------------------------------------------

STEPPERS = ["gd", "pgd", "sgd", "gn"]
EXTRAP_METHODS = ["rre", "mpe", "vea"]

# TOML has no null; these spellings mean "no extrapolation"
_NO_EXTRAP = {"none", ""}

# Alternate spellings accepted in config files and on the CLI
_ALIASES = {"lambda": "lam"}

EXPERIMENT_PARAMS: list[ParamSpec] = [
    ParamSpec(
        key="problem", type=str, default="bratu",
        choices=["bratu", "sparse"],
        label="Problem",
        description="Extended 2D Bratu on [-3, 3]^2 or the sparse sine problem.",
    ),
    ParamSpec(
        key="n", type=int, default=100, min=2,
        label="Grid size n",
        description="Grid points per direction (Bratu, n^2 unknowns) or unknowns (sparse).",
    ),
    ParamSpec(
        key="alpha", type=(int, float), default=0.0,
        label="Convection alpha",
        description="Coefficient of the first-derivative term; 0 gives standard Bratu.",
    ),
    ParamSpec(
        key="lam", type=(int, float), default=0.0,
        label="Nonlinearity lambda",
        description="Coefficient of exp(x); values up to 1e6 are supported.",
    ),
    ParamSpec(
        key="stepper", type=str, default="pgd", choices=STEPPERS,
        label="Stepper",
        description="gd, pgd (diag J preconditioner), sgd (diag J^T J) or gn (Gauss-Newton).",
    ),
    ParamSpec(
        key="extrap", type=str, default=None, nullable=True,
        choices=EXTRAP_METHODS,
        label="Extrapolation",
        description="Restarted extrapolation method; empty for the plain stepper.",
    ),
    ParamSpec(
        key="q", type=int, default=1, min=1,
        label="Restart length q",
    ),
    ParamSpec(
        key="tol", type=(int, float), default=1e-5, min=0.0, min_exclusive=True,
        label="Tolerance",
        description="Relative successive-iterate norm that stops a run.",
    ),
    ParamSpec(
        key="itermax", type=int, default=500, min=0,
        label="Iteration budget",
        description="Maximum number of inner stepper steps.",
    ),
    ParamSpec(
        key="tau0", type=(int, float), default=1.0, min=0.0, min_exclusive=True,
        label="Initial step tau0",
    ),
    ParamSpec(
        key="omega", type=(int, float), default=None, nullable=True,
        min=0.0, max=1.0, min_exclusive=True, max_exclusive=True,
        label="Armijo omega",
        description="Defaults to 1e-4 for gd/pgd/gn and 0.5 for sgd.",
    ),
    ParamSpec(
        key="x0", type=str, default="zeros", choices=["zeros", "random"],
        label="Initial guess",
        description="Zero vector, or a standard normal draw seeded by 'seed'.",
    ),
    ParamSpec(
        key="seed", type=int, default=0, min=0,
        label="Random seed",
    ),
    ParamSpec(
        key="report_path", type=str, default=None, nullable=True,
        label="Report CSV path",
    ),
    ParamSpec(
        key="history_path", type=str, default=None, nullable=True,
        label="History CSV path",
    ),
]


def default_config() -> dict[str, Any]:
    """Returns the built-in default experiment configuration."""
    return {p.key: p.default for p in EXPERIMENT_PARAMS}


def merge_configs(*configs: dict[str, Any]) -> dict[str, Any]:
    """Merge config dicts left-to-right; later values override earlier ones."""
    result: dict[str, Any] = {}
    for cfg in configs:
        for k, v in cfg.items():
            result[_ALIASES.get(k, k)] = v
    return result


def _normalize(values: dict[str, Any]) -> dict[str, Any]:
    out = merge_configs(values)
    extrap = out.get("extrap")
    if isinstance(extrap, str):
        extrap = extrap.lower()
        out["extrap"] = None if extrap in _NO_EXTRAP else extrap
    if isinstance(out.get("stepper"), str):
        out["stepper"] = out["stepper"].lower()
    return out


def validate_param_values(
    params: list[ParamSpec],
    values: dict[str, Any],
) -> list[ConfigFieldError]:
    """Validate *values* against a list of :class:`ParamSpec` definitions.

    Returns a (possibly empty) list of :class:`ConfigFieldError` objects.
    Only keys present in *values* are checked; missing keys are not errors
    (they will receive their default).
    """
    errors: list[ConfigFieldError] = []

    for spec in params:
        if spec.key not in values:
            continue
        value = values[spec.key]

        if value is None:
            if not spec.nullable:
                errors.append(ConfigFieldError(spec.key, value, f"{spec.label} must not be empty."))
            continue

        # bool is an int subclass; reject it for numeric fields
        expected = spec.type
        if expected is not bool and isinstance(value, bool):
            errors.append(ConfigFieldError(
                spec.key, value, f"{spec.label} must be {_type_label(expected)}, got boolean.",
            ))
            continue
        if not isinstance(value, expected):
            errors.append(ConfigFieldError(
                spec.key, value,
                f"{spec.label} must be {_type_label(expected)}, got {type(value).__name__}.",
            ))
            continue

        if spec.choices is not None and value not in spec.choices:
            opts = ", ".join(repr(c) for c in spec.choices)
            errors.append(ConfigFieldError(spec.key, value, f"{spec.label} must be one of {opts}."))
            continue

        msg = _range_message(spec, value)
        if msg:
            errors.append(ConfigFieldError(spec.key, value, msg))

    return errors


def _range_message(spec: ParamSpec, value) -> str | None:
    if not isinstance(value, (int, float)):
        return None
    if spec.min is not None:
        if spec.min_exclusive and value <= spec.min:
            return f"{spec.label} must be greater than {spec.min}."
        if not spec.min_exclusive and value < spec.min:
            return f"{spec.label} must be at least {spec.min}."
    if spec.max is not None:
        if spec.max_exclusive and value >= spec.max:
            return f"{spec.label} must be less than {spec.max}."
        if not spec.max_exclusive and value > spec.max:
            return f"{spec.label} must be at most {spec.max}."
    return None


def _cross_field_errors(values: dict[str, Any]) -> list[ConfigFieldError]:
    errors: list[ConfigFieldError] = []
    problem = values.get("problem")
    stepper = values.get("stepper")
    n = values.get("n")
    if problem == "sparse" and stepper == "pgd":
        errors.append(ConfigFieldError(
            "stepper", stepper,
            "PGD needs a square Jacobian; the sparse problem is (n-1) x n, use sgd.",
        ))
    if stepper == "gn" and values.get("extrap") is not None:
        errors.append(ConfigFieldError(
            "extrap", values["extrap"], "Gauss-Newton runs take no extrapolation.",
        ))
    if problem == "bratu" and isinstance(n, int) and n < 3:
        errors.append(ConfigFieldError("n", n, "Bratu grid size n must be at least 3."))
    return errors


def validate_config_fields(values: dict[str, Any]) -> list[ConfigFieldError]:
    """Validate a flat experiment dict, including unknown keys and
    cross-field rules. Never raises."""
    known = {p.key for p in EXPERIMENT_PARAMS}
    errors = [
        ConfigFieldError(k, v, f"Unknown experiment key {k!r}.")
        for k, v in values.items() if k not in known
    ]
    errors.extend(validate_param_values(EXPERIMENT_PARAMS, values))
    if not errors:
        errors.extend(_cross_field_errors(merge_configs(default_config(), values)))
    return errors


def validate_config(values: dict[str, Any]) -> None:
    """Raises :class:`ConfigError` listing every invalid field."""
    errors = validate_config_fields(values)
    if errors:
        lines = [e.message for e in errors]
        raise ConfigError(
            "Configuration has invalid values:\n  • " + "\n  • ".join(lines)
        )


def spec_from_config(values: dict[str, Any]) -> ExperimentSpec:
    """Merge *values* over the defaults, validate, and build the spec."""
    values = _normalize(values)
    validate_config(values)
    merged = merge_configs(default_config(), values)
    for key in ("alpha", "lam", "tol", "tau0", "omega"):
        if merged[key] is not None:
            merged[key] = float(merged[key])
    return ExperimentSpec(**merged)


def validate_spec(spec: ExperimentSpec) -> ExperimentSpec:
    """Re-validate a spec built in code (e.g. with ``dataclasses.replace``)."""
    return spec_from_config(dataclasses.asdict(spec))


def load_matrix_config(path: str) -> list[ExperimentSpec]:
    """Read a TOML experiment matrix.

    An optional ``[defaults]`` table is merged under every
    ``[[experiment]]`` entry. Raises :class:`ConfigIOError` when the file
    cannot be read and :class:`ConfigError` for syntax or field errors.
    """
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"Invalid TOML in matrix file {path}: {e}") from e
    except OSError as e:
        raise ConfigIOError(f"Cannot read matrix file {path}: {e}") from e

    unknown = set(data) - {"defaults", "experiment"}
    if unknown:
        raise ConfigError(
            f"Matrix file {path} has unknown tables: {', '.join(sorted(unknown))}"
        )
    defaults = data.get("defaults", {})
    entries = data.get("experiment", [])
    if not isinstance(defaults, dict) or not isinstance(entries, list):
        raise ConfigError(
            f"Matrix file {path} must contain a [defaults] table and [[experiment]] entries"
        )

    specs: list[ExperimentSpec] = []
    for i, entry in enumerate(entries, start=1):
        try:
            specs.append(spec_from_config(merge_configs(defaults, entry)))
        except ConfigError as e:
            raise ConfigError(f"Experiment #{i} in {path}: {e}") from e
    return specs


def _type_label(t) -> str:
    """Human-readable label for an expected type or tuple of types."""
    if isinstance(t, tuple):
        return " or ".join(x.__name__ for x in t)
    return t.__name__


__all__ = [
    "ConfigError",
    "ConfigIOError",
    "ConfigFieldError",
    "EXPERIMENT_PARAMS",
    "STEPPERS",
    "EXTRAP_METHODS",
    "get_app_dir",
    "default_config",
    "merge_configs",
    "validate_param_values",
    "validate_config_fields",
    "validate_config",
    "spec_from_config",
    "validate_spec",
    "load_matrix_config",
]
