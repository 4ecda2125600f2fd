from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from .errors import ConfigError, DimensionError


@dataclass(frozen=True)
class ParamSpec:
    """Declarative specification for a single configuration parameter.

    Used by the experiment configuration layer to describe every field of
    an :class:`ExperimentSpec`, including type, default, valid range,
    allowed values, and human-readable labels.
    """
    key: str
    type: type | tuple              # expected Python type(s)
    default: Any
    label: str                       # short label used in error messages
    description: str = ""            # longer help text
    min: float | int | None = None   # inclusive lower bound (unless min_exclusive)
    max: float | int | None = None   # inclusive upper bound (unless max_exclusive)
    min_exclusive: bool = False
    max_exclusive: bool = False
    choices: list | None = None      # allowed values
    nullable: bool = False           # True if None is valid


class StepperMethod(Enum):
    GD = "gd"
    PGD = "pgd"
    SGD = "sgd"


class ExtrapMethod(Enum):
    NONE = "none"
    RRE = "rre"
    MPE = "mpe"
    VEA = "vea"


class RunStatus(Enum):
    CONVERGED = "converged"
    NON_CONVERGENCE = "non_convergence"
    FAILED = "failed"


class HistoryKind(Enum):
    STEP = "step"
    EXTRAP = "extrap"


# ---------------------------------------------------------------------------
# Extrapolation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SequenceWindow:
    """Ordered iterates s_0, ..., s_m of a fixed-point process.

    ``early_stop`` is set by window generators that stopped before the
    requested length because the iteration had already converged.
    """
    vectors: tuple[np.ndarray, ...]
    early_stop: bool = False

    def __post_init__(self):
        vecs = tuple(np.asarray(v, dtype=float).ravel() for v in self.vectors)
        if not vecs:
            raise DimensionError("sequence window is empty")
        dim = vecs[0].shape[0]
        for i, v in enumerate(vecs):
            if v.shape[0] != dim:
                raise DimensionError(
                    f"window vector {i} has length {v.shape[0]}, expected {dim}"
                )
        object.__setattr__(self, "vectors", vecs)

    @property
    def dim(self) -> int:
        return self.vectors[0].shape[0]

    @property
    def size(self) -> int:
        return len(self.vectors)

    def matrix(self) -> np.ndarray:
        """Return the window as an (N, m+1) array, one column per vector."""
        return np.column_stack(self.vectors)


@dataclass(frozen=True)
class ExtrapConfig:
    """Tolerances of the extrapolation kernels."""
    normalization_tol: float = 1e-12
    degeneracy_tol: float = 1e-14
    breakdown_tol: float = 1e-14
    vea_guard: float = 1e-28


@dataclass
class ExtrapolationOutcome:
    t: np.ndarray
    gamma: np.ndarray
    alpha: np.ndarray
    method: ExtrapMethod
    breakdown: bool = False

    @property
    def q(self) -> int:
        """Effective extrapolation order (may be reduced on breakdown)."""
        return len(self.alpha)


# ---------------------------------------------------------------------------
# Solvers
# ---------------------------------------------------------------------------

_DEFAULT_OMEGA = {
    StepperMethod.GD: 1e-4,
    StepperMethod.PGD: 1e-4,
    StepperMethod.SGD: 0.5,
}


@dataclass(frozen=True)
class StepperConfig:
    """Gradient-descent stepper selection and Armijo constants.

    ``omega`` defaults to 1e-4 for GD/PGD and 0.5 for SGD.
    """
    method: StepperMethod = StepperMethod.PGD
    omega: float | None = None
    tau0: float = 1.0
    max_halvings: int = 50
    diag_floor: float = 1e-12

    def __post_init__(self):
        if isinstance(self.method, str):
            object.__setattr__(self, "method", StepperMethod(self.method))
        if self.omega is None:
            object.__setattr__(self, "omega", _DEFAULT_OMEGA[self.method])
        if not 0.0 < self.omega < 1.0:
            raise ConfigError(f"omega must lie in (0, 1), got {self.omega}")
        if self.tau0 <= 0.0:
            raise ConfigError(f"tau0 must be positive, got {self.tau0}")
        if self.max_halvings < 1:
            raise ConfigError(f"max_halvings must be >= 1, got {self.max_halvings}")
        if self.diag_floor <= 0.0:
            raise ConfigError(f"diag_floor must be positive, got {self.diag_floor}")


@dataclass(frozen=True)
class SolveConfig:
    """Restart length, extrapolation method and stopping rule of a run."""
    q: int = 1
    extrap: ExtrapMethod = ExtrapMethod.NONE
    tol: float = 1e-5
    itermax: int = 500
    extrap_config: ExtrapConfig = field(default_factory=ExtrapConfig)

    def __post_init__(self):
        if self.extrap is None:
            object.__setattr__(self, "extrap", ExtrapMethod.NONE)
        elif isinstance(self.extrap, str):
            object.__setattr__(self, "extrap", ExtrapMethod(self.extrap))
        if self.extrap is not ExtrapMethod.NONE and self.q < 1:
            raise ConfigError(f"restart length q must be >= 1, got {self.q}")
        if self.tol <= 0.0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.itermax < 0:
            raise ConfigError(f"itermax must be >= 0, got {self.itermax}")

    @property
    def window_steps(self) -> int:
        """Stepper steps per extrapolation cycle."""
        if self.extrap is ExtrapMethod.VEA:
            return 2 * self.q
        return self.q + 1


@dataclass(frozen=True)
class HistoryEntry:
    iteration: int
    kind: HistoryKind
    rel_successive_norm: float | None
    relative_error: float | None


@dataclass
class RunReport:
    status: RunStatus
    iterations: int
    cycles: int
    final_x: np.ndarray
    relative_error: float | None
    wall_seconds: float
    history: list[HistoryEntry] = field(default_factory=list)
    message: str | None = None

    @property
    def converged(self) -> bool:
        return self.status is RunStatus.CONVERGED


# ---------------------------------------------------------------------------
# Problems and experiments
# ---------------------------------------------------------------------------

BRATU_DOMAIN = (-3.0, 3.0)


@dataclass(frozen=True)
class BratuSpec:
    """Extended 2D Bratu instance on [-3, 3]^2 (``alpha = 0`` is standard Bratu)."""
    n: int
    alpha: float = 0.0
    lam: float = 0.0

    def __post_init__(self):
        if self.n < 3:
            raise ConfigError(f"Bratu grid needs n >= 3, got {self.n}")


@dataclass(frozen=True)
class ExperimentSpec:
    """One benchmark run. Plain values only, so it serializes losslessly."""
    problem: str = "bratu"
    n: int = 100
    alpha: float = 0.0
    lam: float = 0.0
    stepper: str = "pgd"
    extrap: str | None = None
    q: int = 1
    tol: float = 1e-5
    itermax: int = 500
    tau0: float = 1.0
    omega: float | None = None
    x0: str = "zeros"
    seed: int = 0
    report_path: str | None = None
    history_path: str | None = None

    def to_config(self) -> dict[str, Any]:
        return asdict(self)
