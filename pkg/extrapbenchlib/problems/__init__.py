import numpy as np

from ..errors import ConfigError
from ..models import BratuSpec, ExperimentSpec
from ..problem import NllsProblem
from .bratu import BratuProblem, build_bratu
from .linear import LinearProblem
from .sparse_sine import SparseSineProblem, build_sparse_sine

PROBLEM_IDS = ("bratu", "sparse")
INITIAL_GUESSES = ("zeros", "random")


def build_problem(spec: ExperimentSpec) -> NllsProblem:
    """Construct the problem instance named by ``spec.problem``."""
    if spec.problem == "bratu":
        return build_bratu(BratuSpec(n=spec.n, alpha=spec.alpha, lam=spec.lam))
    if spec.problem == "sparse":
        return build_sparse_sine(spec.n)
    raise ConfigError(f"unknown problem {spec.problem!r}; expected one of {', '.join(PROBLEM_IDS)}")


def initial_guess(problem: NllsProblem, kind: str = "zeros", seed: int = 0) -> np.ndarray:
    """Zero vector, or a standard normal draw from ``default_rng(seed)``."""
    if kind == "zeros":
        return np.zeros(problem.n_unknowns)
    if kind == "random":
        return np.random.default_rng(seed).standard_normal(problem.n_unknowns)
    raise ConfigError(f"unknown initial guess {kind!r}; expected one of {', '.join(INITIAL_GUESSES)}")


__all__ = [
    "PROBLEM_IDS",
    "INITIAL_GUESSES",
    "build_problem",
    "initial_guess",
    "build_bratu",
    "build_sparse_sine",
    "BratuProblem",
    "SparseSineProblem",
    "LinearProblem",
]
