"""Output-space entropy search for multi-objective, multi-fidelity and
constrained Bayesian optimisation."""

from .acquisition import AcquisitionConfig, CostModel
from .benchmarks import BENCHMARKS, get_benchmark
from .nsga2 import EvolutionConfig, nsga2
from .optimizer import ALGORITHMS, Problem, RunConfig, RunResult, problem_from_benchmark, run
from .pareto import ParetoFront, hypervolume, pareto_front, r2_distance

__all__ = [
    "ALGORITHMS",
    "AcquisitionConfig",
    "BENCHMARKS",
    "CostModel",
    "EvolutionConfig",
    "ParetoFront",
    "Problem",
    "RunConfig",
    "RunResult",
    "get_benchmark",
    "hypervolume",
    "nsga2",
    "pareto_front",
    "problem_from_benchmark",
    "r2_distance",
    "run",
]
