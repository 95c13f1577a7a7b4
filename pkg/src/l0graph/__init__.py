"""l0-induced sparse subspace clustering."""

from .core import (
    DataError,
    NumericalError,
    ObjectiveTrace,
    PowerIterationError,
    SolverConfig,
    lipschitz_constant,
    normalize_columns,
    objective_l0,
)
from .metrics import accuracy, hungarian_assignment, nmi
from .pipeline import RunConfig, RunReport, run, sweep
from .regularized import build_knn_adjacency, reg_objective, solve_regularized_l0
from .solver import (
    brute_force_l0_oracle,
    gradient_step,
    hard_threshold,
    l1_initialize,
    omp_sparse_code,
    solve_l0,
)
from .spectral import spectral_cluster, symmetrize
from .synth import SubspaceSpec, generate, subspace_preserving_rate

__version__ = "0.1.0"
