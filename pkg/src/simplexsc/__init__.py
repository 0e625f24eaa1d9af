"""Subspace clustering via simplex-constrained self-expressive representations.

The pipeline: solve for a coefficient matrix C with X ~= XC under one of four
constraint sets, symmetrize C into an affinity graph, and segment the graph
with normalized spectral clustering.
"""

from .core import (
    ClusteringResult,
    ConfigError,
    DivergenceError,
    DomainError,
    NumericError,
    ParseError,
    ShapeError,
    SolverConfig,
    frobenius_distance,
)
from .dataio import (
    LabeledDataset,
    SyntheticSpec,
    generate_synthetic,
    load_csv,
    pca_project,
    save_csv,
)
from .evaluate import (
    AblationReport,
    AblationRow,
    affinity_diagnostics,
    clustering_error,
    run_ablation,
)
from .projections import (
    project_nonneg,
    project_scaled_affine,
    project_scaled_simplex,
)
from .solvers import (
    PrecomputedKernel,
    SolveResult,
    precompute_kernel,
    regularized_gram_inverse,
    solve,
    solve_lsr,
    solve_nlsr,
    solve_slsr,
    solve_ssrsc,
)
from .spectral import (
    SpectralConfig,
    build_affinity,
    kmeans,
    spectral_cluster,
    symmetric_eigendecomposition,
)

__version__ = "0.1.0"

__all__ = [
    "AblationReport",
    "AblationRow",
    "ClusteringResult",
    "ConfigError",
    "DivergenceError",
    "DomainError",
    "LabeledDataset",
    "NumericError",
    "ParseError",
    "PrecomputedKernel",
    "ShapeError",
    "SolveResult",
    "SolverConfig",
    "SpectralConfig",
    "SyntheticSpec",
    "affinity_diagnostics",
    "build_affinity",
    "clustering_error",
    "frobenius_distance",
    "generate_synthetic",
    "kmeans",
    "load_csv",
    "pca_project",
    "precompute_kernel",
    "project_nonneg",
    "project_scaled_affine",
    "project_scaled_simplex",
    "regularized_gram_inverse",
    "run_ablation",
    "save_csv",
    "solve",
    "solve_lsr",
    "solve_nlsr",
    "solve_slsr",
    "solve_ssrsc",
    "spectral_cluster",
    "symmetric_eigendecomposition",
]
