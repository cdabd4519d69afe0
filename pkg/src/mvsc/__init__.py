"""Partially latent multi-view subspace clustering.

Two algorithms built on a shared matrix factorization that separates the
consistent factor shared by all views from per-view specific factors:
a feature-level variant that self-expresses the stacked joint factor, and
a subspace-level variant with separate self-expressive matrices per factor.
"""

from .model import (
    MultiViewDataset,
    SolverConfig,
    initialize_cslf,
    initialize_cslfs,
    joint_latent,
)
from .solvers import FitResult, ResidualTrace, fit_cslf, fit_cslfs
from .spectral import adjacency_cslf, adjacency_cslfs, spectral_cluster
from .metrics import MetricReport, accuracy, ari, nmi
from .data_io import (
    DatasetManifest,
    SyntheticSpec,
    generate_synthetic,
    load_dataset,
    save_result,
)

__all__ = [
    "MultiViewDataset",
    "SolverConfig",
    "initialize_cslf",
    "initialize_cslfs",
    "joint_latent",
    "FitResult",
    "ResidualTrace",
    "fit_cslf",
    "fit_cslfs",
    "adjacency_cslf",
    "adjacency_cslfs",
    "spectral_cluster",
    "MetricReport",
    "accuracy",
    "ari",
    "nmi",
    "DatasetManifest",
    "SyntheticSpec",
    "generate_synthetic",
    "load_dataset",
    "save_result",
]

__version__ = "0.1.0"
