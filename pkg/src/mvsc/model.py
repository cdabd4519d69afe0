"""Typed containers for the factorization model and solver state.

Shapes follow the convention features x samples: view v is an (M_v, N)
matrix, view-specific latent factors are (K_s, N), the consistent factor
is (K_c, N), and self-expressive matrices are (N, N) with zero diagonal.
"""

from dataclasses import dataclass, field

import numpy as np


class ShapeMismatchError(ValueError):
    """A configured latent dimension exceeds some view's feature dimension."""


@dataclass
class MultiViewDataset:
    """V observation matrices sharing a sample axis, plus optional labels."""

    views: list
    labels: np.ndarray | None = None
    n_clusters: int | None = None

    def __post_init__(self):
        if len(self.views) < 1:
            raise ValueError("need at least one view")
        self.views = [np.asarray(x, dtype=float) for x in self.views]
        n = self.views[0].shape[1]
        for i, x in enumerate(self.views):
            if x.ndim != 2 or x.shape[0] < 1:
                raise ValueError(f"view {i} must be a 2-d matrix with >= 1 rows")
            if x.shape[1] != n:
                raise ValueError(
                    f"view {i} has {x.shape[1]} samples, expected {n}"
                )
            if not np.all(np.isfinite(x)):
                raise ValueError(f"view {i} contains non-finite entries")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=int)
            if self.labels.shape != (n,):
                raise ValueError("labels length must equal the sample count")
            if self.n_clusters is None:
                self.n_clusters = int(self.labels.max()) + 1
            present = np.unique(self.labels)
            if present.min() < 0 or present.max() >= self.n_clusters:
                raise ValueError("labels must lie in [0, n_clusters)")
            if len(present) != self.n_clusters:
                raise ValueError("every cluster index must appear at least once")

    @property
    def n_views(self):
        return len(self.views)

    @property
    def n_samples(self):
        return self.views[0].shape[1]

    @property
    def dims(self):
        return [x.shape[0] for x in self.views]


@dataclass
class SolverConfig:
    """Hyperparameters for both algorithms.

    Defaults follow standard inexact-ALM practice for self-expressive
    clustering; the stopping tolerance applies to every criterion.
    """

    k_s: int = 10
    k_c: int = 10
    lambda1: float = 1.0
    lambda2: float = 1.0
    lambda3: float = 1.0
    mu0: float = 1e-4
    mu_max: float = 1e6
    rho: float = 1.5
    epsilon: float = 1e-6
    max_iters: int = 300
    seed: int = 0

    def validate(self, data):
        min_dim = min(data.dims)
        if self.k_s < 1 or self.k_c < 1:
            raise ShapeMismatchError("latent dimensions must be >= 1")
        if self.k_s > min_dim or self.k_c > min_dim:
            raise ShapeMismatchError(
                f"latent dims ({self.k_s}, {self.k_c}) exceed the smallest "
                f"view dimension {min_dim}"
            )
        if self.lambda1 < 0 or self.lambda2 < 0 or self.lambda3 < 0:
            raise ValueError("trade-off parameters must be nonnegative")
        if self.mu0 <= 0 or self.mu_max <= 0 or self.mu0 > self.mu_max:
            raise ValueError("need 0 < mu0 <= mu_max")
        if self.rho < 1:
            raise ValueError("rho must be >= 1")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.max_iters < 0:
            raise ValueError("max_iters must be nonnegative")


@dataclass
class FactorState:
    """Projections with orthonormal columns and the latent factors."""

    p_s: list
    p_c: list
    h_s: list
    h_c: np.ndarray


@dataclass
class SubspaceStateCSLF:
    """Self-expressive state for the feature-level (joint) algorithm."""

    z: np.ndarray
    d: np.ndarray
    e_r: list
    e_s: np.ndarray
    lam1: list
    lam2: np.ndarray
    lam3: np.ndarray
    pi: np.ndarray
    mu: float


@dataclass
class SubspaceStateCSLFS:
    """Self-expressive state for the subspace-level hierarchical algorithm."""

    z_v: list
    z_c: np.ndarray
    d_v: list
    d_c: np.ndarray
    e_r: list
    e_s_v: list
    e_s_c: np.ndarray
    lam1: list
    lam2: list
    lam3: np.ndarray
    lam4: list
    lam5: np.ndarray
    pi1: np.ndarray
    pi2: np.ndarray
    mu: float


def _zero_factors(data, config):
    return FactorState(
        p_s=[np.zeros((m, config.k_s)) for m in data.dims],
        p_c=[np.zeros((m, config.k_c)) for m in data.dims],
        h_s=[np.zeros((config.k_s, data.n_samples)) for _ in data.views],
        h_c=np.zeros((config.k_c, data.n_samples)),
    )


def initialize_cslf(data, config):
    """All-zeros starting state with uniform view weights and mu = mu0."""
    config.validate(data)
    n, v = data.n_samples, data.n_views
    k_joint = config.k_s * v + config.k_c
    factors = _zero_factors(data, config)
    state = SubspaceStateCSLF(
        z=np.zeros((n, n)),
        d=np.zeros((n, n)),
        e_r=[np.zeros((m, n)) for m in data.dims],
        e_s=np.zeros((k_joint, n)),
        lam1=[np.zeros((m, n)) for m in data.dims],
        lam2=np.zeros((k_joint, n)),
        lam3=np.zeros((n, n)),
        pi=np.full(v, 1.0 / v),
        mu=config.mu0,
    )
    return factors, state


def initialize_cslfs(data, config):
    """As initialize_cslf, with per-view subspace state and two weight vectors."""
    config.validate(data)
    n, v = data.n_samples, data.n_views
    factors = _zero_factors(data, config)
    state = SubspaceStateCSLFS(
        z_v=[np.zeros((n, n)) for _ in range(v)],
        z_c=np.zeros((n, n)),
        d_v=[np.zeros((n, n)) for _ in range(v)],
        d_c=np.zeros((n, n)),
        e_r=[np.zeros((m, n)) for m in data.dims],
        e_s_v=[np.zeros((config.k_s, n)) for _ in range(v)],
        e_s_c=np.zeros((config.k_c, n)),
        lam1=[np.zeros((m, n)) for m in data.dims],
        lam2=[np.zeros((config.k_s, n)) for _ in range(v)],
        lam3=np.zeros((config.k_c, n)),
        lam4=[np.zeros((n, n)) for _ in range(v)],
        lam5=np.zeros((n, n)),
        pi1=np.full(v, 1.0 / v),
        pi2=np.full(v + 1, 1.0 / (v + 1)),
        mu=config.mu0,
    )
    return factors, state


def joint_latent(factors):
    """Vertical stack [H_s^1; ...; H_s^V; H_c]."""
    return np.vstack(factors.h_s + [factors.h_c])


def specific_rows(v, k_s):
    """Row slice of the joint latent stack owned by view v (0-based)."""
    return slice(v * k_s, (v + 1) * k_s)


def consistent_rows(n_views, k_s):
    """Row slice of the joint latent stack owned by the consistent factor."""
    return slice(n_views * k_s, None)
