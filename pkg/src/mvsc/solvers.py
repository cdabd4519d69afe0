"""Alternating-minimization loops for the two clustering algorithms.

Each iteration applies the closed-form block updates in a fixed order
(projections, latent factors, self-expressive matrices, auxiliaries,
errors, weights, multipliers), then grows the penalty mu and checks the
constraint-violation stopping criteria in the max-magnitude norm.
"""

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .kernels import (
    ZeroTargetError,
    orthogonal_procrustes,
    prox_l21_columns,
    project_weights,
    random_orthonormal,
    singular_value_threshold,
    solve_sylvester,
)
from .model import (
    consistent_rows,
    initialize_cslf,
    initialize_cslfs,
    joint_latent,
    specific_rows,
)

DIVERGENCE_LIMIT = 1e12


class DivergedError(RuntimeError):
    """A state matrix became non-finite or unboundedly large."""

    def __init__(self, iteration, variable):
        self.iteration = iteration
        self.variable = variable
        super().__init__(
            f"solver diverged at iteration {iteration} in variable {variable!r}"
        )


@dataclass
class ResidualTrace:
    """Per-iteration stopping-criterion values, penalty, and wall time."""

    criteria: list = field(default_factory=list)
    mu: list = field(default_factory=list)
    elapsed_ms: list = field(default_factory=list)

    def append(self, crit, mu, elapsed_ms):
        self.criteria.append(np.asarray(crit, dtype=float))
        self.mu.append(float(mu))
        self.elapsed_ms.append(float(elapsed_ms))

    def __len__(self):
        return len(self.criteria)

    def as_table(self):
        """Rows of (iteration, criterion_1..k, mu, elapsed_ms)."""
        rows = []
        for i, (crit, mu, ms) in enumerate(
            zip(self.criteria, self.mu, self.elapsed_ms)
        ):
            rows.append([float(i)] + list(crit) + [mu, ms])
        return np.asarray(rows)


@dataclass
class FitResult:
    factors: object
    state: object
    trace: ResidualTrace
    converged: bool
    iterations: int


def _norm_l21(m):
    return np.linalg.norm(m, axis=0).sum()


def _max_abs(m):
    return np.abs(m).max() if m.size else 0.0


def _zero_diagonal(z):
    np.fill_diagonal(z, 0.0)
    return z


# ---------------------------------------------------------------------------
# shared block updates


def update_projections(data, factors, state, view, rng):
    """Procrustes updates of both projections for one view.

    The view-specific projection is refreshed first; the consistent one then
    sees the new value. An all-zero target (first iteration from the zero
    start) falls back to a seeded random orthonormal matrix.
    """
    x = data.views[view]
    res = state.lam1[view] / state.mu + x - state.e_r[view]
    k_s = factors.p_s[view].shape[1]
    k_c = factors.p_c[view].shape[1]

    y1 = res - factors.p_c[view] @ factors.h_c
    try:
        p_s_t = orthogonal_procrustes(factors.h_s[view] @ y1.T)
    except ZeroTargetError:
        p_s_t = random_orthonormal(k_s, x.shape[0], rng)
    factors.p_s[view] = p_s_t.T

    y2 = res - factors.p_s[view] @ factors.h_s[view]
    try:
        p_c_t = orthogonal_procrustes(factors.h_c @ y2.T)
    except ZeroTargetError:
        p_c_t = random_orthonormal(k_c, x.shape[0], rng)
    factors.p_c[view] = p_c_t.T


def update_specific_latent_cslf(data, factors, state, config, view):
    x = data.views[view]
    p_s = factors.p_s[view]
    z = state.z
    eye = np.eye(z.shape[0])
    rows = specific_rows(view, config.k_s)
    a = p_s.T @ p_s
    b = (eye - z) @ (eye - z).T
    c = p_s.T @ (
        state.lam1[view] / state.mu
        + x
        - factors.p_c[view] @ factors.h_c
        - state.e_r[view]
    ) - (state.lam2[rows] / state.mu - state.e_s[rows]) @ (eye - z).T
    factors.h_s[view] = solve_sylvester(a, b, c)


def update_specific_latent_cslfs(data, factors, state, config, view):
    x = data.views[view]
    p_s = factors.p_s[view]
    z = state.z_v[view]
    eye = np.eye(z.shape[0])
    a = p_s.T @ p_s
    b = (eye - z) @ (eye - z).T
    c = p_s.T @ (
        state.lam1[view] / state.mu
        + x
        - factors.p_c[view] @ factors.h_c
        - state.e_r[view]
    ) - (state.lam2[view] / state.mu - state.e_s_v[view]) @ (eye - z).T
    factors.h_s[view] = solve_sylvester(a, b, c)


def _consistent_recovery_sum(data, factors, state):
    """Sum over views of P_c^T (Lam1/mu + X - P_s H_s - E_r)."""
    acc = None
    for v, x in enumerate(data.views):
        term = factors.p_c[v].T @ (
            state.lam1[v] / state.mu
            + x
            - factors.p_s[v] @ factors.h_s[v]
            - state.e_r[v]
        )
        acc = term if acc is None else acc + term
    return acc


def update_consistent_latent_cslf(data, factors, state, config):
    z = state.z
    eye = np.eye(z.shape[0])
    rows = consistent_rows(data.n_views, config.k_s)
    a = sum(p.T @ p for p in factors.p_c)
    b = (eye - z) @ (eye - z).T
    c = _consistent_recovery_sum(data, factors, state) - (
        state.lam2[rows] / state.mu - state.e_s[rows]
    ) @ (eye - z).T
    factors.h_c = solve_sylvester(a, b, c)


def update_consistent_latent_cslfs(data, factors, state, config):
    z = state.z_c
    eye = np.eye(z.shape[0])
    a = sum(p.T @ p for p in factors.p_c)
    b = (eye - z) @ (eye - z).T
    c = _consistent_recovery_sum(data, factors, state) - (
        state.lam3 / state.mu - state.e_s_c
    ) @ (eye - z).T
    factors.h_c = solve_sylvester(a, b, c)


def _z_solve(h, lam_self, e_self, d, lam_aux, mu):
    """Solve (I + H^T H) Z = aux/mu + H^T lam/mu + D - H^T E + H^T H,
    then zero the diagonal."""
    hth = h.T @ h
    rhs = lam_aux / mu + h.T @ lam_self / mu + d - h.T @ e_self + hth
    cho = scipy.linalg.cho_factor(np.eye(h.shape[1]) + hth, lower=True)
    z = scipy.linalg.cho_solve(cho, rhs)
    return _zero_diagonal(z)


def update_z_cslf(factors, state):
    h = joint_latent(factors)
    state.z = _z_solve(h, state.lam2, state.e_s, state.d, state.lam3, state.mu)


def update_z_specific(factors, state, view):
    state.z_v[view] = _z_solve(
        factors.h_s[view],
        state.lam2[view],
        state.e_s_v[view],
        state.d_v[view],
        state.lam4[view],
        state.mu,
    )


def update_z_consistent(factors, state):
    state.z_c = _z_solve(
        factors.h_c, state.lam3, state.e_s_c, state.d_c, state.lam5, state.mu
    )


def update_d_cslf(state, config):
    state.d = (state.mu * state.z - state.lam3) / (config.lambda2 + state.mu)


def update_d_specific(state, config, view):
    state.d_v[view] = (state.mu * state.z_v[view] - state.lam4[view]) / (
        config.lambda2 * state.pi2[view] + state.mu
    )


def update_d_consistent(state, config):
    n_views = len(state.d_v)
    tau = config.lambda2 * state.pi2[n_views] / state.mu
    state.d_c = singular_value_threshold(state.z_c - state.lam5 / state.mu, tau)


def _recovery_target(data, factors, state, view):
    return (
        state.lam1[view] / state.mu
        + data.views[view]
        - factors.p_s[view] @ factors.h_s[view]
        - factors.p_c[view] @ factors.h_c
    )


def update_errors_cslf(data, factors, state, config):
    for v in range(data.n_views):
        g = _recovery_target(data, factors, state, v)
        state.e_r[v] = prox_l21_columns(g, state.pi[v] / state.mu)
    h = joint_latent(factors)
    g = state.lam2 / state.mu + h - h @ state.z
    state.e_s = prox_l21_columns(g, config.lambda1 / state.mu)


def update_errors_cslfs(data, factors, state, config):
    for v in range(data.n_views):
        g = _recovery_target(data, factors, state, v)
        state.e_r[v] = prox_l21_columns(g, state.pi1[v] / state.mu)
    for v in range(data.n_views):
        h = factors.h_s[v]
        g = state.lam2[v] / state.mu + h - h @ state.z_v[v]
        state.e_s_v[v] = prox_l21_columns(
            g, config.lambda1 * state.pi2[v] / state.mu
        )
    g = state.lam3 / state.mu + factors.h_c - factors.h_c @ state.z_c
    state.e_s_c = prox_l21_columns(
        g, config.lambda1 * state.pi2[data.n_views] / state.mu
    )


def update_weights_cslf(state, config):
    costs = np.array([_norm_l21(e) for e in state.e_r])
    state.pi = project_weights(costs, config.lambda3)


def update_weights_cslfs(state, config):
    costs1 = np.array([_norm_l21(e) for e in state.e_r])
    state.pi1 = project_weights(costs1, config.lambda3)
    costs2 = [
        config.lambda1 * _norm_l21(e) + 0.5 * config.lambda2 * np.sum(d * d)
        for e, d in zip(state.e_s_v, state.d_v)
    ]
    costs2.append(
        config.lambda1 * _norm_l21(state.e_s_c)
        + config.lambda2 * np.linalg.norm(state.d_c, ord="nuc")
    )
    state.pi2 = project_weights(np.array(costs2), config.lambda3)


def update_multipliers_cslf(data, factors, state, config):
    mu = state.mu
    for v in range(data.n_views):
        state.lam1[v] = state.lam1[v] + mu * (
            data.views[v]
            - factors.p_s[v] @ factors.h_s[v]
            - factors.p_c[v] @ factors.h_c
            - state.e_r[v]
        )
    h = joint_latent(factors)
    state.lam2 = state.lam2 + mu * (h - h @ state.z - state.e_s)
    state.lam3 = state.lam3 + mu * (state.d - state.z)
    state.mu = min(config.rho * mu, config.mu_max)


def update_multipliers_cslfs(data, factors, state, config):
    mu = state.mu
    for v in range(data.n_views):
        state.lam1[v] = state.lam1[v] + mu * (
            data.views[v]
            - factors.p_s[v] @ factors.h_s[v]
            - factors.p_c[v] @ factors.h_c
            - state.e_r[v]
        )
        h = factors.h_s[v]
        state.lam2[v] = state.lam2[v] + mu * (h - h @ state.z_v[v] - state.e_s_v[v])
        state.lam4[v] = state.lam4[v] + mu * (state.d_v[v] - state.z_v[v])
    state.lam3 = state.lam3 + mu * (
        factors.h_c - factors.h_c @ state.z_c - state.e_s_c
    )
    state.lam5 = state.lam5 + mu * (state.d_c - state.z_c)
    state.mu = min(config.rho * mu, config.mu_max)


# ---------------------------------------------------------------------------
# stopping criteria


def stop_criteria_cslf(data, factors, state):
    """Three max-magnitude constraint violations of the joint algorithm."""
    rec = np.mean(
        [
            _max_abs(
                data.views[v]
                - factors.p_s[v] @ factors.h_s[v]
                - factors.p_c[v] @ factors.h_c
                - state.e_r[v]
            )
            for v in range(data.n_views)
        ]
    )
    h = joint_latent(factors)
    selfexp = _max_abs(h - h @ state.z - state.e_s)
    aux = _max_abs(state.d - state.z)
    return np.array([rec, selfexp, aux])


def stop_criteria_cslfs(data, factors, state):
    """Five max-magnitude constraint violations of the hierarchical algorithm."""
    rec = np.mean(
        [
            _max_abs(
                data.views[v]
                - factors.p_s[v] @ factors.h_s[v]
                - factors.p_c[v] @ factors.h_c
                - state.e_r[v]
            )
            for v in range(data.n_views)
        ]
    )
    selfexp_v = np.mean(
        [
            _max_abs(
                factors.h_s[v] - factors.h_s[v] @ state.z_v[v] - state.e_s_v[v]
            )
            for v in range(data.n_views)
        ]
    )
    selfexp_c = _max_abs(factors.h_c - factors.h_c @ state.z_c - state.e_s_c)
    aux_v = np.mean(
        [_max_abs(state.d_v[v] - state.z_v[v]) for v in range(data.n_views)]
    )
    aux_c = _max_abs(state.d_c - state.z_c)
    return np.array([rec, selfexp_v, selfexp_c, aux_v, aux_c])


def _check_finite(iteration, named_arrays):
    for name, arr in named_arrays:
        if not np.all(np.isfinite(arr)) or _max_abs(arr) > DIVERGENCE_LIMIT:
            raise DivergedError(iteration, name)


# ---------------------------------------------------------------------------
# fit loops


def fit_cslf(data, config):
    """Run the feature-level algorithm until the three stopping criteria
    drop below epsilon or the iteration cap is reached."""
    factors, state = initialize_cslf(data, config)
    rng = np.random.default_rng(config.seed)
    trace = ResidualTrace()
    converged = False
    for it in range(config.max_iters):
        t0 = time.perf_counter()
        for v in range(data.n_views):
            update_projections(data, factors, state, v, rng)
        for v in range(data.n_views):
            update_specific_latent_cslf(data, factors, state, config, v)
        update_consistent_latent_cslf(data, factors, state, config)
        update_z_cslf(factors, state)
        update_d_cslf(state, config)
        update_errors_cslf(data, factors, state, config)
        update_weights_cslf(state, config)
        update_multipliers_cslf(data, factors, state, config)
        _check_finite(
            it,
            [("Z", state.z), ("D", state.d), ("H_c", factors.h_c)]
            + [(f"H_s^{v}", h) for v, h in enumerate(factors.h_s)],
        )
        crit = stop_criteria_cslf(data, factors, state)
        trace.append(crit, state.mu, (time.perf_counter() - t0) * 1e3)
        if np.all(crit < config.epsilon):
            converged = True
            break
    return FitResult(factors, state, trace, converged, len(trace))


def fit_cslfs(data, config):
    """Run the subspace-level hierarchical algorithm until its five stopping
    criteria drop below epsilon or the iteration cap is reached."""
    factors, state = initialize_cslfs(data, config)
    rng = np.random.default_rng(config.seed)
    trace = ResidualTrace()
    converged = False
    for it in range(config.max_iters):
        t0 = time.perf_counter()
        for v in range(data.n_views):
            update_projections(data, factors, state, v, rng)
        for v in range(data.n_views):
            update_specific_latent_cslfs(data, factors, state, config, v)
        update_consistent_latent_cslfs(data, factors, state, config)
        for v in range(data.n_views):
            update_z_specific(factors, state, v)
        update_z_consistent(factors, state)
        for v in range(data.n_views):
            update_d_specific(state, config, v)
        update_d_consistent(state, config)
        update_errors_cslfs(data, factors, state, config)
        update_weights_cslfs(state, config)
        update_multipliers_cslfs(data, factors, state, config)
        _check_finite(
            it,
            [("Z_c", state.z_c), ("D_c", state.d_c), ("H_c", factors.h_c)]
            + [(f"Z^{v}", z) for v, z in enumerate(state.z_v)]
            + [(f"H_s^{v}", h) for v, h in enumerate(factors.h_s)],
        )
        crit = stop_criteria_cslfs(data, factors, state)
        trace.append(crit, state.mu, (time.perf_counter() - t0) * 1e3)
        if np.all(crit < config.epsilon):
            converged = True
            break
    return FitResult(factors, state, trace, converged, len(trace))
