"""Dense numerical kernels shared by the alternating-minimization solvers.

All functions are pure: identical inputs give bitwise-identical outputs, and
no internal state is kept, so concurrent calls are safe.
"""

import numpy as np
import scipy.linalg

# Library-wide numerical tolerances. Overridable by callers that need looser
# or tighter behavior; the defaults are used throughout the solvers.
ZERO_TARGET_TOL = 1e-14
SINGULAR_PENCIL_TOL = 1e-12
IDENTITY_DETECT_TOL = 1e-10


class ZeroTargetError(ValueError):
    """Procrustes target is numerically zero; the minimizer is non-unique."""


class SingularPencilError(ValueError):
    """An eigenvalue of A plus an eigenvalue of B is ~0; Sylvester solve is ill-posed."""


def _fix_svd_signs(u, vt):
    """Force the largest-magnitude entry of each left singular vector to be
    nonnegative, flipping the matching right singular vector to compensate.
    Removes the SVD sign ambiguity so results are reproducible across runs."""
    idx = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[idx, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return u * signs, vt * signs[:, None]


def orthogonal_procrustes(target):
    """Solve min ||Y - W X||_F over row-orthonormal X, given target = W^T Y.

    Parameters
    ----------
    target : (K, M) ndarray with K <= M.

    Returns
    -------
    (K, M) ndarray X = U V^T from the thin SVD of target, with X X^T = I_K.

    Raises
    ------
    ZeroTargetError
        If ||target||_F < 1e-14. The caller must substitute a (seeded)
        random orthonormal matrix, since any orthonormal X is optimal.
    """
    target = np.asarray(target, dtype=float)
    if target.shape[0] > target.shape[1]:
        raise ValueError(f"target must have K <= M, got shape {target.shape}")
    if np.linalg.norm(target) < ZERO_TARGET_TOL:
        raise ZeroTargetError("Procrustes target is numerically zero")
    u, _, vt = np.linalg.svd(target, full_matrices=False)
    u, vt = _fix_svd_signs(u, vt)
    return u @ vt


def random_orthonormal(rows, cols, rng):
    """Seeded random matrix with orthonormal rows (rows <= cols)."""
    q, r = np.linalg.qr(rng.standard_normal((cols, rows)))
    # fix QR sign ambiguity for determinism across platforms
    q = q * np.sign(np.diag(r))[None, :]
    return q.T


def solve_sylvester(a, b, c):
    """Solve A H + H B = C for symmetric PSD A (K x K) and B (N x N).

    When A = c*I (the case induced by orthonormal projections) the problem
    reduces to H (cI + B) = C, solved with a single Cholesky factorization.
    Otherwise falls back to the Bartels-Stewart algorithm.

    Raises
    ------
    SingularPencilError
        If some eigenvalue of A plus some eigenvalue of B is below 1e-12
        in magnitude, making the equation (nearly) unsolvable.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    k = a.shape[0]

    diag_mean = np.trace(a) / k
    if np.abs(a - diag_mean * np.eye(k)).max() < IDENTITY_DETECT_TOL:
        shifted = b + diag_mean * np.eye(b.shape[0])
        # eigenvalue sums of the pencil are diag_mean + spec(b)
        if np.min(np.abs(np.linalg.eigvalsh(shifted))) < SINGULAR_PENCIL_TOL:
            raise SingularPencilError("eigenvalue of A + eigenvalue of B ~ 0")
        try:
            cho = scipy.linalg.cho_factor(shifted, lower=True)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - guarded above
            raise SingularPencilError(str(exc)) from exc
        # H (cI + B) = C  <=>  (cI + B)^T H^T = C^T, and cI + B is symmetric
        return scipy.linalg.cho_solve(cho, c.T).T

    eig_a = np.linalg.eigvalsh(a)
    eig_b = np.linalg.eigvalsh(b)
    if np.min(np.abs(eig_a[:, None] + eig_b[None, :])) < SINGULAR_PENCIL_TOL:
        raise SingularPencilError("eigenvalue of A + eigenvalue of B ~ 0")
    return scipy.linalg.solve_sylvester(a, b, c)


def singular_value_threshold(m, tau):
    """Proximal operator of tau*||.||_* : soft-threshold the singular values.

    Returns the unique minimizer of tau*||X||_* + 0.5*||X - m||_F^2.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    m = np.asarray(m, dtype=float)
    if tau == 0:
        return m.copy()
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    s = np.maximum(s - tau, 0.0)
    keep = s > 0
    if not np.any(keep):
        return np.zeros_like(m)
    return (u[:, keep] * s[keep]) @ vt[keep]


def prox_l21_columns(g, tau):
    """Proximal operator of tau*||.||_{2,1} with the norm taken column-wise.

    Column i of the output is ((||g_i|| - tau)/||g_i||) * g_i when
    ||g_i|| > tau and the zero column otherwise.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    g = np.asarray(g, dtype=float)
    norms = np.linalg.norm(g, axis=0)
    scale = np.zeros_like(norms)
    active = norms > tau
    scale[active] = (norms[active] - tau) / norms[active]
    return g * scale[None, :]


def project_simplex(y):
    """Euclidean projection of a vector onto the probability simplex."""
    y = np.asarray(y, dtype=float)
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - 1.0
    ind = np.arange(1, len(y) + 1)
    rho = np.nonzero(u - css / ind > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(y - theta, 0.0)


def project_weights(costs, lam):
    """Minimize sum_i pi_i * c_i + (lam/2)*||pi||^2 over the probability simplex.

    Equivalent to the Euclidean projection of -costs/lam onto the simplex.
    """
    costs = np.asarray(costs, dtype=float)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if not np.all(np.isfinite(costs)):
        raise ValueError("costs must be finite")
    return project_simplex(-costs / lam)
