"""Adjacency construction and normalized spectral clustering."""

import numpy as np
from sklearn.cluster import KMeans


def _symmetrize_abs(z):
    za = np.abs(np.asarray(z, dtype=float))
    return 0.5 * (za + za.T)


def adjacency_cslf(z):
    """A = (|Z| + |Z^T|)/2 with the diagonal zeroed."""
    a = _symmetrize_abs(z)
    np.fill_diagonal(a, 0.0)
    return a


def adjacency_cslfs(z_v, z_c):
    """Average the consistent and the mean view-specific symmetrized
    absolute representations: A = (sym|Z_c| + mean_v sym|Z^v|)/2."""
    if len(z_v) < 1:
        raise ValueError("need at least one view-specific matrix")
    a = 0.5 * (
        _symmetrize_abs(z_c)
        + sum(_symmetrize_abs(z) for z in z_v) / len(z_v)
    )
    np.fill_diagonal(a, 0.0)
    return a


def spectral_embedding(a, c):
    """Rows of the top-c eigenvectors of the symmetric-normalized Laplacian,
    row-normalized. Zero-degree rows embed at the origin."""
    a = np.asarray(a, dtype=float)
    deg = a.sum(axis=1)
    isolated = deg <= 0
    inv_sqrt = np.zeros_like(deg)
    inv_sqrt[~isolated] = 1.0 / np.sqrt(deg[~isolated])
    norm_a = a * inv_sqrt[:, None] * inv_sqrt[None, :]
    # top eigenvectors of D^{-1/2} A D^{-1/2} = bottom of L_sym
    vals, vecs = np.linalg.eigh(norm_a)
    emb = vecs[:, -c:]
    row_norms = np.linalg.norm(emb, axis=1)
    ok = row_norms > 0
    emb[ok] = emb[ok] / row_norms[ok, None]
    return emb, isolated


def spectral_cluster(a, c, seed=0):
    """Normalized spectral clustering of an adjacency matrix.

    Embeds with the symmetric-normalized Laplacian, then runs seeded
    k-means (k-means++ init, 10 restarts, best inertia kept). Samples with
    zero adjacency degree are assigned to the nearest centroid after the
    embedding; their presence is reported via the second return value.

    Returns
    -------
    labels : (N,) int array with values in [0, c)
    isolated : (N,) bool array flagging zero-degree samples
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if c < 1 or c > n:
        raise ValueError(f"cluster count {c} out of range for {n} samples")
    emb, isolated = spectral_embedding(a, c)
    if isolated.all():
        # edgeless graph: no meaningful partition, put everything together
        return np.zeros(n, dtype=int), isolated
    km = KMeans(
        n_clusters=c, init="k-means++", n_init=10, max_iter=300,
        random_state=seed,
    )
    labels = np.empty(n, dtype=int)
    labels[~isolated] = km.fit_predict(emb[~isolated])
    if isolated.any():
        dists = np.linalg.norm(
            emb[isolated][:, None, :] - km.cluster_centers_[None], axis=2
        )
        labels[isolated] = np.argmin(dists, axis=1)
    return labels, isolated


def offblock_mass(a, labels):
    """Fraction of total adjacency weight connecting different clusters."""
    a = np.asarray(a, dtype=float)
    labels = np.asarray(labels)
    total = a.sum()
    if total <= 0:
        return 0.0
    same = labels[:, None] == labels[None, :]
    return float(a[~same].sum() / total)


def least_squares_representation(features, reg=1e-2):
    """Ridge-regularized self-expressive coefficients for a feature matrix.

    Solves min_Z ||X - X Z||_F^2 + reg*||Z||_F^2 and zeroes the diagonal;
    used to compare clusterability of raw views against learned factors.
    """
    x = np.asarray(features, dtype=float)
    n = x.shape[1]
    gram = x.T @ x
    z = np.linalg.solve(gram + reg * np.eye(n), gram)
    np.fill_diagonal(z, 0.0)
    return z


def cluster_features(features, c, seed=0, reg=1e-2):
    """Least-squares self-expressive clustering of one feature matrix."""
    z = least_squares_representation(features, reg)
    labels, _ = spectral_cluster(adjacency_cslf(z), c, seed)
    return labels
