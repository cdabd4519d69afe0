"""Tour of the numerical kernels the solvers are built from.

Each block update in the alternating-minimization loops reduces to one of
these closed-form subproblems; this script states each problem and checks
the solution property that the solver relies on.

    python demos/02_kernels_tour.py
"""

import numpy as np

from mvsc.kernels import (
    orthogonal_procrustes,
    project_weights,
    prox_l21_columns,
    singular_value_threshold,
    solve_sylvester,
)


def main():
    rng = np.random.default_rng(0)

    # 1. Orthogonal Procrustes: maximize <X, T> over X with X X^T = I.
    t = rng.standard_normal((4, 6))
    x = orthogonal_procrustes(t)
    print("procrustes: X X^T == I:",
          np.allclose(x @ x.T, np.eye(4)),
          f" <X,T> = {np.sum(x * t):.4f} "
          f"(nuclear norm of T = {np.linalg.svd(t, compute_uv=False).sum():.4f})")

    # 2. Sylvester solve A X + X B = C (the stationarity equation of every
    #    quadratic latent-factor / self-expressive update).
    a = rng.standard_normal((5, 5)); a = a @ a.T + np.eye(5)
    b = rng.standard_normal((8, 8)); b = b @ b.T
    c = rng.standard_normal((5, 8))
    x = solve_sylvester(a, b, c)
    print("sylvester: residual",
          f"{np.linalg.norm(a @ x + x @ b - c):.2e}")

    # 3. Singular value thresholding: prox of tau * nuclear norm.
    m = rng.standard_normal((6, 6))
    s_before = np.linalg.svd(m, compute_uv=False)
    s_after = np.linalg.svd(singular_value_threshold(m, 1.0),
                            compute_uv=False)
    print("svt: singular values", np.round(s_before, 2),
          "->", np.round(s_after, 2))

    # 4. Column-wise L2,1 prox: shrinks whole columns toward zero, killing
    #    those below the threshold — this is what absorbs sample-specific
    #    gross corruption.
    g = rng.standard_normal((5, 4))
    g[:, 1] *= 0.05
    e = prox_l21_columns(g, 0.5)
    print("l21 prox: column norms", np.round(np.linalg.norm(g, axis=0), 2),
          "->", np.round(np.linalg.norm(e, axis=0), 2))

    # 5. Adaptive view weights: entropy-free quadratic program on the simplex
    #    turning per-view reconstruction costs into weights.
    costs = np.array([1.0, 3.0, 0.5])
    for lam in (0.1, 1.0, 100.0):
        w = project_weights(costs, lam)
        print(f"weights (lam={lam:g}):", np.round(w, 3),
              " sum =", round(float(w.sum()), 6))
    print("small lam -> winner-takes-all on the cheapest view; "
          "large lam -> uniform.")


if __name__ == "__main__":
    main()
