import numpy as np
import pytest

from mvsc.metrics import accuracy
from mvsc.spectral import (
    adjacency_cslf,
    adjacency_cslfs,
    cluster_features,
    least_squares_representation,
    offblock_mass,
    spectral_cluster,
)


def planted_blocks(sizes, noise=0.0, seed=0):
    rng = np.random.default_rng(seed)
    n = sum(sizes)
    a = np.zeros((n, n))
    labels = np.concatenate([np.full(s, i) for i, s in enumerate(sizes)])
    same = labels[:, None] == labels[None, :]
    a[same] = 1.0
    if noise > 0:
        mask = rng.random((n, n)) < noise
        mask = np.triu(mask, 1)
        a[mask | mask.T] = 1.0
    np.fill_diagonal(a, 0.0)
    return a, labels


class TestAdjacency:
    def test_symmetric_nonneg_input_unchanged(self):
        z = np.array([[0.0, 2.0], [2.0, 0.0]])
        assert np.array_equal(adjacency_cslf(z), z)

    def test_mixed_signs(self):
        z = np.array([[0.0, -2.0], [4.0, 0.0]])
        assert np.array_equal(adjacency_cslf(z), [[0.0, 3.0], [3.0, 0.0]])

    def test_exact_symmetry_random(self):
        z = np.random.default_rng(0).standard_normal((9, 9))
        a = adjacency_cslf(z)
        assert np.array_equal(a, a.T)
        assert np.all(a >= 0)
        assert np.all(np.diag(a) == 0)

    def test_cslfs_single_view_identity_case(self):
        s = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert np.allclose(adjacency_cslfs([s], s), s)

    def test_cslfs_zero_inputs(self):
        z = np.zeros((4, 4))
        assert not adjacency_cslfs([z, z], z).any()

    def test_cslfs_entries_bounded_by_max_input(self):
        rng = np.random.default_rng(1)
        z_v = [rng.standard_normal((6, 6)) for _ in range(3)]
        z_c = rng.standard_normal((6, 6))
        a = adjacency_cslfs(z_v, z_c)
        bound = max(np.abs(m).max() for m in z_v + [z_c])
        assert a.max() <= bound + 1e-12

    def test_cslfs_empty_view_list_rejected(self):
        with pytest.raises(ValueError):
            adjacency_cslfs([], np.zeros((2, 2)))


class TestSpectralCluster:
    def test_two_disjoint_blocks(self):
        a, truth = planted_blocks([3, 4])
        labels, isolated = spectral_cluster(a, 2, seed=0)
        assert accuracy(labels, truth) == 1.0
        assert not isolated.any()

    def test_each_sample_its_own_cluster(self):
        rng = np.random.default_rng(2)
        z = np.abs(rng.standard_normal((5, 5)))
        a = adjacency_cslf(z)
        labels, _ = spectral_cluster(a, 5, seed=0)
        assert sorted(labels) == [0, 1, 2, 3, 4]

    def test_noisy_three_blocks(self):
        a, truth = planted_blocks([20, 20, 20], noise=0.05, seed=3)
        labels, _ = spectral_cluster(a, 3, seed=0)
        assert accuracy(labels, truth) == 1.0

    def test_permutation_equivariance(self):
        a, truth = planted_blocks([10, 10, 10], noise=0.02, seed=4)
        rng = np.random.default_rng(5)
        perm = rng.permutation(a.shape[0])
        labels, _ = spectral_cluster(a, 3, seed=0)
        labels_p, _ = spectral_cluster(a[np.ix_(perm, perm)], 3, seed=0)
        # same partition up to cluster renaming
        assert accuracy(labels_p, labels[perm]) == 1.0

    def test_isolated_sample_flagged_and_assigned(self):
        a, _ = planted_blocks([3, 4])
        a[0, :] = 0.0
        a[:, 0] = 0.0
        labels, isolated = spectral_cluster(a, 2, seed=0)
        assert isolated[0]
        assert labels[0] in (0, 1)

    def test_cluster_count_bounds(self):
        a, _ = planted_blocks([3, 3])
        with pytest.raises(ValueError):
            spectral_cluster(a, 7, seed=0)


class TestOffblockMass:
    def test_block_diagonal_is_zero(self):
        a, truth = planted_blocks([4, 5])
        assert offblock_mass(a, truth) == 0.0

    def test_uniform_matrix(self):
        n = 6
        a = np.ones((n, n))
        np.fill_diagonal(a, 0.0)
        labels = np.array([0, 0, 0, 1, 1, 1])
        # 18 cross-block entries of 30 total off-diagonal
        assert abs(offblock_mass(a, labels) - 18 / 30) < 1e-12

    def test_empty_adjacency(self):
        assert offblock_mass(np.zeros((4, 4)), np.zeros(4)) == 0.0


class TestLeastSquaresClustering:
    def test_representation_zero_diagonal(self):
        x = np.random.default_rng(6).standard_normal((5, 12))
        z = least_squares_representation(x)
        assert np.all(np.diag(z) == 0.0)

    def test_clusters_union_of_subspaces(self):
        rng = np.random.default_rng(7)
        blocks = []
        truth = []
        for c in range(2):
            basis = rng.standard_normal((10, 2))
            blocks.append(basis @ rng.standard_normal((2, 15)))
            truth += [c] * 15
        x = np.hstack(blocks)
        labels = cluster_features(x, 2, seed=0)
        assert accuracy(labels, np.array(truth)) == 1.0
