import numpy as np
import pytest

from regsum import (NoisyCliqueSpec, PlantedPartitionSpec, erdos_renyi,
                    kesten_stigum_detectable, planted_partition,
                    synth_graph_gen)
from regsum.errors import PreconditionError


class TestNoisyClique:
    def test_noiseless_equals_union_of_cliques(self):
        g, gt, labels = synth_graph_gen(
            NoisyCliqueSpec(n=40, num_c=4, eta1=0.0, eta2=0.0, seed=0))
        assert g == gt
        A = g.dense()
        for i in range(4):
            block = slice(10 * i, 10 * (i + 1))
            assert np.all(A[block, block] + np.eye(10) == 1.0)
        assert np.array_equal(labels, np.repeat(np.arange(4), 10))

    def test_full_noise_inverts_structure(self):
        g, _, _ = synth_graph_gen(
            NoisyCliqueSpec(n=30, num_c=3, eta1=1.0, eta2=1.0, seed=0))
        A = g.dense()
        for i in range(3):
            block = slice(10 * i, 10 * (i + 1))
            assert np.all(A[block, block] == 0.0)
        assert np.all(A[:10, 10:] == 1.0)

    def test_remainder_vertices_are_background(self):
        _, _, labels = synth_graph_gen(
            NoisyCliqueSpec(n=23, num_c=2, eta1=0.0, eta2=0.0, seed=0))
        # clusters of size 11 cover vertices 0..21; vertex 22 is background
        assert labels[22] == -1
        assert np.all(labels[:22] >= 0)

    def test_rejects_tiny_clusters(self):
        with pytest.raises(PreconditionError):
            NoisyCliqueSpec(n=5, num_c=5, eta1=0.0, eta2=0.0)


class TestErdosRenyi:
    def test_extremes(self):
        assert erdos_renyi(10, 0.0).total_weight() == 0.0
        assert erdos_renyi(10, 1.0).total_weight() == 45.0

    def test_edge_count_within_four_sigma(self):
        n, p = 1000, 0.3
        g = erdos_renyi(n, p, seed=0)
        pairs = n * (n - 1) / 2
        mean = p * pairs
        sigma = np.sqrt(pairs * p * (1 - p))
        assert abs(g.total_weight() - mean) < 4 * sigma

    def test_rejects_bad_probability(self):
        with pytest.raises(PreconditionError):
            erdos_renyi(10, 1.5)


class TestPlantedPartition:
    def test_symmetric_case_matches_er_statistics(self):
        n, a = 2000, 12.0
        g, labels = planted_partition(PlantedPartitionSpec(n=n, a=a, b=a,
                                                           seed=0))
        deg = g.degrees()
        m0, m1 = deg[labels == 0].mean(), deg[labels == 1].mean()
        assert abs(m0 - m1) < 1.0
        assert abs(deg.mean() - a) < 1.0

    def test_mean_degree_near_half_sum(self):
        n, a, b = 2000, 20.0, 2.0
        g, _ = planted_partition(PlantedPartitionSpec(n=n, a=a, b=b, seed=0))
        # expected total degree (a + b) / 2 = 11, edge count n * 11 / 2
        mean_edges = n * (a + b) / 4
        sigma = np.sqrt(mean_edges)
        assert abs(g.total_weight() - mean_edges) < 4 * sigma

    def test_sparse_path_agrees_with_dense_statistics(self):
        n, a, b = 6000, 20.0, 2.0
        g, labels = planted_partition(PlantedPartitionSpec(n=n, a=a, b=b,
                                                           seed=1))
        assert g.n == n
        mean_edges = n * (a + b) / 4
        assert abs(g.total_weight() - mean_edges) < 4 * np.sqrt(mean_edges)

    def test_rejects_odd_n(self):
        with pytest.raises(PreconditionError):
            PlantedPartitionSpec(n=7, a=2.0, b=1.0)

    def test_rejects_rates_above_n(self):
        with pytest.raises(PreconditionError):
            PlantedPartitionSpec(n=10, a=20.0, b=1.0)


class TestKestenStigum:
    def test_equal_rates_undetectable(self):
        assert not kesten_stigum_detectable(5.0, 5.0)

    def test_boundary_excluded(self):
        # (6 - 2)**2 = 16 equals 2 * (6 + 2) = 16 exactly
        assert not kesten_stigum_detectable(6.0, 2.0)

    def test_detectable_case(self):
        assert kesten_stigum_detectable(20.0, 2.0)

    def test_rejects_negative_rates(self):
        with pytest.raises(PreconditionError):
            kesten_stigum_detectable(-1.0, 2.0)
