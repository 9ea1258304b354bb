import numpy as np
import pytest

from regsum import Graph, edge_density, internal_density
from regsum.errors import PreconditionError
from regsum.graph import (bipartite_degrees, neighbourhood_deviation,
                          read_edge_list, write_edge_list)


def complete_bipartite(na, nb):
    n = na + nb
    A = np.zeros((n, n))
    A[:na, na:] = 1.0
    A[na:, :na] = 1.0
    return Graph(A)


class TestGraphValidation:
    def test_rejects_asymmetric(self):
        A = np.zeros((3, 3))
        A[0, 1] = 1.0
        with pytest.raises(PreconditionError):
            Graph(A)

    def test_rejects_self_loops(self):
        A = np.eye(3)
        with pytest.raises(PreconditionError):
            Graph(A)

    def test_rejects_out_of_range_weights(self):
        A = np.zeros((2, 2))
        A[0, 1] = A[1, 0] = 1.5
        with pytest.raises(PreconditionError):
            Graph(A)

    def test_rejects_non_square(self):
        with pytest.raises(PreconditionError):
            Graph(np.zeros((2, 3)))

    def test_from_edges_averages_duplicates(self):
        g = Graph.from_edges(2, [(0, 1, 0.2), (0, 1, 0.4)])
        assert g.dense()[0, 1] == pytest.approx(0.3)

    def test_equality(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        h = Graph.from_edges(3, [(1, 2), (0, 1)])
        assert g == h
        assert g != Graph.from_edges(3, [(0, 1)])

    def test_degrees_and_total_weight(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2, 0.5)])
        assert np.allclose(g.degrees(), [1.0, 1.5, 0.5])
        assert g.total_weight() == pytest.approx(1.5)

    def test_neighbors(self):
        g = Graph.from_edges(4, [(0, 2), (0, 3)])
        assert np.array_equal(g.neighbors(0), [2, 3])
        assert g.neighbors(1).size == 0


class TestEdgeList:
    def test_round_trip(self, tmp_path):
        g = Graph.from_edges(4, [(0, 1), (1, 2, 0.25)])
        path = tmp_path / "g.el"
        write_edge_list(g, path)
        h, tokens = read_edge_list(path)
        assert h.n == 3  # vertex 3 is isolated and dropped without a header
        assert len(tokens) == 3

    def test_round_trip_with_declared_n(self, tmp_path):
        g = Graph.from_edges(5, [(0, 1), (1, 2, 0.25)])
        path = tmp_path / "g.el"
        write_edge_list(g, path, declare_n=True)
        h, tokens = read_edge_list(path)
        assert h.n == 5
        assert h == g
        assert tokens == [str(i) for i in range(5)]

    def test_rejects_out_of_range_index(self, tmp_path):
        path = tmp_path / "bad.el"
        path.write_text("# n=2\n0 5\n")
        with pytest.raises(PreconditionError):
            read_edge_list(path)

    def test_rejects_malformed_line(self, tmp_path):
        path = tmp_path / "bad.el"
        path.write_text("0\n")
        with pytest.raises(PreconditionError):
            read_edge_list(path)


class TestEdgeDensity:
    def test_empty_pair_is_zero(self):
        g = Graph(np.zeros((6, 6)))
        assert edge_density(g, [0, 1, 2], [3, 4, 5]) == 0.0

    def test_complete_pair_is_one(self):
        g = complete_bipartite(2, 5)
        assert edge_density(g, [0, 1], [2, 3, 4, 5, 6]) == 1.0

    def test_six_of_twelve_cross_edges(self):
        edges = [(0, 3), (0, 4), (1, 4), (1, 5), (2, 5), (2, 6)]
        g = Graph.from_edges(7, edges)
        assert edge_density(g, [0, 1, 2], [3, 4, 5, 6]) == pytest.approx(0.5)

    def test_rejects_overlapping_classes(self):
        g = Graph(np.zeros((4, 4)))
        with pytest.raises(PreconditionError):
            edge_density(g, [0, 1], [1, 2])


class TestInternalDensity:
    def test_edgeless_class(self):
        g = Graph(np.zeros((4, 4)))
        assert internal_density(g, [0, 1, 2]) == 0.0

    def test_single_edge_pair(self):
        g = Graph.from_edges(2, [(0, 1)])
        assert internal_density(g, [0, 1]) == pytest.approx(0.25)

    def test_four_clique(self):
        g = Graph(1.0 - np.eye(4))
        assert internal_density(g, [0, 1, 2, 3]) == pytest.approx(0.375)


class TestBipartiteDegrees:
    def test_complete_pair(self):
        g = complete_bipartite(3, 3)
        degs, d_bar = bipartite_degrees(g, [0, 1, 2], [3, 4, 5])
        assert all(d == 3.0 for d in degs.values())
        assert d_bar == pytest.approx(3.0)

    def test_empty_pair(self):
        g = Graph(np.zeros((4, 4)))
        degs, d_bar = bipartite_degrees(g, [0, 1], [2, 3])
        assert all(d == 0.0 for d in degs.values())
        assert d_bar == 0.0

    def test_perfect_matching(self):
        g = Graph.from_edges(4, [(0, 2), (1, 3)])
        degs, d_bar = bipartite_degrees(g, [0, 1], [2, 3])
        assert all(d == 1.0 for d in degs.values())
        assert d_bar == pytest.approx(1.0)

    def test_rejects_unequal_sizes(self):
        g = Graph(np.zeros((5, 5)))
        with pytest.raises(PreconditionError):
            bipartite_degrees(g, [0, 1], [2, 3, 4])


class TestNeighbourhoodDeviation:
    def test_empty_pair(self):
        g = Graph(np.zeros((4, 4)))
        assert neighbourhood_deviation(g, [0, 1], [2, 3], 2, 3) == 0.0

    def test_complete_pair(self):
        g = complete_bipartite(3, 3)
        assert neighbourhood_deviation(g, [0, 1, 2], [3, 4, 5], 3, 4) \
            == pytest.approx(0.0)

    def test_shared_single_neighbour(self):
        g = Graph.from_edges(4, [(0, 2), (0, 3)])
        assert neighbourhood_deviation(g, [0, 1], [2, 3], 2, 3) \
            == pytest.approx(0.5)

    def test_rejects_identical_vertices(self):
        g = Graph(np.zeros((4, 4)))
        with pytest.raises(PreconditionError):
            neighbourhood_deviation(g, [0, 1], [2, 3], 2, 2)
