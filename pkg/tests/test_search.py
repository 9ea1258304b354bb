import numpy as np
import pytest

from regsum import (Database, Graph, SummarizationConfig, ap_at_k, db_add,
                    laplacian_spectrum, map_at_k, query_top_k,
                    query_top_k_raw, spectral_distance)
from regsum.errors import DuplicateId, EmptyDatabase, PreconditionError


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


class TestLaplacianSpectrum:
    def test_edgeless(self):
        s = laplacian_spectrum(Graph(np.zeros((5, 5))))
        assert np.array_equal(s, np.zeros(5))

    def test_path_two(self):
        s = laplacian_spectrum(path_graph(2))
        assert np.allclose(s, [0.0, 2.0])

    def test_path_three(self):
        s = laplacian_spectrum(path_graph(3))
        assert np.allclose(s, [0.0, 1.0, 3.0])

    def test_nonnegative_and_sorted(self):
        rng = np.random.default_rng(0)
        A = np.triu(rng.random((10, 10)), 1)
        g = Graph(A + A.T)
        s = laplacian_spectrum(g)
        assert np.all(s >= 0.0)
        assert np.all(np.diff(s) >= 0.0)


class TestSpectralDistance:
    def test_identical_spectra(self):
        s = np.array([0.0, 1.0, 2.5])
        assert spectral_distance(s, s) == 0.0

    def test_head_tail_alignment_l1(self):
        assert spectral_distance([0.0, 2.0], [0.0, 1.0, 3.0], l=1) \
            == pytest.approx(0.5)

    def test_tail_only_l0(self):
        assert spectral_distance([0.0, 2.0], [0.0, 1.0, 3.0], l=0) \
            == pytest.approx(1.0)

    def test_symmetric_in_arguments(self):
        a, b = np.array([0.0, 2.0]), np.array([0.0, 1.0, 3.0])
        assert spectral_distance(a, b, 1) == spectral_distance(b, a, 1)

    def test_rejects_bad_l(self):
        with pytest.raises(PreconditionError):
            spectral_distance([0.0, 2.0], [0.0, 1.0], l=3)


class TestRetrievalMetrics:
    def test_perfect_retrieval(self):
        assert ap_at_k(["a", "b", "c"], {"a", "b", "c"}, 3) == 1.0

    def test_no_relevant_in_top_k(self):
        assert ap_at_k(["x", "y"], {"a"}, 2) == 0.0

    def test_interleaved_pattern(self):
        # hits at ranks 1 and 3 with three relevant items
        assert ap_at_k(["a", "x", "b"], {"a", "b", "c"}, 3) \
            == pytest.approx(5.0 / 9.0)

    def test_map_single_query(self):
        q = (["a", "x", "b"], {"a", "b", "c"})
        assert map_at_k([q], 3) == pytest.approx(5.0 / 9.0)

    def test_map_mean_of_two(self):
        q1 = (["a"], {"a"})
        q2 = (["x"], {"a"})
        assert map_at_k([q1, q2], 1) == pytest.approx(0.5)

    def test_map_five_queries(self):
        # AP values {1, 5/9, 5/9, 0, 1} average to 28/45
        qs = [(["a", "y", "z"], {"a"}),
              (["a", "x", "b"], {"a", "b", "c"}),
              (["a", "x", "b"], {"a", "b", "c"}),
              (["x", "y", "z"], {"a"}),
              (["a", "y", "z"], {"a"})]
        assert map_at_k(qs, 3) == pytest.approx(28.0 / 45.0)


def seeded_graph(seed, n=60, p=0.3):
    rng = np.random.default_rng(seed)
    A = np.triu((rng.random((n, n)) < p) * 1.0, 1)
    return Graph(A + A.T)


class TestDatabase:
    def test_add_and_read_back_bit_identical(self, tmp_path):
        db = Database(tmp_path / "db")
        cfg = SummarizationConfig(epsilon=0.05)
        entry = db_add(db, "g1", seeded_graph(0), cfg)
        loaded = db.get("g1")
        assert loaded.id == "g1"
        assert np.array_equal(loaded.spectrum, entry.spectrum)
        assert loaded.summary.to_json(0) == entry.summary.to_json(0)

    def test_spectrum_length_equals_summary_k(self, tmp_path):
        db = Database(tmp_path / "db")
        entry = db_add(db, "g1", seeded_graph(0),
                       SummarizationConfig(epsilon=0.05))
        assert entry.spectrum.size == entry.summary.k

    def test_duplicate_id_rejected(self, tmp_path):
        db = Database(tmp_path / "db")
        cfg = SummarizationConfig(epsilon=0.05)
        db_add(db, "g1", seeded_graph(0), cfg)
        with pytest.raises(DuplicateId):
            db_add(db, "g1", seeded_graph(1), cfg)

    def test_missing_entry(self, tmp_path):
        db = Database(tmp_path / "db")
        with pytest.raises(KeyError):
            db.get("nope")


class TestQuery:
    def test_stored_graph_ranks_itself_first(self, tmp_path):
        db = Database(tmp_path / "db")
        cfg = SummarizationConfig(epsilon=0.05)
        for s in range(3):
            db_add(db, f"g{s}", seeded_graph(s), cfg)
        ranked, timing = query_top_k(db, seeded_graph(1), 3, cfg)
        assert ranked[0][0] == "g1"
        assert ranked[0][1] == 0.0
        assert timing.t_s >= 0.0

    def test_full_k_is_total_ordering(self, tmp_path):
        db = Database(tmp_path / "db")
        cfg = SummarizationConfig(epsilon=0.05)
        for s in range(4):
            db_add(db, f"g{s}", seeded_graph(s), cfg)
        ranked, _ = query_top_k(db, seeded_graph(9), 4, cfg)
        assert sorted(i for i, _ in ranked) == ["g0", "g1", "g2", "g3"]
        dists = [d for _, d in ranked]
        assert dists == sorted(dists)

    def test_empty_database_rejected(self, tmp_path):
        db = Database(tmp_path / "db")
        with pytest.raises(EmptyDatabase):
            query_top_k(db, seeded_graph(0), 1,
                        SummarizationConfig(epsilon=0.05))

    def test_raw_query_requires_stored_spectra(self, tmp_path):
        db = Database(tmp_path / "db")
        cfg = SummarizationConfig(epsilon=0.05)
        db_add(db, "g0", seeded_graph(0), cfg)
        with pytest.raises(PreconditionError):
            query_top_k_raw(db, seeded_graph(1), 1)

    def test_raw_query_ranks_identical_graph_first(self, tmp_path):
        db = Database(tmp_path / "db")
        cfg = SummarizationConfig(epsilon=0.05)
        for s in range(3):
            db_add(db, f"g{s}", seeded_graph(s), cfg,
                   store_raw_spectrum=True)
        ranked = query_top_k_raw(db, seeded_graph(2), 3)
        assert ranked[0] == ("g2", 0.0)
