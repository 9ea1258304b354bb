"""Property-based invariants over randomized inputs."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from regsum import (Graph, Partition, ap_at_k, edge_density,
                    index_of_partition, laplacian_spectrum,
                    spectral_distance)
from regsum.regularity import (SummarizationConfig, initial_partition,
                               pair_verdicts, refine_partition)


@st.composite
def graphs(draw, max_n=24):
    n = draw(st.integers(min_value=2, max_value=max_n))
    seed = draw(st.integers(min_value=0, max_value=2 ** 31))
    p = draw(st.floats(min_value=0.0, max_value=1.0))
    rng = np.random.default_rng(seed)
    A = np.triu((rng.random((n, n)) < p) * rng.random((n, n)), 1)
    return Graph(A + A.T)


@st.composite
def spectra(draw, max_len=12):
    vals = draw(st.lists(st.floats(min_value=0.0, max_value=100.0),
                         min_size=1, max_size=max_len))
    return np.sort(np.asarray(vals))


@given(graphs())
@settings(max_examples=40, deadline=None)
def test_edge_density_bounds_and_symmetry(g):
    n = g.n
    half = n // 2
    if half == 0:
        return
    a, b = np.arange(half), np.arange(half, n)
    d = edge_density(g, a, b)
    assert 0.0 <= d <= 1.0
    assert abs(d - edge_density(g, b, a)) < 1e-9


@given(graphs(), st.integers(min_value=0, max_value=2 ** 31))
@settings(max_examples=40, deadline=None)
def test_index_of_partition_bounds(g, seed):
    rng = np.random.default_rng(seed)
    k = rng.integers(1, g.n + 1)
    perm = rng.permutation(g.n)
    size = g.n // k
    if size == 0:
        return
    classes = [np.sort(perm[i * size:(i + 1) * size]) for i in range(k)]
    p = Partition(classes, np.sort(perm[k * size:]), 0.05)
    ind = index_of_partition(g, p)
    assert 0.0 <= ind <= 0.5


@given(spectra(), spectra())
@settings(max_examples=60, deadline=None)
def test_spectral_distance_symmetric_and_nonnegative(s1, s2):
    d = spectral_distance(s1, s2)
    assert d >= 0.0
    assert d == spectral_distance(s2, s1)


@given(spectra())
@settings(max_examples=30, deadline=None)
def test_spectral_distance_identity(s):
    assert spectral_distance(s, s) == 0.0


@given(st.lists(st.sampled_from("abcdef"), min_size=1, max_size=6,
                unique=True),
       st.sets(st.sampled_from("abcdef"), min_size=1, max_size=6))
@settings(max_examples=60, deadline=None)
def test_ap_at_k_monotone_in_k(ranking, relevant):
    scores = [ap_at_k(ranking, relevant, k)
              for k in range(1, len(ranking) + 1)]
    for a, b in zip(scores, scores[1:]):
        assert b >= a - 1e-12
    assert all(0.0 <= s <= 1.0 for s in scores)


@given(graphs())
@settings(max_examples=30, deadline=None)
def test_spectrum_sum_matches_laplacian_trace(g):
    s = laplacian_spectrum(g)
    assert abs(s.sum() - g.degrees().sum()) < 1e-6


@given(st.integers(min_value=0, max_value=2 ** 31))
@settings(max_examples=15, deadline=None)
def test_refinement_preserves_partition_invariants(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(16, 64))
    A = np.triu((rng.random((n, n)) < rng.random()) * 1.0, 1)
    g = Graph(A + A.T)
    cfg = SummarizationConfig(epsilon=0.05, rng_seed=seed % 1000)
    p = initial_partition(g, cfg)
    verdicts = pair_verdicts(g, p, cfg.epsilon)
    q = refine_partition(g, p, verdicts, cfg)
    q.validate(n)
    assert q.k == 2 * p.k
    assert q.class_size >= 1
