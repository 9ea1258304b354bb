"""Estimator-style wrappers over the functional core.

GraphSummarizer and RegularDecomposition follow the fit/transform and
fit/predict conventions so they compose with scikit-learn tooling
(get_params, set_params, clone).  They hold no logic of their own beyond
input validation and state bookkeeping.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .decomposition import (DistanceMatrix, PartitionMatrix,
                            classify_out_of_sample, distance_matrix,
                            regular_decomposition, sample_references)
from .errors import PreconditionError
from .graph import Graph
from .regularity import SummarizationConfig, pair_verdicts, summarize
from .summary import blow_up, build_reduced_graph


def _as_graph(X) -> Graph:
    if isinstance(X, Graph):
        return X
    return Graph(np.asarray(X, dtype=np.float64))


class GraphSummarizer(BaseEstimator):
    """Compress a graph into its reduced graph via regular partitioning.

    fit finds the best partition of the input graph; transform returns the
    reduced graph of a fitted instance, and inverse_transform blows it
    back up into a full adjacency matrix.

    Parameters mirror SummarizationConfig; d_prime defaults to epsilon.
    """

    def __init__(self, epsilon=0.05, c_min=0.0, max_iterations=20,
                 sparsify_threshold=0.5, rng_seed=0, initial_classes=4,
                 d_prime=None):
        self.epsilon = epsilon
        self.c_min = c_min
        self.max_iterations = max_iterations
        self.sparsify_threshold = sparsify_threshold
        self.rng_seed = rng_seed
        self.initial_classes = initial_classes
        self.d_prime = d_prime

    def _config(self) -> SummarizationConfig:
        return SummarizationConfig(
            epsilon=self.epsilon, c_min=self.c_min,
            max_iterations=self.max_iterations,
            sparsify_threshold=self.sparsify_threshold,
            rng_seed=self.rng_seed, initial_classes=self.initial_classes)

    def fit(self, X, y=None):
        g = _as_graph(X)
        cfg = self._config()
        self.partition_, self.trace_ = summarize(g, cfg)
        verdicts = pair_verdicts(g, self.partition_, cfg.epsilon)
        self.summary_ = build_reduced_graph(g, self.partition_, verdicts,
                                            self.d_prime)
        self.n_features_in_ = g.n
        return self

    def transform(self, X=None):
        self._check_fitted()
        return self.summary_

    def fit_transform(self, X, y=None):
        return self.fit(X).transform()

    def inverse_transform(self, X=None) -> np.ndarray:
        """Adjacency matrix of the blown-up summary, aligned to the
        original vertex indices (exceptional rows zero)."""
        self._check_fitted()
        return blow_up(self.summary_).dense()

    def _check_fitted(self):
        if not hasattr(self, "summary_"):
            raise PreconditionError("this GraphSummarizer is not fitted yet")


class RegularDecomposition(BaseEstimator):
    """Group graph vertices by block-fitting a sampled distance matrix.

    fit computes reference-to-target hop distances and fits the Poisson
    block model; labels_ holds the fitted groups and predict classifies
    arbitrary vertices from their distances to the references.
    """

    def __init__(self, n_groups=2, n_references=None, restarts=20,
                 max_iter=50, seed=0):
        self.n_groups = n_groups
        self.n_references = n_references
        self.restarts = restarts
        self.max_iter = max_iter
        self.seed = seed

    def fit(self, X, y=None):
        g = X if isinstance(X, Graph) else _as_graph(X)
        if self.n_references is None:
            from .decomposition import largest_component
            refs = largest_component(g)
        else:
            refs = sample_references(g, "uniform", self.n_references,
                                     self.seed)
        from .decomposition import largest_component
        targets = largest_component(g)
        self.distance_matrix_ = distance_matrix(g, refs, targets)
        self.partition_, self.model_ = regular_decomposition(
            self.distance_matrix_, self.n_groups, self.restarts,
            self.max_iter, self.seed)
        self.references_ = refs
        self.targets_ = targets
        self.labels_ = np.full(g.n, -1, dtype=np.int64)
        self.labels_[targets] = self.partition_.labels
        self._graph = g
        return self

    def predict(self, vertices) -> np.ndarray:
        self._check_fitted()
        vertices = np.asarray(vertices, dtype=np.int64)
        return np.asarray([
            classify_out_of_sample(self._graph, self.model_,
                                   self.references_, int(v))
            for v in vertices], dtype=np.int64)

    def fit_predict(self, X, y=None) -> np.ndarray:
        return self.fit(X).labels_

    def _check_fitted(self):
        if not hasattr(self, "model_"):
            raise PreconditionError(
                "this RegularDecomposition is not fitted yet")
