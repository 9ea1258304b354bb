"""Synthetic benchmark graphs: noisy cliques, random graphs, planted
partitions.

All generators are deterministic functions of their spec and seed, so
independent instances can be produced concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import PreconditionError
from .graph import Graph

BACKGROUND = -1


@dataclass(frozen=True)
class NoisyCliqueSpec:
    """Union of cliques corrupted by inter- and intra-cluster noise."""
    n: int
    num_c: int
    eta1: float
    eta2: float
    seed: int = 0

    def __post_init__(self):
        if self.num_c < 1 or self.n // self.num_c < 2:
            raise PreconditionError("cluster size must be at least 2")
        for p in (self.eta1, self.eta2):
            if not 0.0 <= p <= 1.0:
                raise PreconditionError("noise probabilities must lie in [0, 1]")


@dataclass(frozen=True)
class PlantedPartitionSpec:
    """Two equal communities, within-rate a/n and cross-rate b/n."""
    n: int
    a: float
    b: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise PreconditionError("n must be even and at least 2")
        if self.a < 0 or self.b < 0:
            raise PreconditionError("rates must be nonnegative")
        if self.a > self.n or self.b > self.n:
            raise PreconditionError("edge probabilities a/n, b/n must be <= 1")


def _symmetric_bernoulli(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Upper-triangle iid Bernoulli(p), mirrored; zero diagonal."""
    upper = np.triu(rng.random((n, n)) < p, k=1)
    return (upper | upper.T).astype(np.float64)


def erdos_renyi(n: int, p: float, seed: int = 0) -> Graph:
    """Random graph with each unordered pair an edge with probability p."""
    if not 0.0 <= p <= 1.0:
        raise PreconditionError("edge probability must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    return Graph(_symmetric_bernoulli(n, p, rng), validate=False)


def synth_graph_gen(spec: NoisyCliqueSpec) -> tuple[Graph, Graph, np.ndarray]:
    """Noisy-clique benchmark graph with its clean ground truth.

    Starts from a random background with edge probability eta1, carves
    num_c contiguous clusters of size n // num_c, makes each cluster
    complete, then drops each intra-cluster edge independently with
    probability eta2.  The ground truth is the clean union of cliques.
    Remainder vertices (when num_c does not divide n) stay background
    noise with label -1.
    """
    n, c = spec.n, spec.n // spec.num_c
    rng = np.random.default_rng(spec.seed)
    A = _symmetric_bernoulli(n, spec.eta1, rng)
    GT = np.zeros((n, n))
    labels = np.full(n, BACKGROUND, dtype=np.int64)
    for i in range(spec.num_c):
        block = np.arange(i * c, (i + 1) * c)
        labels[block] = i
        keep = np.triu(rng.random((c, c)) >= spec.eta2, k=1)
        keep = (keep | keep.T).astype(np.float64)
        A[np.ix_(block, block)] = keep
        GT[np.ix_(block, block)] = 1.0
        GT[block, block] = 0.0
    return Graph(A, validate=False), Graph(GT, validate=False), labels


def planted_partition(spec: PlantedPartitionSpec) -> tuple[Graph, np.ndarray]:
    """Two-community random graph; labels are 0 for the first half, 1 for
    the second."""
    n = spec.n
    half = n // 2
    rng = np.random.default_rng(spec.seed)
    p_in, p_out = spec.a / n, spec.b / n
    labels = np.repeat([0, 1], half)
    if n <= 4000:
        same = labels[:, None] == labels[None, :]
        probs = np.where(same, p_in, p_out)
        upper = np.triu(rng.random((n, n)) < probs, k=1)
        A = (upper | upper.T).astype(np.float64)
        return Graph(A, validate=False), labels

    # sparse sampling path for large n: draw edge counts per block
    rows, cols = [], []
    for (lo1, lo2, p) in ((0, 0, p_in), (half, half, p_in), (0, half, p_out)):
        if p <= 0:
            continue
        if lo1 == lo2:
            i_u, j_u = np.triu_indices(half, k=1)
            mask = rng.random(i_u.size) < p
            rows.append(i_u[mask] + lo1)
            cols.append(j_u[mask] + lo2)
        else:
            mask = rng.random((half, half)) < p
            i_c, j_c = np.nonzero(mask)
            rows.append(i_c + lo1)
            cols.append(j_c + lo2)
    r = np.concatenate(rows)
    q = np.concatenate(cols)
    data = np.ones(2 * r.size)
    A = sp.csr_matrix((data, (np.concatenate([r, q]), np.concatenate([q, r]))),
                      shape=(n, n))
    # keep large sparse instances sparse; a dense mirror would dominate memory
    return Graph(A, dense_threshold=0, validate=False), labels


def kesten_stigum_detectable(a: float, b: float) -> bool:
    """True iff (a - b)**2 strictly exceeds 2 (a + b)."""
    if a < 0 or b < 0:
        raise PreconditionError("rates must be nonnegative")
    return (a - b) ** 2 > 2.0 * (a + b)
