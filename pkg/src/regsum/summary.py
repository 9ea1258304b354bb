"""Reduced graphs, blow-up reconstruction, and reconstruction error.

A reduced graph compresses a partitioned graph into one weighted supernode
per class.  A superedge carries the inter-class density when the pair is
regular and dense enough, and 0 otherwise; the raw densities and the
regularity mask are kept so the thresholding rule can be re-applied.
Blow-up inverts the compression into constant-weight complete bipartite
blocks.  All operations are pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, PreconditionError
from .graph import Graph
from .regularity import PairVerdict, Partition, certifies_eps_irregularity


@dataclass(frozen=True)
class ReducedGraph:
    """Weighted summary of a partitioned graph.

    densities stores raw pairwise inter-class densities (diagonal holds
    internal densities for diagnostics); weights() applies the two-case
    thresholding rule.  class_members is optional and only needed to map
    a blow-up back onto original vertex ids.
    """
    class_sizes: np.ndarray
    densities: np.ndarray
    regular_mask: np.ndarray
    epsilon: float
    d_prime: float
    exceptional_count: int = 0
    class_members: list[np.ndarray] | None = None

    def __post_init__(self):
        k = len(self.class_sizes)
        if self.densities.shape != (k, k) or self.regular_mask.shape != (k, k):
            raise PreconditionError("densities and mask must be k x k")
        if not np.allclose(self.densities, self.densities.T):
            raise PreconditionError("densities must be symmetric")
        if self.densities.size and (self.densities.min() < 0
                                    or self.densities.max() > 1):
            raise PreconditionError("densities must lie in [0, 1]")

    @property
    def k(self) -> int:
        return len(self.class_sizes)

    def weights(self) -> np.ndarray:
        """Superedge weight matrix: density where regular and >= d_prime."""
        w = np.where(self.regular_mask & (self.densities >= self.d_prime),
                     self.densities, 0.0)
        np.fill_diagonal(w, 0.0)
        return w

    def as_graph(self) -> Graph:
        """The summary as a k-vertex weighted graph (for spectra)."""
        return Graph(self.weights())

    # -- JSON persistence --------------------------------------------------

    def to_json(self, n: int) -> str:
        doc = {
            "n": int(n),
            "epsilon": self.epsilon,
            "d_prime": self.d_prime,
            "class_sizes": [int(s) for s in self.class_sizes],
            "densities": self.densities.tolist(),
            "regular_mask": self.regular_mask.astype(int).tolist(),
            "exceptional_count": int(self.exceptional_count),
        }
        if self.class_members is not None:
            doc["class_members"] = [[int(v) for v in c]
                                    for c in self.class_members]
        return json.dumps(doc, sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, text: str) -> tuple["ReducedGraph", int]:
        doc = json.loads(text)
        members = doc.get("class_members")
        r = cls(
            class_sizes=np.asarray(doc["class_sizes"], dtype=np.int64),
            densities=np.asarray(doc["densities"], dtype=np.float64),
            regular_mask=np.asarray(doc["regular_mask"], dtype=bool),
            epsilon=float(doc["epsilon"]),
            d_prime=float(doc["d_prime"]),
            exceptional_count=int(doc["exceptional_count"]),
            class_members=[np.asarray(c, dtype=np.int64) for c in members]
            if members is not None else None,
        )
        return r, int(doc["n"])


def build_reduced_graph(g: Graph, p: Partition,
                        verdicts: dict[tuple[int, int], PairVerdict],
                        d_prime: float | None = None) -> ReducedGraph:
    """Summarize a partitioned graph into its reduced graph.

    d_prime defaults to the partition's epsilon.  Exceptional vertices are
    excluded from the summary; their count is recorded.

    A pair is masked as irregular only when its certificates witness
    irregularity at scale epsilon in the density sense
    (certifies_eps_irregularity); pairs flagged by the finer-scale
    regularity check but without such a witness keep their density.
    """
    if d_prime is None:
        d_prime = p.epsilon
    k = p.k
    dens = np.zeros((k, k))
    mask = np.zeros((k, k), dtype=bool)
    for i in range(k):
        ci = p.classes[i]
        dens[i, i] = g.submatrix(ci, ci).sum() / 2.0 / ci.size ** 2
        for j in range(i + 1, k):
            cj = p.classes[j]
            dens[i, j] = dens[j, i] = \
                g.submatrix(ci, cj).sum() / (ci.size * cj.size)
            mask[i, j] = mask[j, i] = not certifies_eps_irregularity(
                g, ci, cj, p.epsilon, verdicts[(i, j)])
    return ReducedGraph(
        class_sizes=np.asarray([c.size for c in p.classes], dtype=np.int64),
        densities=dens,
        regular_mask=mask,
        epsilon=p.epsilon,
        d_prime=d_prime,
        exceptional_count=int(p.exceptional.size),
        class_members=[c.copy() for c in p.classes],
    )


def blow_up(r: ReducedGraph, rng: np.random.Generator | None = None) -> Graph:
    """Expand a reduced graph back into a full graph.

    Every supernode becomes class_sizes[i] vertices; every nonzero
    superedge becomes a complete bipartite block of that constant weight.
    Diagonal blocks are zero.  When an rng is given, block entries are
    instead Bernoulli-sampled with the weight as probability, for
    consumers that need an unweighted graph.

    When the reduced graph carries class_members, blown-up vertices are
    placed at their original indices (over the original n, with
    exceptional rows left zero); otherwise classes are laid out
    contiguously.
    """
    sizes = r.class_sizes
    w = r.weights()
    if r.class_members is not None:
        # the partition covers all original vertices, so sizes plus the
        # exceptional count recover n even when the highest-index vertex
        # is exceptional
        n = max(max((int(c.max()) for c in r.class_members if c.size),
                    default=-1) + 1,
                int(sizes.sum()) + r.exceptional_count)
        slots = [np.asarray(c) for c in r.class_members]
    else:
        offsets = np.concatenate([[0], np.cumsum(sizes)])
        n = int(offsets[-1])
        slots = [np.arange(offsets[i], offsets[i + 1]) for i in range(r.k)]
    A = np.zeros((n, n))
    for i in range(r.k):
        for j in range(i + 1, r.k):
            if w[i, j] == 0.0:
                continue
            if rng is None:
                block = np.full((sizes[i], sizes[j]), w[i, j])
            else:
                block = (rng.random((sizes[i], sizes[j])) < w[i, j]) * 1.0
            A[np.ix_(slots[i], slots[j])] = block
            A[np.ix_(slots[j], slots[i])] = block.T
    return Graph(A, validate=False)


def reconstruction_error(a: Graph, b: Graph, p: float = 2.0,
                         restrict: np.ndarray | None = None) -> float:
    """Entrywise l_p distance between two adjacency matrices.

    Sums |A(i,j) - B(i,j)|**p over all ordered pairs, then takes the 1/p
    power.  With restrict, only the induced submatrix on those vertices is
    compared (used when exceptional vertices were dropped from a summary).
    """
    if a.n != b.n:
        raise DimensionMismatch(f"vertex counts differ: {a.n} != {b.n}")
    if p <= 0:
        raise PreconditionError("norm order must be positive")
    if restrict is not None:
        da = a.submatrix(restrict, restrict)
        db = b.submatrix(restrict, restrict)
    else:
        da, db = a.dense(), b.dense()
    return float((np.abs(da - db) ** p).sum() ** (1.0 / p))
