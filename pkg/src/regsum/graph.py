"""Undirected weighted graph container and pairwise density statistics.

Weights live in [0, 1]; an unweighted edge is an edge of weight 1.  A graph
is immutable after construction and all operations here are pure reads, so
they are safe to evaluate concurrently.

Density conventions
-------------------
``edge_density(g, a, b)`` is the cross weight mass divided by ``|a|*|b|``.
``internal_density(g, a)`` divides by ``|a| ** 2`` while counting each
unordered internal edge once, so a clique of size c has internal density
``c*(c-1)/2 / c**2``, which never reaches 1.  This deliberately follows the
formula used by the refinement heuristic rather than the combinatorial
maximum.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import PreconditionError

# Vertex classes are plain index arrays; order matters for deterministic
# tie-breaking in the refinement heuristic.
VertexClass = np.ndarray

DENSE_THRESHOLD = 20_000


def as_vertex_class(members: Iterable[int], n: int | None = None) -> VertexClass:
    """Normalize an iterable of vertex indices into a validated index array."""
    idx = np.asarray(list(members) if not isinstance(members, np.ndarray) else members,
                     dtype=np.int64)
    if idx.ndim != 1:
        raise PreconditionError("vertex class must be one-dimensional")
    if idx.size != np.unique(idx).size:
        raise PreconditionError("vertex class members must be distinct")
    if n is not None and idx.size and (idx.min() < 0 or idx.max() >= n):
        raise PreconditionError(f"vertex index out of range [0, {n})")
    return idx


class Graph:
    """Immutable undirected weighted graph without self-loops.

    Parameters
    ----------
    adjacency : array-like or sparse matrix, shape (n, n)
        Symmetric weight matrix with zero diagonal and entries in [0, 1].
    dense_threshold : int
        Graphs with at most this many vertices keep a dense ndarray view;
        larger graphs expose only the sparse view.
    """

    def __init__(self, adjacency, dense_threshold: int = DENSE_THRESHOLD,
                 validate: bool = True):
        if sp.issparse(adjacency):
            A = adjacency.tocsr().astype(np.float64)
        else:
            A = np.asarray(adjacency, dtype=np.float64)
        if A.shape[0] != A.shape[1]:
            raise PreconditionError("adjacency must be square")
        self.n = int(A.shape[0])
        self._dense_threshold = int(dense_threshold)
        if validate:
            self._validate(A)
        if sp.issparse(A):
            self._sparse = A
            self._dense = A.toarray() if self.n <= self._dense_threshold else None
        else:
            self._dense = A if self.n <= self._dense_threshold else None
            self._sparse = sp.csr_matrix(A)
        self._sparse.eliminate_zeros()
        self._degrees = np.asarray(self._sparse.sum(axis=1)).ravel()

    @staticmethod
    def _validate(A) -> None:
        if sp.issparse(A):
            if (abs(A - A.T) > 1e-12).nnz:
                raise PreconditionError("adjacency must be symmetric")
            d = A.diagonal()
            vals = A.data
        else:
            if not np.allclose(A, A.T):
                raise PreconditionError("adjacency must be symmetric")
            d = np.diagonal(A)
            vals = A
        if np.any(d != 0):
            raise PreconditionError("self-loops are not allowed")
        if vals.size and (np.min(vals) < 0 or np.max(vals) > 1):
            raise PreconditionError("weights must lie in [0, 1]")

    # -- read-only views ---------------------------------------------------

    def dense(self) -> np.ndarray:
        """Dense adjacency view; only available below the dense threshold."""
        if self._dense is None:
            raise PreconditionError(
                f"graph with n={self.n} exceeds the dense threshold "
                f"{self._dense_threshold}")
        return self._dense

    def sparse(self) -> sp.csr_matrix:
        return self._sparse

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if self._dense is not None:
            return self._dense[np.ix_(rows, cols)]
        return self._sparse[rows][:, cols].toarray()

    def degrees(self) -> np.ndarray:
        """Weighted degree of every vertex."""
        return self._degrees

    def neighbors(self, i: int) -> np.ndarray:
        row = self._sparse.getrow(i)
        return row.indices.astype(np.int64)

    def total_weight(self) -> float:
        """Sum of edge weights, each unordered edge counted once."""
        return float(self._sparse.sum()) / 2.0

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        if self.n != other.n:
            return False
        return (abs(self._sparse - other._sparse) > 0).nnz == 0

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self._sparse.nnz // 2})"

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple], **kwargs) -> "Graph":
        """Build a graph from (u, v) or (u, v, w) tuples."""
        rows, cols, vals = [], [], []
        for e in edges:
            u, v = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            if u == v:
                continue
            rows += [u, v]
            cols += [v, u]
            vals += [w, w]
        A = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
        # duplicate edges keep the last weight seen rather than summing
        A.sum_duplicates()
        counts = sp.csr_matrix((np.ones(len(vals)), (rows, cols)), shape=(n, n))
        counts.sum_duplicates()
        A.data = A.data / counts.data
        return cls(A, **kwargs)


# -- edge-list text format -------------------------------------------------


def read_edge_list(path) -> tuple[Graph, list[str]]:
    """Read the "u v [w]" text format.

    Vertex IDs are arbitrary tokens mapped to dense indices in first-seen
    order; the token list is returned so outputs can be mapped back.
    A leading "# n=<count>" comment pins the vertex count instead: tokens
    are then read as integer indices in [0, count), which preserves
    isolated vertices across a write/read round trip.
    """
    ids: dict[str, int] = {}
    edges = []
    declared_n = None
    first = True
    with open(path) as fh:
        for line in fh:
            raw = line.strip()
            if first and raw.startswith("# n="):
                declared_n = int(raw[4:])
            first = False
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) < 2:
                raise PreconditionError(f"malformed edge line: {line!r}")
            if declared_n is None:
                u = ids.setdefault(parts[0], len(ids))
                v = ids.setdefault(parts[1], len(ids))
            else:
                u, v = int(parts[0]), int(parts[1])
                if not (0 <= u < declared_n and 0 <= v < declared_n):
                    raise PreconditionError(
                        f"vertex index out of declared range: {line!r}")
            w = float(parts[2]) if len(parts) > 2 else 1.0
            edges.append((u, v, w))
    n = declared_n if declared_n is not None else len(ids)
    tokens = [str(i) for i in range(n)] if declared_n is not None else list(ids)
    g = Graph.from_edges(n, edges)
    return g, tokens


def write_edge_list(g: Graph, path, ids: Sequence[str] | None = None,
                    declare_n: bool = False) -> None:
    """Write the "u v [w]" text format; declare_n emits a "# n=" header so
    isolated vertices survive the round trip."""
    A = g.sparse().tocoo()
    with open(path, "w") as fh:
        if declare_n:
            fh.write(f"# n={g.n}\n")
        for u, v, w in zip(A.row, A.col, A.data):
            if u >= v:
                continue
            su = ids[u] if ids is not None else str(u)
            sv = ids[v] if ids is not None else str(v)
            if w == 1.0:
                fh.write(f"{su} {sv}\n")
            else:
                fh.write(f"{su} {sv} {float(w)!r}\n")


# -- pairwise statistics ---------------------------------------------------


def _check_pair(g: Graph, a: VertexClass, b: VertexClass) -> tuple[VertexClass, VertexClass]:
    a = as_vertex_class(a, g.n)
    b = as_vertex_class(b, g.n)
    if a.size == 0 or b.size == 0:
        raise PreconditionError("vertex classes must be non-empty")
    if np.intersect1d(a, b).size:
        raise PreconditionError("vertex classes must be disjoint")
    return a, b


def edge_density(g: Graph, a: VertexClass, b: VertexClass) -> float:
    """Cross weight mass between two disjoint classes over |a|*|b|."""
    a, b = _check_pair(g, a, b)
    return float(g.submatrix(a, b).sum()) / (a.size * b.size)


def internal_density(g: Graph, a: VertexClass) -> float:
    """Internal weight mass of a class over |a|**2, unordered edges once."""
    a = as_vertex_class(a, g.n)
    if a.size == 0:
        raise PreconditionError("vertex class must be non-empty")
    return float(g.submatrix(a, a).sum()) / 2.0 / (a.size ** 2)


def bipartite_degrees(g: Graph, a: VertexClass, b: VertexClass) -> tuple[dict, float]:
    """Cross-edge degree of every vertex of the pair and the average degree.

    The average is the total cross degree over 2*|a|, matching the equal
    class sizes required by the regularity check.
    """
    a, b = _check_pair(g, a, b)
    if a.size != b.size:
        raise PreconditionError("classes must have equal size")
    cross = g.submatrix(a, b)
    deg_a = cross.sum(axis=1)
    deg_b = cross.sum(axis=0)
    d_bar = float(deg_a.sum() + deg_b.sum()) / (2 * a.size)
    degs = {int(v): float(d) for v, d in zip(a, deg_a)}
    degs.update({int(v): float(d) for v, d in zip(b, deg_b)})
    return degs, d_bar


def neighbourhood_deviation(g: Graph, a: VertexClass, b: VertexClass,
                            y1: int, y2: int) -> float:
    """Shared-neighbourhood excess of y1, y2 in b over the random baseline.

    Neighbourhoods are taken within ``a``; for weighted graphs the shared
    count generalizes to the inner product of the two weight rows.
    """
    a, b = _check_pair(g, a, b)
    if y1 == y2:
        raise PreconditionError("y1 and y2 must be distinct")
    if y1 not in b or y2 not in b:
        raise PreconditionError("y1 and y2 must belong to b")
    _, d_bar = bipartite_degrees(g, a, b)
    r1 = g.submatrix([y1], a).ravel()
    r2 = g.submatrix([y2], a).ravel()
    return float(r1 @ r2) - d_bar ** 2 / a.size
