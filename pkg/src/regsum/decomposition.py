"""Block decomposition of shortest-path distance matrices.

Targets are grouped by alternating two steps: average the reference-to-
target distances within each group, then reassign every target to the
group whose averages explain its distances best under a Poisson
log-likelihood cost.  Multiple seeded restarts keep the minimum-cost fit.

Per-reference distance sweeps and restarts are independent and safe to
run concurrently; within one restart the two steps alternate
sequentially.  Everything is deterministic per seed.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse.csgraph as csgraph
from scipy.optimize import brentq

from .errors import (DegenerateFit, EmptyGroup, PreconditionError,
                     Unreachable)
from .graph import Graph


@dataclass(frozen=True)
class DistanceMatrix:
    """Hop counts from m reference vertices to n target vertices."""
    values: np.ndarray
    reference_ids: np.ndarray
    target_ids: np.ndarray

    def __post_init__(self):
        m, n = self.values.shape
        if self.reference_ids.size != m or self.target_ids.size != n:
            raise PreconditionError("id lists must match matrix shape")
        if self.values.size and self.values.min() < 0:
            raise PreconditionError("distances must be nonnegative")

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass(frozen=True)
class PartitionMatrix:
    """Group membership of every target; all k groups non-empty."""
    labels: np.ndarray
    k: int

    def __post_init__(self):
        if self.labels.size and (self.labels.min() < 0
                                 or self.labels.max() >= self.k):
            raise PreconditionError("labels must lie in [0, k)")

    def matrix(self) -> np.ndarray:
        R = np.zeros((self.labels.size, self.k))
        R[np.arange(self.labels.size), self.labels] = 1.0
        return R


@dataclass(frozen=True)
class RestartRecord:
    """Cost after every full iteration of one restart, plus the iteration
    numbers at which an emptied group had to be re-seeded."""
    costs: list[float]
    reseeds: list[int]


@dataclass(frozen=True)
class BlockDistanceModel:
    """Fitted group-average distances and total cost."""
    lam: np.ndarray
    cost: float
    history: list[RestartRecord] = field(default_factory=list)


# -- distance matrices -----------------------------------------------------


def largest_component(g: Graph) -> np.ndarray:
    """Vertex indices of the largest connected component, sorted."""
    ncomp, comp = csgraph.connected_components(g.sparse(), directed=False)
    best = np.bincount(comp).argmax()
    return np.flatnonzero(comp == best)


def distance_matrix(g: Graph, refs, targets) -> DistanceMatrix:
    """Exact hop distances from every reference to every target.

    One breadth-first sweep per reference.  Any unreachable pair violates
    the connectivity precondition and raises Unreachable; restrict to
    largest_component(g) first for graphs that may be disconnected.
    """
    refs = np.asarray(refs, dtype=np.int64)
    targets = np.asarray(targets, dtype=np.int64)
    if refs.size == 0 or targets.size == 0:
        raise PreconditionError("refs and targets must be non-empty")
    dist = csgraph.dijkstra(g.sparse(), directed=False, unweighted=True,
                            indices=refs)
    sub = dist[:, targets]
    if np.isinf(sub).any():
        raise Unreachable("some reference-target pair is disconnected")
    return DistanceMatrix(sub.astype(np.int32), refs, targets)


def sample_references(g: Graph, scheme: str, size: int, seed: int = 0) -> np.ndarray:
    """Reference vertices by scheme: 'uniform' draws `size` distinct
    vertices of the largest component; 'path_cover' samples `size` vertex
    pairs and collects every vertex on one shortest path per pair."""
    comp = largest_component(g)
    rng = np.random.default_rng(seed)
    if scheme == "uniform":
        if size > comp.size:
            raise PreconditionError("cannot sample more references than "
                                    "component vertices")
        return np.sort(rng.choice(comp, size=size, replace=False))
    if scheme == "path_cover":
        dist, pred = csgraph.dijkstra(g.sparse(), directed=False,
                                      unweighted=True,
                                      indices=comp, return_predecessors=True)
        pos = {int(v): i for i, v in enumerate(comp)}
        chosen: set[int] = set()
        for _ in range(size):
            u, v = rng.choice(comp, size=2, replace=False)
            cur = int(v)
            while cur >= 0:
                chosen.add(cur)
                if cur == int(u):
                    break
                cur = int(pred[pos[int(u)], cur])
        return np.sort(np.fromiter(chosen, dtype=np.int64))
    raise PreconditionError(f"unknown sampling scheme: {scheme!r}")


# -- binary cache ----------------------------------------------------------

_MAGIC = b"RSDM"


def write_distance_cache(d: DistanceMatrix, path) -> None:
    """Row-major int32 dump with a (magic, m, n) header."""
    m, n = d.shape
    with open(path, "wb") as fh:
        fh.write(_MAGIC + struct.pack("<II", m, n))
        fh.write(d.reference_ids.astype(np.int64).tobytes())
        fh.write(d.target_ids.astype(np.int64).tobytes())
        fh.write(np.ascontiguousarray(d.values, dtype=np.int32).tobytes())


def read_distance_cache(path) -> DistanceMatrix:
    with open(path, "rb") as fh:
        head = fh.read(12)
        if len(head) != 12 or head[:4] != _MAGIC:
            raise PreconditionError("not a distance cache file")
        m, n = struct.unpack("<II", head[4:])
        refs = np.frombuffer(fh.read(8 * m), dtype=np.int64)
        targets = np.frombuffer(fh.read(8 * n), dtype=np.int64)
        vals = np.frombuffer(fh.read(4 * m * n), dtype=np.int32).reshape(m, n)
    return DistanceMatrix(vals.copy(), refs.copy(), targets.copy())


# -- Poisson block fitting -------------------------------------------------


def _floor_value(n_targets: int) -> float:
    return 1.0 / (2.0 * n_targets)


def lambda_hat(d: DistanceMatrix, r: PartitionMatrix) -> np.ndarray:
    """Average distance from every reference to every group, with zero
    entries floored to a small positive value so logarithms stay finite."""
    counts = np.bincount(r.labels, minlength=r.k)
    if (counts == 0).any():
        raise EmptyGroup(f"groups {np.flatnonzero(counts == 0).tolist()} "
                         "have no members")
    D = d.values.astype(np.float64)
    sums = np.zeros((D.shape[0], r.k))
    for v in range(r.k):
        sums[:, v] = D[:, r.labels == v].sum(axis=1)
    lam = sums / counts
    lam[lam <= 0.0] = _floor_value(d.target_ids.size)
    return lam


def _all_costs(D: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Cost of assigning each target to each group; shape (n, k)."""
    log_lam = np.log(lam)
    return lam.sum(axis=0)[None, :] - D.T @ log_lam


def node_cost(d: DistanceMatrix, lam: np.ndarray, j: int, v: int) -> float:
    """Cost of placing target j in group v."""
    col = d.values[:, j].astype(np.float64)
    return float((lam[:, v] - col * np.log(lam[:, v])).sum())


def total_cost(d: DistanceMatrix, r: PartitionMatrix,
               lam: np.ndarray | None = None) -> float:
    if lam is None:
        lam = lambda_hat(d, r)
    costs = _all_costs(d.values.astype(np.float64), lam)
    return float(costs[np.arange(r.labels.size), r.labels].sum())


def _random_labels(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    for _ in range(100):
        z = rng.integers(0, k, size=n)
        if np.bincount(z, minlength=k).min() > 0:
            return z
    raise DegenerateFit("could not draw an initial partition with all "
                        "groups non-empty")


def regular_decomposition(d: DistanceMatrix, k: int, s_max: int = 20,
                          t_max: int = 50, seed: int = 0
                          ) -> tuple[PartitionMatrix, BlockDistanceModel]:
    """Alternating minimization of the Poisson distance cost.

    Each restart alternates group averaging and greedy reassignment until
    the labels stop changing or t_max iterations pass; the minimum-cost
    restart wins.  If a group empties mid-iteration it is re-seeded with
    the currently worst-explained target and the event is logged in the
    fit history (cost monotonicity is not guaranteed across a re-seed).
    """
    m, n = d.shape
    if not 1 <= k <= n:
        raise PreconditionError(f"k must lie in [1, {n}]")
    if s_max < 1 or t_max < 1:
        raise PreconditionError("s_max and t_max must be positive")
    D = d.values.astype(np.float64)
    rng = np.random.default_rng(seed)

    best_z, best_lam, best_cost = None, None, np.inf
    history: list[RestartRecord] = []
    for _ in range(s_max):
        z = _random_labels(n, k, rng)
        costs_curve: list[float] = []
        reseeds: list[int] = []
        lam = None
        for t in range(t_max):
            lam = lambda_hat(d, PartitionMatrix(z, k))
            costs = _all_costs(D, lam)
            z_new = costs.argmin(axis=1)
            counts = np.bincount(z_new, minlength=k)
            for empty in np.flatnonzero(counts == 0):
                donors = np.flatnonzero(np.bincount(z_new, minlength=k)[z_new] > 1)
                worst = donors[np.argmax(costs[donors, z_new[donors]])]
                z_new[worst] = empty
                reseeds.append(t)
            costs_curve.append(
                float(costs[np.arange(n), z_new].sum()))
            if np.array_equal(z_new, z):
                z = z_new
                break
            z = z_new
        lam = lambda_hat(d, PartitionMatrix(z, k))
        final = total_cost(d, PartitionMatrix(z, k), lam)
        history.append(RestartRecord(costs_curve, reseeds))
        if final < best_cost - 1e-12:
            best_z, best_lam, best_cost = z, lam, final
    if best_z is None:
        raise DegenerateFit("all restarts failed")
    return (PartitionMatrix(best_z, k),
            BlockDistanceModel(best_lam, best_cost, history))


def classify_out_of_sample(g: Graph, model: BlockDistanceModel, refs,
                           i: int) -> int:
    """Group of a vertex not seen during fitting, from its distances to
    the reference vertices; ties go to the lowest group index."""
    refs = np.asarray(refs, dtype=np.int64)
    dist = csgraph.dijkstra(g.sparse(), directed=False, unweighted=True,
                            indices=[i]).ravel()[refs]
    if np.isinf(dist).any():
        raise Unreachable(f"vertex {i} cannot reach every reference")
    costs = model.lam.sum(axis=0) - dist @ np.log(model.lam)
    return int(costs.argmin())


def estimate_k(d: DistanceMatrix, k_max: int, s_max: int = 20,
               t_max: int = 50, seed: int = 0, ratio: float = 0.01
               ) -> tuple[int, np.ndarray]:
    """Group count by the knee of the cost curve.

    Fits k = 1..k_max and returns the smallest k whose improvement toward
    k+1, relative to the total drop from k = 1, falls below `ratio`;
    k_max if the curve never flattens.
    """
    if k_max < 1:
        raise PreconditionError("k_max must be positive")
    curve = np.empty(k_max)
    for k in range(1, k_max + 1):
        _, model = regular_decomposition(d, k, s_max, t_max, seed + k)
        curve[k - 1] = model.cost
    k_star = k_max
    for k in range(1, k_max):
        gain = curve[k - 1] - curve[k]
        total = curve[0] - curve[k] + 1e-12
        if gain / total < ratio:
            k_star = k
            break
    return k_star, curve


def expected_planted_distances(n: int, a: float, b: float
                               ) -> tuple[float, float]:
    """Predicted mean intra- and inter-community hop distances of a
    two-community random graph, from root-solving the branching
    approximation; d1 (intra) is the smaller of the two."""
    if not a > b > 0:
        raise PreconditionError("need a > b > 0")
    lam1, lam2 = (a + b) / 2.0, (a - b) / 2.0
    if lam1 <= 1.0:
        raise PreconditionError("mean offspring (a + b)/2 must exceed 1")

    def equation(dd, sign):
        t1 = lam1 ** (dd + 1) / (lam1 - 1.0)
        t2 = lam2 ** (dd + 1) / (lam2 - 1.0) if lam2 != 1.0 else dd + 1.0
        return t1 + sign * t2 - 2.0 - n

    hi = 10.0 * np.log(n)
    out = []
    for sign in (+1.0, -1.0):
        if equation(0.0, sign) * equation(hi, sign) > 0:
            raise PreconditionError("no bracketing root in [0, 10 log n]")
        out.append(float(brentq(lambda dd: equation(dd, sign), 0.0, hi)))
    d1, d2 = out
    return d1, d2


def expand_groups_by_neighbors(g: Graph, r: PartitionMatrix, targets
                               ) -> np.ndarray:
    """One-hop label propagation from classified targets.

    Returns a length-n label vector with -1 for still-unlabeled vertices.
    Classified vertices keep their group; an unlabeled neighbor of several
    groups takes the lowest group index.
    """
    targets = np.asarray(targets, dtype=np.int64)
    if targets.size != r.labels.size:
        raise PreconditionError("one label per target required")
    out = np.full(g.n, -1, dtype=np.int64)
    out[targets] = r.labels
    A = g.sparse()
    unlabeled = np.flatnonzero(out == -1)
    for u in unlabeled:
        nbr = A.indices[A.indptr[u]:A.indptr[u + 1]]
        groups = out[nbr]
        groups = groups[groups >= 0]
        if groups.size:
            out[u] = groups.min()
    return out
