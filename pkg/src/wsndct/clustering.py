"""Partition a deployment into clusters with one head each.

Two partitioners are provided: single-round LEACH election (every node becomes
a head with probability ``n_c / N``, the rest join the nearest head) and Lloyd
K-means with the member closest to each centroid promoted to head.
"""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, rng
from .deployment import Deployment
from .errors import ElectionFailure, InvalidArgument

MAX_ELECTION_REDRAWS = 64


class Algorithm(str, enum.Enum):
    KMEANS = "kmeans"
    LEACH = "leach"


@dataclass(frozen=True, eq=False)
class Cluster:
    head: int
    members: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(sorted(int(i) for i in self.members), dtype=np.int64)
        m.setflags(write=False)
        object.__setattr__(self, "members", m)
        if m.size == 0 or self.head not in m:
            raise InvalidArgument("a cluster needs at least one member and must contain its head")

    @property
    def size(self) -> int:
        return int(self.members.size)


@dataclass(frozen=True, eq=False)
class ClusterSet:
    """Clusters ordered by ascending head id.

    ``labels[node]`` is the index of the node's cluster in ``clusters``.
    ``centroids`` is only set by K-means.
    """

    clusters: tuple[Cluster, ...]
    algorithm: Algorithm
    seed: int
    labels: np.ndarray = field(repr=False)
    centroids: np.ndarray | None = field(default=None, repr=False)
    iterations: int = 0

    @property
    def n_clusters(self) -> int:
        return len(self.clusters)

    @property
    def heads(self) -> np.ndarray:
        return np.array([c.head for c in self.clusters], dtype=np.int64)

    @property
    def sizes(self) -> np.ndarray:
        return np.array([c.size for c in self.clusters], dtype=np.int64)


def _build(labels: np.ndarray, heads: np.ndarray, algorithm, seed, centroids=None, iterations=0) -> ClusterSet:
    # reorder clusters by head id so both algorithms share one layout
    order = np.argsort(heads, kind="stable")
    remap = np.empty_like(order)
    remap[order] = np.arange(order.size)
    labels = remap[labels]
    heads = heads[order]
    groups = np.split(np.argsort(labels, kind="stable"), np.cumsum(np.bincount(labels, minlength=heads.size))[:-1])
    clusters = tuple(Cluster(int(h), g) for h, g in zip(heads, groups))
    labels = labels.astype(np.int64)
    labels.setflags(write=False)
    if centroids is not None:
        centroids = np.array(centroids[order])
        centroids.setflags(write=False)
    return ClusterSet(clusters, Algorithm(algorithm), seed, labels, centroids, iterations)


def clusters_from_heads(dep: Deployment, heads, algorithm=Algorithm.LEACH, seed: int = 0) -> ClusterSet:
    """Every non-head joins the nearest head (ties go to the lower head id)."""
    heads = np.unique(np.asarray(heads, dtype=np.int64))
    if heads.size == 0:
        raise InvalidArgument("need at least one cluster head")
    if heads[0] < 0 or heads[-1] >= dep.n:
        raise InvalidArgument("head id out of range")
    labels, _ = _kernels.assign_nearest(dep.xy, dep.xy[heads])
    # a head always belongs to its own cluster, even if another head coincides with it
    labels[heads] = np.arange(heads.size)
    return _build(labels, heads, algorithm, seed)


def elect_heads(n: int, n_c: int, seed: int) -> np.ndarray:
    if not 1 <= n_c <= n:
        raise InvalidArgument(f"need 1 <= n_c <= N, got n_c={n_c}, N={n}")
    p = n_c / n
    for attempt in range(MAX_ELECTION_REDRAWS):
        u = rng.stream(seed, "leach-election", attempt).random(n)
        heads = np.flatnonzero(u < p)
        if heads.size:
            return heads
    raise ElectionFailure(f"no cluster head elected in {MAX_ELECTION_REDRAWS} draws (N={n}, n_c={n_c})")


def cluster_leach(dep: Deployment, n_c: int, seed: int) -> ClusterSet:
    heads = elect_heads(dep.n, n_c, seed)
    return clusters_from_heads(dep, heads, Algorithm.LEACH, seed)


def lloyd(points: np.ndarray, centroids: np.ndarray, max_iters: int = 300):
    """Lloyd iterations from the given starting centroids.

    Returns ``(centroids, labels, sq_dist, iterations, costs)`` where ``costs``
    holds the squared-error cost after each assignment step. Stops when an
    assignment repeats. An empty cluster gets its centroid moved onto the point
    currently farthest from its own centroid.
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    centroids = np.array(centroids, dtype=np.float64)
    k = centroids.shape[0]
    labels = None
    d2 = None
    costs: list[float] = []
    it = 0
    for it in range(1, max_iters + 1):
        new, d2 = _kernels.assign_nearest(points, centroids)
        counts = np.bincount(new, minlength=k)
        for _ in range(k):
            empty = np.flatnonzero(counts == 0)
            if empty.size == 0:
                break
            far = np.lexsort((np.arange(points.shape[0]), -d2))[: empty.size]
            centroids[empty] = points[far]
            new, d2 = _kernels.assign_nearest(points, centroids)
            counts = np.bincount(new, minlength=k)
        costs.append(float(d2.sum()))
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        sx = np.bincount(labels, weights=points[:, 0], minlength=k)
        sy = np.bincount(labels, weights=points[:, 1], minlength=k)
        centroids = np.column_stack((sx / counts, sy / counts))
    return centroids, labels, d2, it, costs


def cluster_kmeans(dep: Deployment, n_c: int, seed: int, max_iters: int = 300, n_init: int = 1) -> ClusterSet:
    """Lloyd K-means from ``n_init`` random starts, keeping the cheapest (earliest on ties).

    Each start uses ``n_c`` distinct nodes drawn without replacement.
    """
    if not 1 <= n_c <= dep.n:
        raise InvalidArgument(f"need 1 <= n_c <= N, got n_c={n_c}, N={dep.n}")
    if max_iters < 1 or n_init < 1:
        raise InvalidArgument("max_iters and n_init must be >= 1")
    best = None
    for start in range(n_init):
        init = rng.stream(seed, "kmeans-init", start).choice(dep.n, size=n_c, replace=False)
        run = lloyd(dep.xy, dep.xy[np.sort(init)], max_iters)
        if best is None or run[4][-1] < best[4][-1]:
            best = run
    centroids, labels, _, iterations, _ = best
    # head = member nearest its centroid, lower id on ties
    dx = dep.xy[:, 0] - centroids[labels, 0]
    dy = dep.xy[:, 1] - centroids[labels, 1]
    d2 = dx * dx + dy * dy
    order = np.lexsort((np.arange(dep.n), d2, labels))
    first = np.ones(dep.n, dtype=bool)
    first[1:] = labels[order][1:] != labels[order][:-1]
    heads = np.empty(n_c, dtype=np.int64)
    heads[labels[order][first]] = order[first]
    return _build(labels, heads, Algorithm.KMEANS, seed, centroids, iterations)


def cluster(dep: Deployment, algorithm, n_c: int, seed: int, max_iters: int = 300, n_init: int = 1) -> ClusterSet:
    algorithm = Algorithm(algorithm)
    if algorithm is Algorithm.KMEANS:
        return cluster_kmeans(dep, n_c, seed, max_iters, n_init)
    return cluster_leach(dep, n_c, seed)


def intra_cost(dep: Deployment, cs: ClusterSet, alpha: float = 2) -> float:
    """Sum over non-head nodes of ``dist(node, head) ** alpha``."""
    heads = cs.heads[cs.labels]
    dx = dep.xy[:, 0] - dep.xy[heads, 0]
    dy = dep.xy[:, 1] - dep.xy[heads, 1]
    d2 = dx * dx + dy * dy
    return float(np.sum(d2 if alpha == 2 else d2 ** (alpha / 2)))


def cluster_size_histogram(cs: ClusterSet, bin_width: int = 1) -> list[tuple[tuple[int, int], int]]:
    """``[((lo, hi), count), ...]`` over non-empty size bins ``[lo, hi]``."""
    if bin_width < 1:
        raise InvalidArgument("bin_width must be >= 1")
    bins, counts = np.unique(cs.sizes // bin_width, return_counts=True)
    return [((int(b) * bin_width, int(b) * bin_width + bin_width - 1), int(c)) for b, c in zip(bins, counts)]


def to_csv(cs: ClusterSet) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["node_id", "cluster_index", "is_head"])
    heads = set(cs.heads.tolist())
    for node, idx in enumerate(cs.labels):
        w.writerow([node, int(idx), int(node in heads)])
    return buf.getvalue()
