"""Hot inner loops: nearest-centre assignment and CH routing-tree growth.

Each kernel exists twice, a numba ``@njit`` version and a pure-numpy version.
Both evaluate squared distances as ``dx*dx + dy*dy`` in the same order, so the
two backends return bit-identical results. The backend bound to the public
names is picked at import time from ``WSNDCT_BACKEND`` (``use_backend``
switches it later):

    WSNDCT_BACKEND=numba   (default when numba is importable)
    WSNDCT_BACKEND=numpy   (always available)

Index conventions for the tree kernels: CHs are addressed by their position in
the input array; ``parent == -1`` is the BS, ``parent == -2`` marks an
unreachable CH (whose ``hops`` is 0).
"""
from __future__ import annotations

import os

import numpy as np

BS = -1
UNREACHABLE = -2

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False


def _select_backend() -> str:
    requested = os.environ.get("WSNDCT_BACKEND", "").strip().lower()
    if requested in ("", "auto"):
        return "numba" if HAVE_NUMBA else "numpy"
    if requested not in ("numba", "numpy"):
        raise ImportError(f"WSNDCT_BACKEND must be 'numba' or 'numpy', got {requested!r}")
    if requested == "numba" and not HAVE_NUMBA:
        raise ImportError("WSNDCT_BACKEND=numba but numba is not installed")
    return requested


# ---------------------------------------------------------------- numpy path


def assign_nearest_numpy(points, centers):
    """Label of the nearest centre for every point (ties -> lower centre index)."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    centers = np.ascontiguousarray(centers, dtype=np.float64)
    n = points.shape[0]
    labels = np.empty(n, dtype=np.int64)
    best = np.empty(n, dtype=np.float64)
    # chunk rows so the (n, m) distance block stays small
    step = max(1, 2_000_000 // max(1, centers.shape[0]))
    for lo in range(0, n, step):
        p = points[lo:lo + step]
        dx = p[:, 0, None] - centers[None, :, 0]
        dy = p[:, 1, None] - centers[None, :, 1]
        d2 = dx * dx + dy * dy
        idx = np.argmin(d2, axis=1)
        labels[lo:lo + step] = idx
        best[lo:lo + step] = d2[np.arange(p.shape[0]), idx]
    return labels, best


def _pairwise_d2(xy):
    dx = xy[:, 0, None] - xy[None, :, 0]
    dy = xy[:, 1, None] - xy[None, :, 1]
    return dx * dx + dy * dy


def _bs_d2(xy, bs):
    dx = xy[:, 0] - bs[0]
    dy = xy[:, 1] - bs[1]
    return dx * dx + dy * dy


def _tie_rank(bs_d2):
    # rank of each CH under the parent preference (closer to BS, then lower index)
    order = np.lexsort((np.arange(bs_d2.shape[0]), bs_d2))
    rank = np.empty_like(order)
    rank[order] = np.arange(order.shape[0])
    return order, rank


def bfs_tree_numpy(ch_xy, bs, range_r):
    ch_xy = np.ascontiguousarray(ch_xy, dtype=np.float64)
    bs = np.asarray(bs, dtype=np.float64)
    m = ch_xy.shape[0]
    r2 = range_r * range_r
    parent = np.full(m, UNREACHABLE, dtype=np.int64)
    hops = np.zeros(m, dtype=np.int64)
    if m == 0:
        return parent, hops
    bsd2 = _bs_d2(ch_xy, bs)
    adj = _pairwise_d2(ch_xy) <= r2
    np.fill_diagonal(adj, False)
    _, rank = _tie_rank(bsd2)

    layer = np.flatnonzero(bsd2 <= r2)
    parent[layer] = BS
    hops[layer] = 1
    visited = bsd2 <= r2
    h = 1
    while layer.size:
        touch = adj[:, layer]
        new = np.flatnonzero(~visited & touch.any(axis=1))
        if new.size == 0:
            break
        masked = np.where(touch[new], rank[layer][None, :], m)
        parent[new] = layer[np.argmin(masked, axis=1)]
        h += 1
        hops[new] = h
        visited[new] = True
        layer = new
    return parent, hops


def greedy_tree_numpy(ch_xy, bs, range_r):
    ch_xy = np.ascontiguousarray(ch_xy, dtype=np.float64)
    bs = np.asarray(bs, dtype=np.float64)
    m = ch_xy.shape[0]
    r2 = range_r * range_r
    parent = np.full(m, UNREACHABLE, dtype=np.int64)
    hops = np.zeros(m, dtype=np.int64)
    if m == 0:
        return parent, hops
    bsd2 = _bs_d2(ch_xy, bs)
    order, rank = _tie_rank(bsd2)
    connected = np.zeros(m, dtype=bool)
    for i in order:
        if bsd2[i] <= r2:
            parent[i] = BS
            hops[i] = 1
            connected[i] = True
            continue
        dx = ch_xy[:, 0] - ch_xy[i, 0]
        dy = ch_xy[:, 1] - ch_xy[i, 1]
        ok = connected & (dx * dx + dy * dy <= r2)
        if ok.any():
            cand = np.flatnonzero(ok)
            p = cand[np.argmin(rank[cand])]
            parent[i] = p
            hops[i] = hops[p] + 1
            connected[i] = True
    return parent, hops


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @numba.njit(cache=True, nogil=True)
    def assign_nearest_numba(points, centers):
        n = points.shape[0]
        m = centers.shape[0]
        labels = np.empty(n, dtype=np.int64)
        best = np.empty(n, dtype=np.float64)
        for i in range(n):
            px = points[i, 0]
            py = points[i, 1]
            bi = 0
            dx = px - centers[0, 0]
            dy = py - centers[0, 1]
            bd = dx * dx + dy * dy
            for j in range(1, m):
                dx = px - centers[j, 0]
                dy = py - centers[j, 1]
                d = dx * dx + dy * dy
                if d < bd:
                    bd = d
                    bi = j
            labels[i] = bi
            best[i] = bd
        return labels, best

    @numba.njit(cache=True, nogil=True)
    def _rank_numba(bsd2):
        m = bsd2.shape[0]
        order = np.argsort(bsd2, kind="mergesort")  # stable: ties keep lower index first
        rank = np.empty(m, dtype=np.int64)
        for r in range(m):
            rank[order[r]] = r
        return order, rank

    @numba.njit(cache=True, nogil=True)
    def bfs_tree_numba(ch_xy, bs, range_r):
        m = ch_xy.shape[0]
        r2 = range_r * range_r
        parent = np.full(m, UNREACHABLE, dtype=np.int64)
        hops = np.zeros(m, dtype=np.int64)
        if m == 0:
            return parent, hops
        bsd2 = np.empty(m, dtype=np.float64)
        for i in range(m):
            dx = ch_xy[i, 0] - bs[0]
            dy = ch_xy[i, 1] - bs[1]
            bsd2[i] = dx * dx + dy * dy
        order, rank = _rank_numba(bsd2)
        layer = np.empty(m, dtype=np.int64)
        n_layer = 0
        for i in range(m):
            if bsd2[i] <= r2:
                parent[i] = BS
                hops[i] = 1
                layer[n_layer] = i
                n_layer += 1
        nxt = np.empty(m, dtype=np.int64)
        h = 1
        while n_layer > 0:
            n_next = 0
            for v in range(m):
                if hops[v] != 0:
                    continue
                best = -1
                best_rank = m
                for t in range(n_layer):
                    u = layer[t]
                    if rank[u] >= best_rank:
                        continue
                    dx = ch_xy[u, 0] - ch_xy[v, 0]
                    dy = ch_xy[u, 1] - ch_xy[v, 1]
                    if dx * dx + dy * dy <= r2:
                        best = u
                        best_rank = rank[u]
                if best >= 0:
                    parent[v] = best
                    nxt[n_next] = v
                    n_next += 1
            h += 1
            for t in range(n_next):
                hops[nxt[t]] = h
                layer[t] = nxt[t]
            n_layer = n_next
        return parent, hops

    @numba.njit(cache=True, nogil=True)
    def greedy_tree_numba(ch_xy, bs, range_r):
        m = ch_xy.shape[0]
        r2 = range_r * range_r
        parent = np.full(m, UNREACHABLE, dtype=np.int64)
        hops = np.zeros(m, dtype=np.int64)
        if m == 0:
            return parent, hops
        bsd2 = np.empty(m, dtype=np.float64)
        for i in range(m):
            dx = ch_xy[i, 0] - bs[0]
            dy = ch_xy[i, 1] - bs[1]
            bsd2[i] = dx * dx + dy * dy
        order, rank = _rank_numba(bsd2)
        for r in range(m):
            i = order[r]
            if bsd2[i] <= r2:
                parent[i] = BS
                hops[i] = 1
                continue
            best = -1
            best_rank = m
            for j in range(m):
                if parent[j] == UNREACHABLE or rank[j] >= best_rank:
                    continue
                dx = ch_xy[j, 0] - ch_xy[i, 0]
                dy = ch_xy[j, 1] - ch_xy[i, 1]
                if dx * dx + dy * dy <= r2:
                    best = j
                    best_rank = rank[j]
            if best >= 0:
                parent[i] = best
                hops[i] = hops[best] + 1
        return parent, hops

else:  # pragma: no cover
    assign_nearest_numba = bfs_tree_numba = greedy_tree_numba = None


def _assign_nearest_jit(points, centers):
    return assign_nearest_numba(
        np.ascontiguousarray(points, dtype=np.float64),
        np.ascontiguousarray(centers, dtype=np.float64),
    )


def _bfs_tree_jit(ch_xy, bs, range_r):
    return bfs_tree_numba(
        np.ascontiguousarray(ch_xy, dtype=np.float64).reshape(-1, 2),
        np.asarray(bs, dtype=np.float64),
        float(range_r),
    )


def _greedy_tree_jit(ch_xy, bs, range_r):
    return greedy_tree_numba(
        np.ascontiguousarray(ch_xy, dtype=np.float64).reshape(-1, 2),
        np.asarray(bs, dtype=np.float64),
        float(range_r),
    )


def use_backend(name: str) -> str:
    """Rebind the public kernel names; returns the previous backend."""
    global BACKEND, assign_nearest, bfs_tree, greedy_tree
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ImportError("numba is not installed")
    previous = globals().get("BACKEND")
    BACKEND = name
    if name == "numba":
        assign_nearest, bfs_tree, greedy_tree = _assign_nearest_jit, _bfs_tree_jit, _greedy_tree_jit
    else:
        assign_nearest, bfs_tree, greedy_tree = assign_nearest_numpy, bfs_tree_numpy, greedy_tree_numpy
    return previous


use_backend(_select_backend())
