"""Multi-hop trees over cluster heads rooted at the BS, and hop statistics."""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import InvalidArgument, NoStatistics

BS_ID = -1


class Strategy(str, enum.Enum):
    BFS_MIN_HOP = "bfs_min_hop"
    GREEDY_TOWARD_BS = "greedy_toward_bs"


@dataclass(frozen=True, eq=False)
class RoutingTree:
    range_R: float
    strategy: Strategy
    ch_ids: np.ndarray = field(repr=False)
    ch_xy: np.ndarray = field(repr=False)
    bs_xy: np.ndarray = field(repr=False)
    parent: dict = field(repr=False)  # CH id -> parent CH id, or BS_ID
    hops: dict = field(repr=False)  # CH id -> hop count (reachable CHs only)
    unreachable: tuple[int, ...] = ()

    def _xy(self, node: int) -> np.ndarray:
        if node == BS_ID:
            return self.bs_xy
        return self.ch_xy[int(np.searchsorted(self.ch_ids, node))]

    def edge_length(self, ch: int) -> float:
        a = self._xy(ch)
        b = self._xy(self.parent[ch])
        return math.hypot(a[0] - b[0], a[1] - b[1])

    @property
    def max_hops(self) -> int:
        return max(self.hops.values(), default=0)

    def path_costs(self, alpha: float = 2, actual_distance: bool = False) -> dict:
        """Cost of relaying one coefficient from each reachable CH to the BS.

        Every hop costs ``R ** alpha`` unless ``actual_distance`` is set, in
        which case it costs its own ``length ** alpha``.
        """
        if not actual_distance:
            per_hop = self.range_R ** alpha
            return {ch: h * per_hop for ch, h in self.hops.items()}
        cost: dict = {}
        for ch in sorted(self.hops, key=lambda c: (self.hops[c], c)):
            a = self._xy(ch)
            b = self._xy(self.parent[ch])
            d2 = (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2
            link = d2 if alpha == 2 else d2 ** (alpha / 2)
            cost[ch] = link + cost.get(self.parent[ch], 0.0)
        return cost


def build_routing_tree(ch_ids, ch_xy, bs_xy, range_R: float,
                       strategy: Strategy = Strategy.BFS_MIN_HOP) -> RoutingTree:
    """Connect the heads to the BS over links no longer than ``range_R``.

    ``BFS_MIN_HOP`` gives every head its minimum hop count; among equally short
    parents it takes the one closer to the BS, then the lower id.
    ``GREEDY_TOWARD_BS`` visits heads in order of BS distance and hooks each to
    the already-connected in-range node nearest the BS. Heads left without a
    parent are returned in ``unreachable``.
    """
    if not range_R > 0:
        raise InvalidArgument(f"range_R must be positive, got {range_R}")
    ids = np.asarray(ch_ids, dtype=np.int64).ravel()
    xy = np.asarray(ch_xy, dtype=np.float64).reshape(-1, 2)
    if xy.shape[0] != ids.size:
        raise InvalidArgument("one position per cluster head is required")
    if np.unique(ids).size != ids.size:
        raise InvalidArgument("duplicate cluster head ids")
    order = np.argsort(ids, kind="stable")
    ids, xy = ids[order], xy[order]
    bs = np.asarray(bs_xy, dtype=np.float64).ravel()
    strategy = Strategy(strategy)
    kernel = _kernels.bfs_tree if strategy is Strategy.BFS_MIN_HOP else _kernels.greedy_tree
    par, hop = kernel(xy, bs, float(range_R))
    parent, hops, unreachable = {}, {}, []
    for i, ch in enumerate(ids.tolist()):
        if par[i] == _kernels.UNREACHABLE:
            unreachable.append(ch)
        else:
            parent[ch] = BS_ID if par[i] == _kernels.BS else int(ids[par[i]])
            hops[ch] = int(hop[i])
    ids.setflags(write=False)
    xy.setflags(write=False)
    return RoutingTree(float(range_R), strategy, ids, xy, bs, parent, hops, tuple(unreachable))


@dataclass(frozen=True)
class HopCdf:
    """``cdf[n-1]`` = probability of reaching the BS in n hops or fewer."""

    cdf: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(v) for v in self.cdf)
        object.__setattr__(self, "cdf", c)
        if not c:
            raise InvalidArgument("empty hop CDF")
        if any(not 0.0 <= v <= 1.0 for v in c):
            raise InvalidArgument("hop CDF values must lie in [0, 1]")
        if any(b < a for a, b in zip(c, c[1:])):
            raise InvalidArgument("hop CDF must be non-decreasing")

    @property
    def max_hops(self) -> int:
        return len(self.cdf)


def hop_statistics(tree: RoutingTree) -> tuple[float, HopCdf]:
    if not tree.hops:
        raise NoStatistics("no cluster head is connected to the BS")
    h = np.fromiter(tree.hops.values(), dtype=np.int64)
    counts = np.bincount(h, minlength=h.max() + 1)[1:]
    cdf = np.cumsum(counts) / h.size
    cdf[-1] = 1.0
    return float(h.mean()), HopCdf(tuple(cdf))


def expected_hops_chandler(cdf, max_hops: int | None = None) -> float:
    """Mean hop count from the cumulative hop distribution.

    ``max_hops`` caps (or extends, holding the last value) the distribution at
    the allowed maximum; by default the CDF's own length is used.
    """
    if not isinstance(cdf, HopCdf):
        cdf = HopCdf(tuple(cdf))
    p = list(cdf.cdf)
    if max_hops is not None:
        if max_hops < 1:
            raise InvalidArgument("max_hops must be >= 1")
        p = p[:max_hops] + [p[-1]] * (max_hops - len(p))
    p_max = p[-1]
    if p_max <= 0:
        raise InvalidArgument("the CDF never reaches the BS (P_max = 0)")
    return len(p) - sum(p[:-1]) / p_max


def to_csv(tree: RoutingTree) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["ch_id", "parent_id", "hops", "edge_length"])
    for ch in tree.ch_ids.tolist():
        if ch in tree.parent:
            w.writerow([ch, tree.parent[ch], tree.hops[ch], repr(tree.edge_length(ch))])
        else:
            w.writerow([ch, "", "", ""])
    return buf.getvalue()
