"""Per-cluster DCT compression: sort, transform, keep k coefficients, invert."""
from __future__ import annotations

import csv
import enum
import functools
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument, InvalidData, UndefinedMetric


class SortMode(str, enum.Enum):
    NONE = "none"
    DESCENDING = "descending"
    ASCENDING = "ascending"


class SelectionMode(str, enum.Enum):
    FIRST_K = "first_k"
    TOP_K_MAGNITUDE = "top_k_magnitude"


@functools.lru_cache(maxsize=256)
def dct_matrix(n: int) -> np.ndarray:
    """Orthonormal DCT-II matrix, rows are basis vectors (same as Matlab ``dctmtx``).

    The returned array is cached per ``n`` and read-only.
    """
    if int(n) != n or n < 1:
        raise InvalidArgument(f"DCT size must be a positive integer, got {n}")
    n = int(n)
    p = np.arange(n)[:, None]
    q = np.arange(n)[None, :]
    phi = math.sqrt(2.0 / n) * np.cos(np.pi * (2 * q + 1) * p / (2 * n))
    phi[0, :] = 1.0 / math.sqrt(n)
    phi.setflags(write=False)
    return phi


@dataclass(frozen=True, eq=False)
class CompressedPayload:
    """What a cluster head ships to the BS.

    ``indices``/``values`` are the kept coefficients ordered by coefficient
    index; ``permutation[j]`` is the node whose reading sat at sorted position j.
    """

    n: int
    indices: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    permutation: np.ndarray = field(repr=False)
    sort_mode: SortMode = SortMode.DESCENDING
    selection_mode: SelectionMode = SelectionMode.TOP_K_MAGNITUDE

    @property
    def k(self) -> int:
        return int(self.indices.size)

    @property
    def kept(self) -> list[tuple[int, float]]:
        return [(int(i), float(v)) for i, v in zip(self.indices, self.values)]

    def validate(self) -> None:
        idx = np.asarray(self.indices)
        if not 1 <= idx.size <= self.n:
            raise InvalidData(f"payload keeps {idx.size} coefficients for n={self.n}")
        if np.asarray(self.values).shape != idx.shape:
            raise InvalidData("coefficient indices and values differ in length")
        if idx.min() < 0 or idx.max() >= self.n or np.unique(idx).size != idx.size:
            raise InvalidData("coefficient indices must be distinct and lie in [0, n)")
        perm = np.asarray(self.permutation)
        if perm.size != self.n or np.unique(perm).size != self.n:
            raise InvalidData("permutation must list n distinct node ids")
        if not np.all(np.isfinite(self.values)):
            raise InvalidData("non-finite coefficient value")


def sort_order(node_ids: np.ndarray, values: np.ndarray, mode: SortMode) -> np.ndarray:
    """Positions of the readings in transmission order; ties fall back to ascending node id."""
    mode = SortMode(mode)
    if mode is SortMode.DESCENDING:
        return np.lexsort((node_ids, -values))
    if mode is SortMode.ASCENDING:
        return np.lexsort((node_ids, values))
    return np.argsort(node_ids, kind="stable")


def select_coefficients(s: np.ndarray, k: int, mode: SelectionMode) -> np.ndarray:
    """Sorted indices of the k coefficients to keep."""
    if SelectionMode(mode) is SelectionMode.FIRST_K:
        return np.arange(k)
    order = np.lexsort((np.arange(s.size), -np.abs(s)))
    return np.sort(order[:k])


def compress_cluster(
    node_ids,
    values,
    k: int,
    sort_mode: SortMode = SortMode.DESCENDING,
    selection_mode: SelectionMode = SelectionMode.TOP_K_MAGNITUDE,
) -> CompressedPayload:
    node_ids = np.asarray(node_ids, dtype=np.int64).ravel()
    values = np.asarray(values, dtype=np.float64).ravel()
    n = node_ids.size
    if values.size != n or n == 0:
        raise InvalidArgument("need one reading per node and at least one node")
    if int(k) != k or not 1 <= k <= n:
        raise InvalidArgument(f"k must be in [1, {n}], got {k}")
    if not np.all(np.isfinite(values)):
        raise InvalidData("non-finite reading")
    order = sort_order(node_ids, values, sort_mode)
    s = dct_matrix(n) @ values[order]
    keep = select_coefficients(s, int(k), selection_mode)
    return CompressedPayload(
        n=n,
        indices=keep,
        values=s[keep],
        permutation=node_ids[order],
        sort_mode=SortMode(sort_mode),
        selection_mode=SelectionMode(selection_mode),
    )


def reconstruct_cluster(payload: CompressedPayload) -> tuple[np.ndarray, np.ndarray]:
    """Zero-fill the dropped coefficients, invert, and undo the sort.

    Returns ``(node_ids, estimates)`` with node ids ascending.
    """
    payload.validate()
    s = np.zeros(payload.n)
    s[np.asarray(payload.indices)] = payload.values
    est_sorted = dct_matrix(payload.n).T @ s
    perm = np.asarray(payload.permutation, dtype=np.int64)
    back = np.argsort(perm, kind="stable")
    return perm[back], est_sorted[back]


def normalized_error(x, x_hat) -> float:
    x = np.asarray(x, dtype=np.float64).ravel()
    x_hat = np.asarray(x_hat, dtype=np.float64).ravel()
    if x.shape != x_hat.shape:
        raise InvalidArgument("signals differ in length")
    ref = np.linalg.norm(x)
    if ref == 0:
        raise UndefinedMetric("normalized error is undefined for an all-zero reference")
    return float(np.linalg.norm(x - x_hat) / ref)


def allocate_coefficients(sizes, K: int, priority=None) -> np.ndarray:
    """Split a global budget ``K`` across clusters in proportion to their sizes.

    Quotas ``K * n_i / N`` are rounded cumulatively along the clusters sorted by
    ``priority`` (ties by index), so ``sum(k) == K`` and each ``k_i`` is the
    floor or ceiling of its quota. Sorting by CH-to-BS distance keeps the
    integer payloads' to-BS cost within one coefficient of the proportional
    cost. When ``K >= len(sizes)`` every cluster is guaranteed ``k_i >= 1``;
    otherwise some clusters get 0 and send nothing.
    """
    sizes = np.asarray(sizes, dtype=np.int64)
    total = int(sizes.sum())
    if sizes.size == 0 or sizes.min() < 1:
        raise InvalidArgument("cluster sizes must be positive")
    if int(K) != K or not 1 <= K <= total:
        raise InvalidArgument(f"K must be in [1, {total}], got {K}")
    K = int(K)
    quota = K * sizes / total
    key = np.zeros(sizes.size) if priority is None else np.asarray(priority, dtype=np.float64)
    order = np.lexsort((np.arange(sizes.size), key))
    cum = np.floor(np.cumsum(quota[order]) + 0.5).astype(np.int64)
    cum[-1] = K
    k = np.empty(sizes.size, dtype=np.int64)
    k[order] = np.diff(cum, prepend=0)
    if K >= sizes.size:
        for i in np.flatnonzero(k == 0):
            donors = np.flatnonzero(k >= 2)
            surplus = k[donors] - quota[donors]
            j = donors[np.lexsort((donors, -surplus))[0]]
            k[j] -= 1
            k[i] = 1
    return k


def payloads_to_csv(payloads) -> tuple[str, str]:
    """Serialise ``[(cluster_index, payload), ...]`` to (coefficient CSV, permutation CSV)."""
    coef = io.StringIO()
    perm = io.StringIO()
    wc = csv.writer(coef, lineterminator="\n")
    wp = csv.writer(perm, lineterminator="\n")
    wc.writerow(["cluster_index", "n", "coeff_index", "coeff_value"])
    wp.writerow(["cluster_index", "sorted_pos", "node_id"])
    for ci, p in payloads:
        for i, v in zip(p.indices, p.values):
            wc.writerow([ci, p.n, int(i), repr(float(v))])
        for pos, node in enumerate(p.permutation):
            wp.writerow([ci, pos, int(node)])
    return coef.getvalue(), perm.getvalue()


def payloads_from_csv(coef_text: str, perm_text: str, sort_mode=SortMode.DESCENDING,
                      selection_mode=SelectionMode.TOP_K_MAGNITUDE) -> list[tuple[int, CompressedPayload]]:
    coefs: dict[int, list] = {}
    sizes: dict[int, int] = {}
    for lineno, row in enumerate(csv.DictReader(io.StringIO(coef_text)), start=2):
        try:
            ci, n = int(row["cluster_index"]), int(row["n"])
            coefs.setdefault(ci, []).append((int(row["coeff_index"]), float(row["coeff_value"])))
        except (TypeError, ValueError, KeyError) as exc:
            raise InvalidData(f"coefficient CSV line {lineno}: {exc}") from exc
        if sizes.setdefault(ci, n) != n:
            raise InvalidData(f"coefficient CSV line {lineno}: inconsistent n for cluster {ci}")
    perms: dict[int, list] = {}
    for lineno, row in enumerate(csv.DictReader(io.StringIO(perm_text)), start=2):
        try:
            perms.setdefault(int(row["cluster_index"]), []).append((int(row["sorted_pos"]), int(row["node_id"])))
        except (TypeError, ValueError, KeyError) as exc:
            raise InvalidData(f"permutation CSV line {lineno}: {exc}") from exc
    out = []
    for ci in sorted(coefs):
        if ci not in perms:
            raise InvalidData(f"no permutation for cluster {ci}")
        kept = sorted(coefs[ci])
        order = [node for _, node in sorted(perms[ci])]
        p = CompressedPayload(
            n=sizes[ci],
            indices=np.array([i for i, _ in kept], dtype=np.int64),
            values=np.array([v for _, v in kept]),
            permutation=np.array(order, dtype=np.int64),
            sort_mode=SortMode(sort_mode),
            selection_mode=SelectionMode(selection_mode),
        )
        p.validate()
        out.append((ci, p))
    return out
