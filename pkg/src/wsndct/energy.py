"""Transmission cost, closed-form and measured.

Cost unit: sending one scalar over a link of length d costs ``d ** alpha``.
Radio electronics (the distance-independent transmit/receive terms) are not
modelled, so every number here is in distance**alpha units and only the
amplifier part of the budget is represented. Receptions are free.

The closed forms assume ``alpha == 2`` and reject anything else.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .clustering import ClusterSet
from .deployment import Deployment
from .errors import InvalidArgument, RoutingError, UnsupportedModel


class MultihopCost(str, enum.Enum):
    FIXED_RANGE = "fixed_range"
    ACTUAL_DISTANCE = "actual_distance"


@dataclass(frozen=True)
class EnergyModel:
    alpha: int = 2
    multihop_cost: MultihopCost = MultihopCost.FIXED_RANGE
    # charge one extra scalar per kept coefficient for its index
    index_overhead: bool = False

    def __post_init__(self):
        if self.alpha not in (2, 4):
            raise InvalidArgument(f"alpha must be 2 or 4, got {self.alpha}")
        object.__setattr__(self, "multihop_cost", MultihopCost(self.multihop_cost))


@dataclass(frozen=True)
class EnergyReport:
    intra_cluster: float
    to_bs: float
    total: float
    per_cluster: tuple[tuple[int, float, float], ...] = field(repr=False, default=())
    unreachable: tuple[int, ...] = ()

    @property
    def partial(self) -> bool:
        return bool(self.unreachable)


def _require_alpha2(alpha):
    if alpha != 2:
        raise UnsupportedModel(f"closed-form energy is only derived for alpha = 2 (got {alpha})")


def analytic_intra_square(n: int, n_c: int, L: float, alpha: int = 2) -> float:
    """Intra-cluster cost with circular clusters of radius ``L / sqrt(pi n_c)`` around centred heads."""
    _require_alpha2(alpha)
    if not 1 <= n_c <= n or L <= 0:
        raise InvalidArgument(f"need 1 <= n_c <= n and L > 0 (n={n}, n_c={n_c}, L={L})")
    return (n / n_c - 1) * L * L / (2 * math.pi)


def analytic_intra_disk(n: int, n_c: int, R0: float, alpha: int = 2) -> float:
    _require_alpha2(alpha)
    if not 1 <= n_c <= n or R0 <= 0:
        raise InvalidArgument(f"need 1 <= n_c <= n and R0 > 0 (n={n}, n_c={n_c}, R0={R0})")
    return (n / n_c - 1) * R0 * R0 / 2


def analytic_e_d2_square(L: float, L_i: float) -> float:
    """E[d^2] from a uniform point of the square to a BS at ``(L_i, L/2)``.

    Cubes keep their sign, so the value stays the exact integral for ``L_i > L``.
    """
    if L <= 0 or L_i < 0:
        raise InvalidArgument(f"need L > 0 and L_i >= 0 (L={L}, L_i={L_i})")
    return ((L - L_i) ** 3 + L_i ** 3) / (3 * L) + L * L / 12


def analytic_e_d2_disk(R0: float) -> float:
    """E[d^2] from a uniform point of a disk to its centre."""
    if R0 <= 0:
        raise InvalidArgument("R0 must be positive")
    return R0 * R0 / 2


def analytic_total_direct_square(n, n_c, L, L_i, K, alpha: int = 2) -> float:
    return analytic_intra_square(n, n_c, L, alpha) + K * analytic_e_d2_square(L, L_i)


def analytic_total_direct_disk(n, n_c, R0, K, alpha: int = 2) -> float:
    return analytic_intra_disk(n, n_c, R0, alpha) + K * analytic_e_d2_disk(R0)


def analytic_total_multihop(intra: float, expected_hops: float, range_R: float, K, alpha: int = 2) -> float:
    """Intra cost plus K coefficients relayed over ``expected_hops`` full-range hops."""
    _require_alpha2(alpha)
    if expected_hops < 1 or range_R <= 0:
        raise InvalidArgument("need expected_hops >= 1 and range_R > 0")
    return intra + expected_hops * range_R * range_R * K


def _link_cost(d2, alpha):
    return d2 if alpha == 2 else d2 ** (alpha / 2)


def empirical_energy(
    dep: Deployment,
    cs: ClusterSet,
    payload_sizes,
    model: EnergyModel = EnergyModel(),
    tree=None,
    fallback_direct: bool = False,
) -> EnergyReport:
    """Measured cost of one collection round.

    ``tree`` is a :class:`~wsndct.routing.RoutingTree` over the cluster heads
    for multi-hop forwarding; ``None`` sends every head straight to the BS.
    Heads the tree cannot reach raise :class:`RoutingError` unless
    ``fallback_direct`` is set, in which case they are charged one direct hop
    and listed in ``unreachable``.
    """
    k = np.asarray(payload_sizes, dtype=np.float64)
    if k.shape != (cs.n_clusters,):
        raise InvalidArgument(f"{k.size} payload sizes for {cs.n_clusters} clusters")
    if np.any(k < 0):
        raise InvalidArgument("payload sizes must be non-negative")
    if model.index_overhead:
        k = 2 * k
    alpha = model.alpha
    heads = cs.heads

    head_of = heads[cs.labels]
    dx = dep.xy[:, 0] - dep.xy[head_of, 0]
    dy = dep.xy[:, 1] - dep.xy[head_of, 1]
    per_node = _link_cost(dx * dx + dy * dy, alpha)
    intra_pc = np.bincount(cs.labels, weights=per_node, minlength=cs.n_clusters)

    hx = dep.xy[heads, 0] - dep.bs.x
    hy = dep.xy[heads, 1] - dep.bs.y
    direct = _link_cost(hx * hx + hy * hy, alpha)
    unreachable: list[int] = []
    if tree is None:
        per_coeff = direct
    else:
        per_coeff = np.empty(cs.n_clusters)
        path = tree.path_costs(alpha, model.multihop_cost is MultihopCost.ACTUAL_DISTANCE)
        for i, h in enumerate(heads.tolist()):
            if h in path:
                per_coeff[i] = path[h]
            else:
                unreachable.append(h)
                per_coeff[i] = direct[i]
        if unreachable and not fallback_direct:
            raise RoutingError(f"{len(unreachable)} cluster heads cannot reach the BS: {unreachable[:10]}")
    to_bs_pc = k * per_coeff
    intra = float(intra_pc.sum())
    to_bs = float(to_bs_pc.sum())
    per_cluster = tuple((i, float(a), float(b)) for i, (a, b) in enumerate(zip(intra_pc, to_bs_pc)))
    return EnergyReport(intra, to_bs, intra + to_bs, per_cluster, tuple(unreachable))
