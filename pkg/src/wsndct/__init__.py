"""Clustered sensor-network data collection with distributed DCT compression.

Pipeline stages live in their own modules: ``deployment``, ``clustering``,
``transform``, ``routing``, ``energy``, ``signals``; ``harness`` strings them
into seeded Monte Carlo sweeps and ``cli`` is the command-line front end.
"""
__version__ = "0.1.0"

from .clustering import Algorithm, ClusterSet, cluster_kmeans, cluster_leach  # noqa: E402
from .deployment import AreaGeometry, Deployment, Position, deploy  # noqa: E402
from .energy import EnergyModel, EnergyReport, empirical_energy  # noqa: E402
from .routing import HopCdf, RoutingTree, build_routing_tree, expected_hops_chandler  # noqa: E402
from .transform import (  # noqa: E402
    CompressedPayload,
    SelectionMode,
    SortMode,
    compress_cluster,
    dct_matrix,
    normalized_error,
    reconstruct_cluster,
)

__all__ = [
    "Algorithm", "AreaGeometry", "ClusterSet", "CompressedPayload", "Deployment", "EnergyModel",
    "EnergyReport", "HopCdf", "Position", "RoutingTree", "SelectionMode", "SortMode",
    "build_routing_tree", "cluster_kmeans", "cluster_leach", "compress_cluster", "dct_matrix",
    "deploy", "empirical_energy", "expected_hops_chandler", "normalized_error", "reconstruct_cluster",
]
