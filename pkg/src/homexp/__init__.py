"""Homomorphism partition functions t(G, H) on bounded-degree graphs.

Exact counting, truncated cluster expansion, cavity (random ordering) local
estimation, subgraph-count recovery and transfer-matrix grid computations.
"""
__version__ = "0.1.0"

from .exceptions import (DegenerateDistributionError, HomexpError, InternalConsistencyError,
                         PreconditionError, ResourceError)
from .graph import (SimpleGraph, WeightedGraph, complete_graph, cycle_graph, empty_graph, path_graph,
                    star_graph, uniform_complete_target, weighted_from_simple)
from .homcount import density, hom_count, log_density, z_value
from .certified import CertifiedLog
from .cluster import truncated_ln_t
from .cavity import CavityConfig, local_estimate_ln_t
from .estimators import (BallHistogramTransformer, CavityEstimator, ClusterExpansionEstimator,
                         CountRecovery, ExactLogPartition)

__all__ = [
    "__version__", "HomexpError", "PreconditionError", "DegenerateDistributionError", "ResourceError",
    "InternalConsistencyError", "SimpleGraph", "WeightedGraph", "complete_graph", "cycle_graph",
    "empty_graph", "path_graph", "star_graph", "uniform_complete_target", "weighted_from_simple",
    "density", "hom_count", "log_density", "z_value", "CertifiedLog", "truncated_ln_t",
    "CavityConfig", "local_estimate_ln_t", "BallHistogramTransformer", "CavityEstimator",
    "ClusterExpansionEstimator", "CountRecovery", "ExactLogPartition",
]
