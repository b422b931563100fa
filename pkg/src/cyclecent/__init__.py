"""Cycle centrality from persistent homology.

Rips filtrations over point clouds, GF(2) boundary-matrix reduction with
explicit cycle representatives, homology-class merge clusters, the J1/J2/J3
centrality curves, p-centrality norms and distances with stability bounds,
and the LGumbel topological signal test.
"""

__version__ = "0.1.0"

from .centrality import (CentralityCurve, curve_family, evaluate, j1_curve,
                         j2_curve, j3_curve, max_value, persistence_at)
from .errors import (DegenerateClassError, EmptyInputError, PointFormatError,
                     UndefinedConstantsError)
from .estimators import CentralityFeatures, CycleCentrality
from .filtration import (FilteredComplex, Simplex, filtration_index,
                         rips_filtration)
from .merge import (MergeClusters, earliest_ancestor, first_order_clusters,
                    k_near, merges_with_oracle, nth_order_cluster)
from .metric import (CentralityCollection, bottleneck_distance, bound_R,
                     bound_Rprime, centrality_collection, centrality_distance,
                     centrality_distance_inf, constants, d_star, p_norm,
                     verify_bounds, write_bound_report)
from .persistence import (BoundaryMatrix, Chain, PersistencePair, boundary,
                          chain_boundary, compute_pairs, extract_pairs,
                          pairs_to_diagram, precedes, reduce, representative,
                          rips_pairs)
from .pointcloud import (bootstrap_sample, derive_rng, load_points,
                         pairwise_distances, perturb, sample_annuli_wedge,
                         sample_fern, sample_sierpinski, save_points)
from .signals import (BootstrapStats, SignalReport, bootstrap_hole_stats,
                      extract_signal, l_values, mult_pers, spearman,
                      threshold_counts)

__all__ = [
    "__version__",
    "BootstrapStats", "BoundaryMatrix", "CentralityCollection",
    "CentralityCurve", "CentralityFeatures", "Chain", "CycleCentrality",
    "DegenerateClassError", "EmptyInputError", "FilteredComplex",
    "MergeClusters", "PersistencePair", "PointFormatError", "SignalReport",
    "Simplex", "UndefinedConstantsError", "boundary", "bootstrap_hole_stats",
    "bootstrap_sample", "bottleneck_distance", "bound_R", "bound_Rprime",
    "centrality_collection", "centrality_distance", "centrality_distance_inf",
    "chain_boundary", "compute_pairs", "constants", "curve_family", "d_star",
    "derive_rng", "earliest_ancestor", "evaluate", "extract_pairs",
    "extract_signal", "filtration_index", "first_order_clusters", "j1_curve",
    "j2_curve", "j3_curve", "k_near", "l_values", "load_points", "max_value",
    "merges_with_oracle", "mult_pers", "nth_order_cluster", "p_norm",
    "pairs_to_diagram", "pairwise_distances", "persistence_at", "perturb",
    "precedes", "reduce", "representative", "rips_filtration", "rips_pairs",
    "sample_annuli_wedge", "sample_fern", "sample_sierpinski", "save_points",
    "spearman", "threshold_counts", "verify_bounds", "write_bound_report",
]
