"""Tree-likeness measurements for unweighted graphs."""

__version__ = "0.1.0"

from .decomposition import (TbBoundsReport, TreeDecomposition, build_gamma_prime, decomposition_breadth_length,
                            tree_breadth_bounds, verify_tree_decomposition)
from .distortion import DistortionCDF, DistortionReport, distortion_cdf, distortion_report, td_lower_bound
from .estimation import EstimationResult, estimation_guarantee_check, iterated_bfs_estimate
from .graph import (Graph, GraphFormatError, biconnected_components, exact_diameter_radius, from_edges,
                    largest_connected_component, pair_sampler, parse_edge_list, read_edge_list)
from .hyperbolicity import Budget, HyperbolicityResult, delta_histogram, delta_quadruplet, exact_hyperbolicity
from .labeling import build_distance_labels, label_query
from .layering import LayeringPartition, build_layering_partition, cluster_diameter, cluster_radius, cluster_stats
from .trees import EmbeddingTree, build_canonic_tree, build_H_ell, build_H_prime_ell, compute_ell, tree_distance

__all__ = [name for name in dir() if not name.startswith("_")]
