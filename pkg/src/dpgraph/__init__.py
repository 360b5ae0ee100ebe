"""Diversified proximity graphs for approximate nearest neighbor search.

Build an approximate K-NN graph with NN-descent, diversify and symmetrize
it into a proximity graph that greedy search navigates well, and measure
the result against a brute-force oracle.  Includes synthetic workload
generators, dataset hardness estimators, binary persistence for datasets
and indexes, and a benchmark command line (dpgraph).
"""

from .data import DenseDataset, QuerySet, as_dataset, as_queries
from .diversify import (
    DpgParams,
    add_reverse_edges,
    build_dpg,
    build_dpg_from_knn,
    diversify_angular,
    diversify_counting,
)
from .distances import angle_at, euclidean_distance
from .errors import DegenerateGeometryError, FormatError, GraphStructureError
from .estimators import DiversifiedGraphIndex, KnnGraphIndex
from .exact import GroundTruth, brute_force_knn, build_ground_truth, exact_knn_graph
from .graph import DPG, KNN, Neighbor, NeighborGraph
from .hardness import (
    HardnessReport,
    hardness_report,
    lid_estimate,
    min_hops_histogram,
    relative_contrast,
)
from .nndescent import NnDescentParams, build_knn_graph, graph_recall
from .search import SearchParams, SearchStats, greedy_search, recall, search_queries
from .vecio import (
    load_dataset,
    load_ground_truth,
    load_index,
    load_queries,
    read_fvecs,
    read_ivecs,
    save_ground_truth,
    save_index,
    write_fvecs,
    write_ivecs,
)
from .workloads import (
    PRESETS,
    gen_gauss_clusters,
    gen_line,
    gen_random_ball,
    make_preset,
    perturb_queries,
    split_queries,
)

__version__ = "0.1.0"

__all__ = [
    "DenseDataset",
    "QuerySet",
    "as_dataset",
    "as_queries",
    "DpgParams",
    "add_reverse_edges",
    "build_dpg",
    "build_dpg_from_knn",
    "diversify_angular",
    "diversify_counting",
    "angle_at",
    "euclidean_distance",
    "DegenerateGeometryError",
    "FormatError",
    "GraphStructureError",
    "DiversifiedGraphIndex",
    "KnnGraphIndex",
    "GroundTruth",
    "brute_force_knn",
    "build_ground_truth",
    "exact_knn_graph",
    "DPG",
    "KNN",
    "Neighbor",
    "NeighborGraph",
    "HardnessReport",
    "hardness_report",
    "lid_estimate",
    "min_hops_histogram",
    "relative_contrast",
    "NnDescentParams",
    "build_knn_graph",
    "graph_recall",
    "SearchParams",
    "SearchStats",
    "greedy_search",
    "recall",
    "search_queries",
    "load_dataset",
    "load_ground_truth",
    "load_index",
    "load_queries",
    "read_fvecs",
    "read_ivecs",
    "save_ground_truth",
    "save_index",
    "write_fvecs",
    "write_ivecs",
    "PRESETS",
    "gen_gauss_clusters",
    "gen_line",
    "gen_random_ball",
    "make_preset",
    "perturb_queries",
    "split_queries",
    "__version__",
]
