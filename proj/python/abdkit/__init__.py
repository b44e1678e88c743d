"""Merge-tree branching distances between planar embedded graphs."""

from ._abdkit import (
    Dendrogram,
    DistanceMatrix,
    Embedding,
    Error,
    Graph,
    InputError,
    MergeTree,
    SizeGuardError,
    are_isomorphic,
    average_branching_distance,
    branching_distance,
    brute_force_distance,
    classical_mds,
    cluster_purity,
    distance_matrix,
    frame_angles,
    graph_from_json,
    load_graph,
    matrix_from_csv,
    merge_tree,
    merge_tree_from_json,
    random_convex_polygon,
    single_linkage,
    synthetic_shape,
    trivial_tree,
    value_isomorphic,
    verify,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
