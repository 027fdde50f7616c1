"""Structural role embeddings of graph nodes by stress majorization over degree-sequence distances."""
from .distance import DistanceConfig, distance_matrix, structural_distance
from .dtw import exact_dtw, fast_dtw, pair_cost
from .graph import Graph, diameter, khop_rings, ordered_degree_sequence
from .stress import SolverConfig, SolverTrace, embed, majorize_step, stress, surrogate, weighted_laplacian

__all__ = [
    "DistanceConfig", "distance_matrix", "structural_distance",
    "exact_dtw", "fast_dtw", "pair_cost",
    "Graph", "diameter", "khop_rings", "ordered_degree_sequence",
    "SolverConfig", "SolverTrace", "embed", "majorize_step", "stress", "surrogate", "weighted_laplacian",
]
__version__ = "0.1.0"
