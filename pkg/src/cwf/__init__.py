"""Clique-width terms for (4K1, C4, P6)-free graphs that contain an induced C6."""

from .cwterm import CwTerm, build_term, eval_term, peel, verify_term
from .decompose import DecompositionReport, build_partition, verify_observations
from .graph import Graph, find_c6, induced_contains, is_in_class, parse_graph, read_graph
from .kernels import BACKEND
from .partition import VertexPartition, hev_holds_brute, is_monotone_partition

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CwTerm", "DecompositionReport", "Graph", "VertexPartition",
    "build_partition", "build_term", "eval_term", "find_c6", "hev_holds_brute",
    "induced_contains", "is_in_class", "is_monotone_partition", "parse_graph",
    "peel", "read_graph", "verify_observations", "verify_term",
]
