"""Thickness and outerthickness decompositions of graphs embedded on surfaces."""

from .decomposition import Decomposition, bounds_report, decompose
from .disk import build_spanning_disk, verify_disk
from .embedding import Embedding, Graph
from .generators import generate
from .io import format_embedding, parse_embedding
from .oracle import exact_outerthickness, exact_thickness, has_spanning_disk, verify_decomposition

__all__ = [
    "Decomposition",
    "Embedding",
    "Graph",
    "bounds_report",
    "build_spanning_disk",
    "decompose",
    "exact_outerthickness",
    "exact_thickness",
    "format_embedding",
    "generate",
    "has_spanning_disk",
    "parse_embedding",
    "verify_decomposition",
    "verify_disk",
]
