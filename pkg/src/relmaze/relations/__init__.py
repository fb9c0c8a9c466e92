"""Spatial-to-relational view of grid mazes"""

from .graph import RelationGraph, build_graph, coord_of, label_of, render_relations
from .labels import decode_label, encode_label

__all__ = [
    "RelationGraph",
    "build_graph",
    "coord_of",
    "label_of",
    "render_relations",
    "decode_label",
    "encode_label",
]
