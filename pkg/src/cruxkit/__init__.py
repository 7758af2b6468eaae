"""Crux function, sublinear expanders, long cycles and percolation experiments."""

from .errors import CruxkitError, EdgeListParseError, PreconditionError
from .graph import (
    Graph,
    InducedSubgraphView,
    VertexSet,
    average_degree,
    edge_boundary,
    external_neighbourhood,
    read_edge_list,
    write_edge_list,
)

__version__ = "0.1.0"

__all__ = [
    "CruxkitError",
    "EdgeListParseError",
    "PreconditionError",
    "Graph",
    "InducedSubgraphView",
    "VertexSet",
    "average_degree",
    "edge_boundary",
    "external_neighbourhood",
    "read_edge_list",
    "write_edge_list",
]
