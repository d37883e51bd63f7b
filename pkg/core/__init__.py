"""
Core Module - 图的值类型、规范形式与 graph6
"""

from core.errors import (
    BracketError,
    CapacityError,
    ConfigError,
    ConvergenceError,
    DisconnectedGraphError,
    Graph6ParseError,
    GraphDomainError,
    InternalInvariantError,
    QExtremalError,
    UsageError,
)
from core.graph import (
    Graph,
    VertexSet,
    build_graph,
    degree,
    is_connected,
    max_degree,
    min_degree,
)
from core.canonical import CanonicalForm, canonical_form, canonical_labeling, is_isomorphic
from core.graph6 import graph6_decode, graph6_encode

__all__ = [
    "BracketError",
    "CapacityError",
    "ConfigError",
    "ConvergenceError",
    "DisconnectedGraphError",
    "Graph6ParseError",
    "GraphDomainError",
    "InternalInvariantError",
    "QExtremalError",
    "UsageError",
    "Graph",
    "VertexSet",
    "build_graph",
    "degree",
    "is_connected",
    "max_degree",
    "min_degree",
    "CanonicalForm",
    "canonical_form",
    "canonical_labeling",
    "is_isomorphic",
    "graph6_decode",
    "graph6_encode",
]
