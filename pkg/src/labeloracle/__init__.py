"""Approximate vertex-to-label distance oracles on weighted undirected graphs."""
from .graph import INF, GraphFormatError, LabeledGraph, dijkstra, dump_graph, load_graph, multi_source_dijkstra
from .oracles import (
    CapabilityError,
    PathReportingLabelOracle,
    QueryResult,
    TwoSidedLabelOracle,
    build_2k1_oracle,
    build_pr_oracle,
)
from .generate import GenSpec, generate

__all__ = [
    "INF",
    "CapabilityError",
    "GenSpec",
    "GraphFormatError",
    "LabeledGraph",
    "PathReportingLabelOracle",
    "QueryResult",
    "TwoSidedLabelOracle",
    "build_2k1_oracle",
    "build_pr_oracle",
    "dijkstra",
    "dump_graph",
    "generate",
    "load_graph",
    "multi_source_dijkstra",
]

__version__ = "0.1.0"
