"""Input checks shared by the estimators."""
from __future__ import annotations

import numpy as np
from sklearn.utils import check_array

from .graph import LabeledGraph


def check_graph(X) -> LabeledGraph:
    if isinstance(X, str):
        from .graph import load_graph

        return load_graph(X)
    if not isinstance(X, LabeledGraph):
        raise TypeError(f"expected a LabeledGraph or graph-file text, got {type(X).__name__}")
    if X.n == 0:
        raise ValueError("graph has no vertices")
    return X


def check_k(k, minimum: int) -> int:
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < minimum:
        raise ValueError(f"k must be an integer >= {minimum}, got {k!r}")
    return int(k)


def check_vertex_label(graph: LabeledGraph, v, lam) -> tuple:
    if not isinstance(v, (int, np.integer)) or not 0 <= v < graph.n:
        raise ValueError(f"vertex {v!r} out of range [0, {graph.n})")
    if not isinstance(lam, (int, np.integer)) or not 0 <= lam < graph.n_labels:
        raise ValueError(f"unknown label id {lam!r}")
    return int(v), int(lam)


def check_queries(X, graph: LabeledGraph) -> np.ndarray:
    """Validate an ``(n_queries, 2)`` integer array of ``(vertex, label)`` rows."""
    X = check_array(X, dtype=np.int64, ensure_2d=True)
    if X.shape[1] != 2:
        raise ValueError(f"queries must have 2 columns (vertex, label), got {X.shape[1]}")
    if X.size and (X[:, 0].min() < 0 or X[:, 0].max() >= graph.n):
        raise ValueError("query vertex id out of range")
    if X.size and (X[:, 1].min() < 0 or X[:, 1].max() >= graph.n_labels):
        raise ValueError("unknown label id in queries")
    return X
