"""Weighted undirected vertex-labeled graphs and Dijkstra primitives."""
from __future__ import annotations

import hashlib
import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

INF = math.inf


class GraphFormatError(ValueError):
    """Raised when a graph file cannot be parsed; carries the 1-based line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class LabeledGraph:
    """Undirected graph with nonnegative edge weights and one label per vertex.

    ``edges`` holds canonical ``(u, v, w)`` triples with ``u < v``, sorted, one
    per vertex pair. Use :meth:`from_edges` to build one from raw input.
    """

    n: int
    edges: tuple
    label_of: tuple
    n_labels: int
    _adj: list = field(init=False, repr=False, compare=False)
    _weights: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adj = [[] for _ in range(self.n)]
        weights = {}
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
            weights[(u, v)] = w
        for row in adj:
            row.sort()
        object.__setattr__(self, "_adj", adj)
        object.__setattr__(self, "_weights", weights)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, label_of: Iterable[int], n_labels: Optional[int] = None):
        label_of = tuple(int(x) for x in label_of)
        if len(label_of) != n:
            raise ValueError(f"expected {n} labels, got {len(label_of)}")
        if n_labels is None:
            n_labels = max(label_of) + 1 if label_of else 0
        for v, lam in enumerate(label_of):
            if not 0 <= lam < n_labels:
                raise ValueError(f"vertex {v} has label {lam} outside [0, {n_labels})")
        best = {}
        for u, v, w in edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has a vertex id out of range")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not w >= 0 or math.isinf(w):
                raise ValueError(f"negative weight {w} on edge ({u}, {v})")
            key = (u, v) if u < v else (v, u)
            if key not in best or w < best[key]:
                best[key] = w
        canon = tuple((u, v, w) for (u, v), w in sorted(best.items()))
        return cls(n=n, edges=canon, label_of=label_of, n_labels=n_labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> list:
        return self._adj[v]

    def weight(self, u: int, v: int) -> Optional[float]:
        """Weight of edge ``{u, v}`` or None when absent."""
        return self._weights.get((u, v) if u < v else (v, u))

    def vertices_with_label(self, lam: int) -> list:
        return [v for v, x in enumerate(self.label_of) if x == lam]

    def label_classes(self) -> list:
        classes = [[] for _ in range(self.n_labels)]
        for v, lam in enumerate(self.label_of):
            classes[lam].append(v)
        return classes

    def to_text(self) -> str:
        return dump_graph(self)

    def content_hash(self) -> str:
        return hashlib.sha256(dump_graph(self).encode()).hexdigest()


def _fmt_weight(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def dump_graph(g: LabeledGraph) -> str:
    lines = [f"{g.n} {g.m} {g.n_labels}"]
    lines += [f"label {v} {lam}" for v, lam in enumerate(g.label_of)]
    lines += [f"edge {u} {v} {_fmt_weight(w)}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"


def load_graph(text: str) -> LabeledGraph:
    """Parse the line-oriented graph format.

    Header ``n m l``, then ``label <v> <lam>`` lines and ``edge <u> <v> <w>``
    lines. ``#`` starts a comment. Parallel edges collapse to the lightest one.
    """
    header = None
    labels: dict = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 3:
                raise GraphFormatError("header must be 'n m l'", lineno)
            try:
                header = tuple(int(x) for x in parts)
            except ValueError:
                raise GraphFormatError(f"malformed header {line!r}", lineno) from None
            if min(header) < 0:
                raise GraphFormatError("header values must be nonnegative", lineno)
            n, _, n_labels = header
            continue
        kind = parts[0]
        if kind == "label":
            if len(parts) != 3:
                raise GraphFormatError("expected 'label <vertex-id> <label-id>'", lineno)
            try:
                v, lam = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError(f"malformed label line {line!r}", lineno) from None
            if not 0 <= v < n:
                raise GraphFormatError(f"vertex id {v} out of range", lineno)
            if not 0 <= lam < n_labels:
                raise GraphFormatError(f"label id {lam} out of range", lineno)
            if v in labels:
                raise GraphFormatError(f"vertex {v} labeled twice", lineno)
            labels[v] = lam
        elif kind == "edge":
            if len(parts) != 4:
                raise GraphFormatError("expected 'edge <u> <v> <w>'", lineno)
            try:
                u, v, w = int(parts[1]), int(parts[2]), float(parts[3])
            except ValueError:
                raise GraphFormatError(f"malformed edge line {line!r}", lineno) from None
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"vertex id out of range in edge ({u}, {v})", lineno)
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}", lineno)
            if math.isnan(w) or math.isinf(w):
                raise GraphFormatError(f"non-finite weight {parts[3]}", lineno)
            if w < 0:
                raise GraphFormatError(f"negative weight {parts[3]}", lineno)
            edges.append((u, v, w, lineno))
        else:
            raise GraphFormatError(f"unknown record type {kind!r}", lineno)
    if header is None:
        raise GraphFormatError("missing header")
    n, m, n_labels = header
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(edges)}")
    missing = [v for v in range(n) if v not in labels]
    if missing:
        raise GraphFormatError(f"missing label for vertex {missing[0]}")
    return LabeledGraph.from_edges(
        n, [(u, v, w) for u, v, w, _ in edges], [labels[v] for v in range(n)], n_labels
    )


@dataclass(frozen=True)
class SsspResult:
    """Distances, shortest-path parents and (multi-source) nearest seeds."""

    dist: list
    parent: list
    source_of: list

    def path_to(self, v: int) -> Optional[list]:
        """Vertex sequence from the (nearest) source to ``v``; None if unreachable."""
        if self.dist[v] == INF:
            return None
        path = [v]
        while self.parent[path[-1]] is not None:
            path.append(self.parent[path[-1]])
        path.reverse()
        return path


def _run(g: LabeledGraph, seeds: Iterable[int]) -> SsspResult:
    # Lexicographic (dist, seed) keys make the nearest seed unique: ties go to the
    # smaller seed id, and the parent always shares the child's seed.
    n = g.n
    dist = [INF] * n
    src: list = [None] * n
    parent: list = [None] * n
    done = [False] * n
    heap = []
    for s in sorted(set(seeds)):
        if dist[s] != 0:
            dist[s] = 0.0
            src[s] = s
            heap.append((0.0, s, s))
    heapq.heapify(heap)
    adj = g._adj
    while heap:
        d, s, u = heapq.heappop(heap)
        if done[u] or d != dist[u] or s != src[u]:
            continue
        done[u] = True
        for x, w in adj[u]:
            if done[x]:
                continue
            nd = d + w
            if nd < dist[x] or (nd == dist[x] and s < src[x]):
                dist[x], src[x], parent[x] = nd, s, u
                heapq.heappush(heap, (nd, s, x))
            elif nd == dist[x] and s == src[x] and u < parent[x]:
                parent[x] = u
    return SsspResult(dist=dist, parent=parent, source_of=src)


def dijkstra(g: LabeledGraph, source: int) -> SsspResult:
    """Exact single-source shortest paths; equal-length ties pick the smaller predecessor."""
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} out of range")
    return _run(g, [source])


def multi_source_dijkstra(g: LabeledGraph, seeds: Iterable[int]) -> SsspResult:
    """``dist(v, seeds)`` for every v plus the nearest seed (smaller id on ties).

    An empty seed set yields all-infinite distances.
    """
    seeds = list(seeds)
    for s in seeds:
        if not 0 <= s < g.n:
            raise ValueError(f"seed {s} out of range")
    return _run(g, seeds)


def pruned_dijkstra(g: LabeledGraph, root: int, bound: list) -> tuple:
    """Grow ``{v : dist(root, v) < bound[v]}`` from ``root``.

    Returns ``(dist, parent)`` dicts over the grown set. Relaxation into ``v`` is
    dropped whenever the tentative distance is not strictly below ``bound[v]``.
    The grown set is closed under shortest-path prefixes, so distances are exact.
    """
    dist = {}
    parent = {}
    if not 0.0 < bound[root]:
        return dist, parent
    tent = {root: 0.0}
    par: dict = {root: None}
    heap = [(0.0, root)]
    adj = g._adj
    while heap:
        d, u = heapq.heappop(heap)
        if u in dist or d != tent[u]:
            continue
        dist[u] = d
        parent[u] = par[u]
        for x, w in adj[u]:
            if x in dist:
                continue
            nd = d + w
            if not nd < bound[x]:
                continue
            old = tent.get(x, INF)
            if nd < old:
                tent[x] = nd
                par[x] = u
                heapq.heappush(heap, (nd, x))
            elif nd == old and u < par[x]:
                par[x] = u
    return dist, parent
