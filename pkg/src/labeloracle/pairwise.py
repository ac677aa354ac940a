"""Pair-restricted path-reporting distance oracles."""
from __future__ import annotations

import heapq
from abc import ABC, abstractmethod
from collections import Counter, defaultdict

from .graph import INF, LabeledGraph
from .hierarchy import PairSet


class MissingPairError(KeyError):
    """The queried pair was never registered; indicates a preprocessing bug."""


class DisconnectedPairError(ValueError):
    pass


class PairwisePathOracle(ABC):
    """Answers ``(a, b)`` only for a prescribed pair set.

    Implementations guarantee ``dist(a, b) <= length <= stretch * dist(a, b)`` and
    return a walk from ``a`` to ``b`` whose weight equals the reported length.
    """

    stretch: float

    @abstractmethod
    def query(self, a: int, b: int) -> tuple:
        """Return ``(length, path)`` with ``path`` oriented from ``a`` to ``b``."""

    @abstractmethod
    def pairs(self):
        """Iterate over the stored canonical pairs."""


class ExactPairwiseOracle(PairwisePathOracle):
    """Stretch-1 oracle that stores one explicit shortest path per pair."""

    stretch = 1.0

    def __init__(self, table: dict):
        # (a, b) with a <= b -> (length, path from a to b)
        self._table = table

    def query(self, a, b):
        if a <= b:
            entry = self._table.get((a, b))
            if entry is None:
                raise MissingPairError((a, b))
            return entry[0], list(entry[1])
        entry = self._table.get((b, a))
        if entry is None:
            raise MissingPairError((a, b))
        return entry[0], list(entry[1][::-1])

    def __contains__(self, pair):
        a, b = pair
        return ((a, b) if a <= b else (b, a)) in self._table

    def __len__(self):
        return len(self._table)

    def pairs(self):
        return iter(self._table)

    def path_words(self) -> int:
        return sum(len(p) for _, p in self._table.values())

    def to_payload(self):
        return [[a, b, length, list(path)] for (a, b), (length, path) in sorted(self._table.items())]

    @classmethod
    def from_payload(cls, p):
        return cls({(a, b): (length, tuple(path)) for a, b, length, path in p})


def _targeted_dijkstra(g: LabeledGraph, source: int, targets: set) -> tuple:
    # stops once every target is settled
    dist = {source: 0.0}
    parent = {source: None}
    done = set()
    heap = [(0.0, source)]
    remaining = set(targets)
    while heap and remaining:
        d, u = heapq.heappop(heap)
        if u in done or d != dist[u]:
            continue
        done.add(u)
        remaining.discard(u)
        for x, w in g.neighbors(u):
            if x in done:
                continue
            nd = d + w
            old = dist.get(x, INF)
            if nd < old:
                dist[x] = nd
                parent[x] = u
                heapq.heappush(heap, (nd, x))
            elif nd == old and u < parent[x]:
                parent[x] = u
    return dist, parent, done


def build_exact_pairwise(g: LabeledGraph, pairs) -> ExactPairwiseOracle:
    """Store an exact shortest path for every pair.

    Pairs are grouped by their more frequent endpoint so that one truncated
    Dijkstra run serves a whole group.
    """
    keys = list(pairs.pairs) if isinstance(pairs, PairSet) else [
        (a, b) if a <= b else (b, a) for a, b in pairs
    ]
    freq = Counter()
    for a, b in keys:
        freq[a] += 1
        freq[b] += 1
    groups = defaultdict(list)
    for a, b in keys:
        src = a if (-freq[a], a) <= (-freq[b], b) else b
        groups[src].append((a, b))
    table = {}
    for src in sorted(groups):
        targets = {a if b == src else b for a, b in groups[src]}
        dist, parent, done = _targeted_dijkstra(g, src, targets)
        for a, b in groups[src]:
            t = b if a == src else a
            if t not in done:
                raise DisconnectedPairError(f"pair ({a}, {b}) is disconnected")
            path = [t]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            # path now runs t -> src
            if path[0] != a:
                path.reverse()
            table[(a, b)] = (dist[t], tuple(path))
    return ExactPairwiseOracle(dict(sorted(table.items())))


def pairwise_query(o: PairwisePathOracle, a: int, b: int) -> tuple:
    return o.query(a, b)
