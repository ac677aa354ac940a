"""Sampled level sets and everything derived from them.

Levels ``A_0 = V ⊇ A_1 ⊇ ... ⊇ A_{k-1}``, pivots, bunches, clusters with their
shortest-path trees, per-label tables and the pair set handed to the pairwise
oracle. All witness choices break distance ties by the smaller vertex id.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph import INF, LabeledGraph, multi_source_dijkstra, pruned_dijkstra


def _better(cand: tuple, cur: Optional[tuple]) -> bool:
    # (dist, witness) lexicographic; ``cur`` stored as (witness, dist)
    return cur is None or (cand[0], cand[1]) < (cur[1], cur[0])


def _table_payload(table: dict) -> list:
    return [[key, w, d] for key, (w, d) in sorted(table.items())]


def _table_from(rows: list) -> dict:
    return {key: (w, d) for key, w, d in rows}


@dataclass(frozen=True)
class Hierarchy:
    k_requested: int
    k_effective: int
    levels: tuple
    level_of: tuple
    sample_prob: float
    seed: Optional[int]

    def in_level(self, v: int, i: int) -> bool:
        return self.level_of[v] >= i

    @property
    def top(self) -> tuple:
        """The last nonempty level ``A_{k-1}``."""
        return self.levels[-1]

    def to_payload(self):
        return {
            "k_requested": self.k_requested,
            "k_effective": self.k_effective,
            "level_of": list(self.level_of),
            "sample_prob": self.sample_prob,
            "seed": self.seed,
        }

    @classmethod
    def from_payload(cls, p):
        level_of = tuple(p["level_of"])
        levels = tuple(
            tuple(v for v, lv in enumerate(level_of) if lv >= i) for i in range(p["k_effective"])
        )
        return cls(p["k_requested"], p["k_effective"], levels, level_of, p["sample_prob"], p["seed"])


def sample_hierarchy(g: LabeledGraph, k: int, seed: Optional[int] = None) -> Hierarchy:
    """Keep each vertex of ``A_i`` in ``A_{i+1}`` with probability ``l^(-1/k)``.

    Sampling stops at the first empty level, which then defines ``k_effective``.
    """
    if int(k) != k or k < 1:
        raise ValueError(f"k must be an integer >= 1, got {k!r}")
    k = int(k)
    q = float(max(g.n_labels, 1)) ** (-1.0 / k)
    rng = np.random.default_rng(seed)
    current = tuple(range(g.n))
    levels = [current]
    for _ in range(k - 1):
        draws = rng.random(len(current))
        current = tuple(v for v, r in zip(current, draws) if r < q)
        if not current:
            break
        levels.append(current)
    if g.n == 0:
        levels = [()]
    level_of = [0] * g.n
    for i, lv in enumerate(levels):
        for v in lv:
            level_of[v] = i
    return Hierarchy(k, len(levels), tuple(levels), tuple(level_of), q, seed)


def hierarchy_from_levels(g: LabeledGraph, levels, k: Optional[int] = None) -> Hierarchy:
    """Wrap explicitly chosen levels ``A_1 ⊇ A_2 ⊇ ...`` (``A_0 = V`` is implied)."""
    sets = [tuple(range(g.n))] + [tuple(sorted(set(lv))) for lv in levels]
    for upper, lower in zip(sets, sets[1:]):
        if not set(lower) <= set(upper):
            raise ValueError("levels must be nested")
    while len(sets) > 1 and not sets[-1]:
        sets.pop()
    k = len(sets) if k is None else k
    level_of = [0] * g.n
    for i, lv in enumerate(sets):
        for v in lv:
            level_of[v] = i
    q = float(max(g.n_labels, 1)) ** (-1.0 / k)
    return Hierarchy(k, len(sets), tuple(sets), tuple(level_of), q, None)


@dataclass(frozen=True)
class PivotTable:
    """``pivot[i][v]`` is ``p_i(v)`` (None if ``A_i`` is unreachable), ``dist[i][v] = dist(v, A_i)``."""

    pivot: tuple
    dist: tuple

    def level_dist(self, i: int, v: int) -> float:
        """``dist(v, A_i)`` with ``A_k`` taken as empty."""
        return self.dist[i][v] if i < len(self.dist) else INF

    def to_payload(self):
        return {"pivot": [list(r) for r in self.pivot], "dist": [list(r) for r in self.dist]}

    @classmethod
    def from_payload(cls, p):
        return cls(tuple(tuple(r) for r in p["pivot"]), tuple(tuple(r) for r in p["dist"]))


def compute_pivots(g: LabeledGraph, h: Hierarchy) -> PivotTable:
    """Nearest level vertex per level, with the top-down consistency rule.

    When ``dist(v, A_i) == dist(v, A_{i+1})`` the higher pivot is inherited, so a
    pivot that lies in ``A_{k-1}`` is always ``p_{k-1}(v)``.
    """
    k = h.k_effective
    dists, seeds = [], []
    for i in range(k):
        if i == 0:
            dists.append([0.0] * g.n)
            seeds.append(list(range(g.n)))
        else:
            res = multi_source_dijkstra(g, h.levels[i])
            dists.append(res.dist)
            seeds.append(res.source_of)
    pivot = [None] * k
    pivot[k - 1] = list(seeds[k - 1])
    for i in range(k - 2, -1, -1):
        row = list(seeds[i])
        upper, di, du = pivot[i + 1], dists[i], dists[i + 1]
        for v in range(g.n):
            if di[v] == du[v]:
                row[v] = upper[v]
        pivot[i] = row
    return PivotTable(tuple(tuple(r) for r in pivot), tuple(tuple(r) for r in dists))


@dataclass
class ClusterTree:
    """Shortest-path tree ``T(u)`` spanning ``C(u)``; exact root distances."""

    root: int
    dist: dict
    parent: dict

    def __contains__(self, v):
        return v in self.dist

    def __len__(self):
        return len(self.dist)

    def path_to_root(self, v: int) -> list:
        path = [v]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
        return path

    def path_through_root(self, a: int, b: int) -> list:
        """Walk ``a -> root -> b`` along tree edges."""
        up = self.path_to_root(a)
        down = self.path_to_root(b)
        down.reverse()
        return up + down[1:]


@dataclass(frozen=True)
class ClusterForest:
    trees: dict
    label_cluster: tuple

    def to_payload(self):
        return {
            "trees": [
                [u, [[v, t.parent[v] if t.parent[v] is not None else -1, t.dist[v]] for v in sorted(t.dist)]]
                for u, t in sorted(self.trees.items())
            ],
            "label_cluster": [_table_payload(t) for t in self.label_cluster],
        }

    @classmethod
    def from_payload(cls, p):
        trees = {}
        for u, rows in p["trees"]:
            trees[u] = ClusterTree(
                u, {v: d for v, _, d in rows}, {v: (par if par >= 0 else None) for v, par, _ in rows}
            )
        return cls(trees, tuple(_table_from(r) for r in p["label_cluster"]))


def _grow_clusters(g: LabeledGraph, h: Hierarchy, p: PivotTable) -> dict:
    trees = {}
    for u in range(g.n):
        i = h.level_of[u]
        if i >= h.k_effective - 1:
            continue
        bound = p.dist[i + 1]
        dist, parent = pruned_dijkstra(g, u, bound)
        trees[u] = ClusterTree(u, dist, parent)
    return trees


def compute_clusters(g: LabeledGraph, h: Hierarchy, p: PivotTable) -> ClusterForest:
    """``C(u)`` and ``T(u)`` for every ``u`` outside ``A_{k-1}``, plus label clusters.

    The label cluster ``C(lam)`` unions ``C(u)`` over first-level ``u`` of label
    ``lam``; each member keeps its nearest such ``u``.
    """
    trees = _grow_clusters(g, h, p)
    label_cluster = [dict() for _ in range(g.n_labels)]
    if h.k_effective >= 2:
        for u in sorted(trees):
            if h.level_of[u] != 0:
                continue
            table = label_cluster[g.label_of[u]]
            for v, d in trees[u].dist.items():
                if _better((d, u), table.get(v)):
                    table[v] = (u, d)
    label_cluster = tuple(dict(sorted(t.items())) for t in label_cluster)
    return ClusterForest(trees, label_cluster)


@dataclass(frozen=True)
class BunchSet:
    """``bunch[v]`` maps each ``u`` in ``B~(v)`` (ascending id) to ``dist(v, u)``."""

    bunch: tuple

    def sizes(self) -> list:
        return [len(b) for b in self.bunch]

    def total(self) -> int:
        return sum(len(b) for b in self.bunch)

    def to_payload(self):
        return [[[u, d] for u, d in b.items()] for b in self.bunch]

    @classmethod
    def from_payload(cls, p):
        return cls(tuple({u: d for u, d in rows} for rows in p))


def compute_bunches(g: LabeledGraph, h: Hierarchy, p: PivotTable, clusters: Optional[ClusterForest] = None) -> BunchSet:
    """Invert the clusters: ``u in B~(v)`` iff ``v in C(u)`` for ``u`` outside ``A_{k-1}``."""
    trees = clusters.trees if clusters is not None else _grow_clusters(g, h, p)
    bunch = [dict() for _ in range(g.n)]
    for u in sorted(trees):
        for v, d in trees[u].dist.items():
            bunch[v][u] = d
    return BunchSet(tuple(bunch))


@dataclass(frozen=True)
class LabelBunch:
    """Per label, ``u -> (lam_B(u), dist(u, lam_B(u)))`` over ``B~(lam)``."""

    tables: tuple

    def total(self) -> int:
        return sum(len(t) for t in self.tables)

    def to_payload(self):
        return [_table_payload(t) for t in self.tables]

    @classmethod
    def from_payload(cls, p):
        return cls(tuple(_table_from(r) for r in p))


def build_label_bunches(b: BunchSet, g: LabeledGraph) -> LabelBunch:
    tables = [dict() for _ in range(g.n_labels)]
    for x in range(g.n):
        table = tables[g.label_of[x]]
        for u, d in b.bunch[x].items():
            if _better((d, x), table.get(u)):
                table[u] = (x, d)
    return LabelBunch(tuple(dict(sorted(t.items())) for t in tables))


@dataclass(frozen=True)
class PivotLabelTables:
    """``tables[i][lam]`` maps ``y in P_i(lam)`` to ``(lam_{P_i}(y), dist)``."""

    tables: tuple

    def total(self) -> int:
        return sum(len(t) for row in self.tables for t in row)

    def to_payload(self):
        return [[_table_payload(t) for t in row] for row in self.tables]

    @classmethod
    def from_payload(cls, p):
        return cls(tuple(tuple(_table_from(r) for r in row) for row in p))


def build_pivot_label_tables(p: PivotTable, g: LabeledGraph, h: Hierarchy) -> PivotLabelTables:
    """Level-``i`` pivot images of each label class, ``i <= k-2``."""
    out = []
    for i in range(h.k_effective - 1):
        row = [dict() for _ in range(g.n_labels)]
        piv, pd = p.pivot[i], p.dist[i]
        for x in range(g.n):
            y = piv[x]
            if y is None:
                continue
            table = row[g.label_of[x]]
            if _better((pd[x], x), table.get(y)):
                table[y] = (x, pd[x])
        out.append(tuple(dict(sorted(t.items())) for t in row))
    return PivotLabelTables(tuple(out))


@dataclass(frozen=True)
class LastLevelLabelDist:
    """``table[u][lam] = (lam(u), dist(u, V_lam))`` for ``u`` in ``A_{k-1}``; unreachable labels absent."""

    table: dict

    def get(self, u: int, lam: int):
        row = self.table.get(u)
        return None if row is None else row.get(lam)

    def total(self) -> int:
        return sum(len(r) for r in self.table.values())

    def to_payload(self):
        return [[u, _table_payload(row)] for u, row in sorted(self.table.items())]

    @classmethod
    def from_payload(cls, p):
        return cls({u: _table_from(rows) for u, rows in p})


def compute_last_level_label_distances(g: LabeledGraph, h: Hierarchy) -> LastLevelLabelDist:
    top = h.top
    table = {u: {} for u in top}
    for lam, members in enumerate(g.label_classes()):
        if not members:
            continue
        res = multi_source_dijkstra(g, members)
        for u in top:
            d = res.dist[u]
            if d != INF:
                table[u][lam] = (res.source_of[u], d)
    return LastLevelLabelDist(table)


@dataclass(frozen=True)
class PairSet:
    """Unordered pairs ``(a, b)``, ``a <= b``, with exact distances.

    ``n_requested`` counts pair insertions before deduplication and before
    dropping unreachable pairs: ``n + |A_{k-1}| * l``.
    """

    pairs: dict
    n_requested: int

    def __len__(self):
        return len(self.pairs)

    def __contains__(self, pair):
        a, b = pair
        return ((a, b) if a <= b else (b, a)) in self.pairs

    def to_payload(self):
        return {"pairs": [[a, b, d] for (a, b), d in sorted(self.pairs.items())], "n_requested": self.n_requested}

    @classmethod
    def from_payload(cls, p):
        return cls({(a, b): d for a, b, d in p["pairs"]}, p["n_requested"])


def build_pair_set(g: LabeledGraph, h: Hierarchy, p: PivotTable, d: LastLevelLabelDist) -> PairSet:
    k = h.k_effective
    pairs = {}

    def add(a, b, dist):
        pairs[(a, b) if a <= b else (b, a)] = dist

    for v in range(g.n):
        top = p.pivot[k - 1][v]
        if top is not None:
            add(v, top, p.dist[k - 1][v])
    for u in h.top:
        for lam, (x, dist) in d.table[u].items():
            add(u, x, dist)
    return PairSet(dict(sorted(pairs.items())), g.n + len(h.top) * g.n_labels)
