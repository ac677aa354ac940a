"""Vertex-label distance oracles with a scikit-learn style estimator API.

Both estimators are fitted on a :class:`~labeloracle.graph.LabeledGraph` and
answer ``(vertex, label)`` queries: ``predict`` takes an ``(n_queries, 2)``
array and returns approximate distances; ``query`` / ``query_path`` return a
:class:`QueryResult` with the winning rule, probe count and optional path.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_graph, check_k, check_queries, check_vertex_label
from .graph import INF, LabeledGraph
from .hierarchy import (
    build_label_bunches,
    build_pair_set,
    build_pivot_label_tables,
    compute_bunches,
    compute_clusters,
    compute_last_level_label_distances,
    compute_pivots,
    sample_hierarchy,
)
from .pairwise import build_exact_pairwise


class CapabilityError(RuntimeError):
    """The oracle was fitted without the structures this call needs."""


@dataclass(frozen=True)
class QueryResult:
    """Answer to a ``(vertex, label)`` query.

    ``phase`` names the rule that produced the answer: ``self``,
    ``cluster-shortcut``, ``phase1:<level>``, ``phase2`` / ``phase2:<bunch vertex>``,
    ``phase3`` or ``none`` when the label is unreachable.
    """

    distance: float
    path: Optional[tuple]
    phase: str
    probes: int
    target: Optional[int] = None


def _resolve_seed(random_state) -> int:
    if random_state is None:
        return int(np.random.SeedSequence().entropy % (2**32))
    if isinstance(random_state, bool) or not isinstance(random_state, (int, np.integer)):
        raise ValueError(f"random_state must be an int or None, got {random_state!r}")
    return int(random_state)


class _LabelOracleBase(BaseEstimator):
    _core_items: tuple = ()

    def _store_graph_info(self, g: LabeledGraph):
        self.n_vertices_ = g.n
        self.n_labels_ = g.n_labels
        self.label_of_ = g.label_of
        self.label_sizes_ = tuple(len(c) for c in g.label_classes())
        self.graph_hash_ = g.content_hash()

    def _check_query(self, v, lam):
        check_is_fitted(self, "hierarchy_")
        return check_vertex_label(_Shape(self.n_vertices_, self.n_labels_), v, lam)

    def _trivial(self, v, lam, with_path) -> Optional[QueryResult]:
        if self.label_sizes_[lam] == 0:
            return QueryResult(INF, None, "none", 0)
        if self.label_of_[v] == lam:
            return QueryResult(0.0, (v,) if with_path else None, "self", 0, v)
        return None

    def predict(self, X) -> np.ndarray:
        """Approximate ``dist(v, V_lam)`` for each ``(v, lam)`` row of ``X``."""
        check_is_fitted(self, "hierarchy_")
        X = check_queries(X, _Shape(self.n_vertices_, self.n_labels_))
        return np.array([self.query(int(v), int(lam)).distance for v, lam in X], dtype=float)

    def query(self, v: int, lam: int) -> QueryResult:
        v, lam = self._check_query(v, lam)
        return self._answer(v, lam, with_path=False)

    def query_path(self, v: int, lam: int) -> QueryResult:
        v, lam = self._check_query(v, lam)
        return self._answer(v, lam, with_path=True)

    @property
    def k_effective_(self) -> int:
        return self.hierarchy_.k_effective

    def size_breakdown(self) -> dict:
        """Storage in words: 2 per table entry, 2 per pivot, 2 per pair."""
        check_is_fitted(self, "hierarchy_")
        return self._size_breakdown()

    def core_words(self) -> int:
        sizes = self.size_breakdown()
        return sum(sizes[name] for name in self._core_items)

    def _phase1(self, v, lam):
        """Yield ``(i, p_i(v), label-bunch entry or None, D_i)`` for levels ``i <= k-2``."""
        table = self.label_bunches_.tables[lam]
        piv, pdist = self.pivots_.pivot, self.pivots_.dist
        for i in range(self.k_effective_ - 1):
            p = piv[i][v]
            if p is None:
                continue
            entry = table.get(p)
            yield i, p, entry, (pdist[i][v] + entry[1] if entry is not None else INF)

    def _tree_path(self, root, a, b):
        tree = self.clusters_.trees.get(root)
        if tree is None or a not in tree or b not in tree:
            raise RuntimeError(f"cluster tree T({root}) does not contain {a} and {b}")
        return tuple(tree.path_through_root(a, b))

    def _pairwise_path(self, v, top, x):
        _, first = self.pairwise_.query(v, top)
        _, second = self.pairwise_.query(top, x)
        return tuple(first + second[1:])


@dataclass(frozen=True)
class _Shape:
    n: int
    n_labels: int


class PathReportingLabelOracle(_LabelOracleBase):
    """Path-reporting vertex-label oracle with stretch ``4k-5`` (``4k-3`` without shortcut).

    Parameters
    ----------
    k : int, default=2
        Number of sampled levels; must be at least 2.
    random_state : int or None, default=None
        Seed for the level sampling.
    use_cluster_shortcut : bool, default=True
        Test label clusters before the pivot phases. Disabling it raises the
        stretch bound from ``4k-5`` to ``4k-3``.

    Attributes
    ----------
    hierarchy_, pivots_, bunches_, clusters_, label_bunches_ :
        Preprocessing structures.
    last_level_ : LastLevelLabelDist
        Nearest vertex of every label for each top-level vertex.
    pair_set_ : PairSet
    pairwise_ : ExactPairwiseOracle
    stretch_bound_ : float
    """

    _core_items = ("item1_bunches_pivots", "item2_clusters", "item3_label_bunches")

    def __init__(self, k=2, random_state=None, use_cluster_shortcut=True):
        self.k = k
        self.random_state = random_state
        self.use_cluster_shortcut = use_cluster_shortcut

    def fit(self, X, y=None):
        g = check_graph(X)
        k = check_k(self.k, 2)
        seed = _resolve_seed(self.random_state)
        self._store_graph_info(g)
        self.hierarchy_ = sample_hierarchy(g, k, seed)
        self.pivots_ = compute_pivots(g, self.hierarchy_)
        self.clusters_ = compute_clusters(g, self.hierarchy_, self.pivots_)
        self.bunches_ = compute_bunches(g, self.hierarchy_, self.pivots_, self.clusters_)
        self.label_bunches_ = build_label_bunches(self.bunches_, g)
        self.last_level_ = compute_last_level_label_distances(g, self.hierarchy_)
        self.pair_set_ = build_pair_set(g, self.hierarchy_, self.pivots_, self.last_level_)
        self.pairwise_ = build_exact_pairwise(g, self.pair_set_)
        return self

    @property
    def stretch_bound_(self) -> float:
        """Guaranteed stretch for the fitted hierarchy and current shortcut setting."""
        ke = self.k_effective_
        if ke == 1:
            base = 1
        else:
            base = 4 * ke - 5 if self.use_cluster_shortcut else 4 * ke - 3
        return float(base) * self.pairwise_.stretch

    def _answer(self, v, lam, with_path):
        trivial = self._trivial(v, lam, with_path)
        if trivial is not None:
            return trivial
        probes = 0
        k = self.k_effective_
        if self.use_cluster_shortcut and k >= 2:
            probes += 1
            entry = self.clusters_.label_cluster[lam].get(v)
            if entry is not None:
                w, d = entry
                path = None
                if with_path:
                    path = tuple(self.clusters_.trees[w].path_to_root(v))
                return QueryResult(d, path, "cluster-shortcut", probes, w)

        best, best_tag, best_info = INF, "none", None
        for i, p, entry, D in self._phase1(v, lam):
            probes += 1
            if D < best:
                best, best_tag, best_info = D, f"phase1:{i}", (p, entry[0])

        top = self.pivots_.pivot[k - 1][v]
        if top is not None:
            probes += 1
            entry = self.last_level_.get(top, lam)
            if entry is not None:
                x = entry[0]
                probes += 1
                leg, _ = self.pairwise_.query(top, x)
                D = self.pivots_.dist[k - 1][v] + leg
                if D < best:
                    best, best_tag, best_info = D, "phase2", (top, x)

        if best_info is None:
            return QueryResult(INF, None, "none", probes)
        root, x = best_info
        path = None
        if with_path:
            if best_tag == "phase2":
                path = self._pairwise_path(v, root, x)
            else:
                path = self._tree_path(root, v, x)
        return QueryResult(best, path, best_tag, probes, x)

    def probe_bound(self, v: int) -> int:
        return 2 * self.k_effective_ + 3

    def _size_breakdown(self):
        n, k = self.n_vertices_, self.k_effective_
        return {
            "item1_bunches_pivots": 2 * self.bunches_.total() + 2 * k * n,
            "item2_clusters": 2 * sum(len(t) for t in self.clusters_.trees.values()),
            "item3_label_bunches": 2 * self.label_bunches_.total(),
            "label_clusters": 2 * sum(len(t) for t in self.clusters_.label_cluster),
            "item4_pairs": 2 * len(self.pair_set_),
            "pairwise_path_words": self.pairwise_.path_words(),
        }


class TwoSidedLabelOracle(_LabelOracleBase):
    """Vertex-label oracle with stretch ``2k-1`` using two-sided pivot tests.

    Parameters
    ----------
    k : int, default=2
        Number of sampled levels (``k >= 1``; ``k = 1`` stores the exact table).
    random_state : int or None, default=None
    path_reporting : bool, default=False
        Also store cluster trees, the pair set and a pairwise oracle so that
        :meth:`query_path` can return walks.
    """

    _core_items = (
        "item1_bunches_pivots",
        "item2_label_bunches",
        "item3_pivot_tables",
        "item4_last_level",
    )

    def __init__(self, k=2, random_state=None, path_reporting=False):
        self.k = k
        self.random_state = random_state
        self.path_reporting = path_reporting

    def fit(self, X, y=None):
        g = check_graph(X)
        k = check_k(self.k, 1)
        seed = _resolve_seed(self.random_state)
        self._store_graph_info(g)
        h = sample_hierarchy(g, k, seed)
        self.hierarchy_ = h
        self.pivots_ = compute_pivots(g, h)
        clusters = compute_clusters(g, h, self.pivots_)
        self.bunches_ = compute_bunches(g, h, self.pivots_, clusters)
        self.label_bunches_ = build_label_bunches(self.bunches_, g)
        self.pivot_tables_ = build_pivot_label_tables(self.pivots_, g, h)
        self.last_level_ = compute_last_level_label_distances(g, h)
        if self.path_reporting:
            self.clusters_ = clusters
            self.pair_set_ = build_pair_set(g, h, self.pivots_, self.last_level_)
            self.pairwise_ = build_exact_pairwise(g, self.pair_set_)
        else:
            self.clusters_ = None
            self.pair_set_ = None
            self.pairwise_ = None
        return self

    @property
    def stretch_bound_(self) -> float:
        return float(2 * self.k_effective_ - 1)

    @property
    def path_stretch_bound_(self) -> float:
        stretch = self.pairwise_.stretch if self.pairwise_ is not None else 1.0
        return self.stretch_bound_ * stretch

    def phase_values(self, v: int, lam: int) -> dict:
        """Every candidate the query considers: ``D`` per level and ``E`` per bunch vertex."""
        v, lam = self._check_query(v, lam)
        D, E, _, _ = self._candidates(v, lam)
        return {"D": D, "E": E}

    def _candidates(self, v, lam):
        k = self.k_effective_
        D = [INF] * k
        info = {}
        probes = 0
        for i, p, entry, value in self._phase1(v, lam):
            probes += 1
            D[i] = value
            if entry is not None:
                info[("D", i)] = (p, entry[0])

        E = {}
        tables = self.pivot_tables_.tables
        level_of = self.hierarchy_.level_of
        for vj, dj in self.bunches_.bunch[v].items():
            probes += 1
            entry = tables[level_of[vj]][lam].get(vj)
            if entry is not None:
                E[vj] = dj + entry[1]
                info[("E", vj)] = (vj, entry[0])
            else:
                E[vj] = INF

        top = self.pivots_.pivot[k - 1][v]
        if top is not None:
            probes += 1
            entry = self.last_level_.get(top, lam)
            if entry is not None:
                D[k - 1] = self.pivots_.dist[k - 1][v] + entry[1]
                info[("D", k - 1)] = (top, entry[0])
        return D, E, info, probes

    def _answer(self, v, lam, with_path):
        trivial = self._trivial(v, lam, with_path)
        if trivial is not None:
            return trivial
        if with_path and not self.path_reporting:
            raise CapabilityError("oracle was fitted with path_reporting=False")
        D, E, info, probes = self._candidates(v, lam)
        k = self.k_effective_
        i_star = min(range(k), key=lambda i: (D[i], i))
        best, key = D[i_star], ("D", i_star)
        for vj, value in E.items():
            if value < best:
                best, key = value, ("E", vj)
        if best == INF:
            return QueryResult(INF, None, "none", probes)
        root, x = info[key]
        if key[0] == "E":
            tag = f"phase2:{key[1]}"
        elif key[1] == k - 1:
            tag = "phase3"
        else:
            tag = f"phase1:{key[1]}"
        path = None
        if with_path:
            if tag == "phase3":
                path = self._pairwise_path(v, root, x)
            else:
                path = self._tree_path(root, v, x)
        return QueryResult(best, path, tag, probes, x)

    def probe_bound(self, v: int) -> int:
        return (self.k_effective_ - 1) + len(self.bunches_.bunch[v]) + 1

    def _size_breakdown(self):
        n, k = self.n_vertices_, self.k_effective_
        sizes = {
            "item1_bunches_pivots": 2 * self.bunches_.total() + 2 * k * n,
            "item2_label_bunches": 2 * self.label_bunches_.total(),
            "item3_pivot_tables": 2 * self.pivot_tables_.total(),
            "item4_last_level": 2 * self.last_level_.total(),
        }
        if self.path_reporting:
            sizes["clusters"] = 2 * sum(len(t) for t in self.clusters_.trees.values())
            sizes["pairs"] = 2 * len(self.pair_set_)
            sizes["pairwise_path_words"] = self.pairwise_.path_words()
        return sizes


def build_pr_oracle(g, k, seed=None, use_cluster_shortcut=True) -> PathReportingLabelOracle:
    return PathReportingLabelOracle(k=k, random_state=seed, use_cluster_shortcut=use_cluster_shortcut).fit(g)


def build_2k1_oracle(g, k, seed=None, path_reporting=False) -> TwoSidedLabelOracle:
    return TwoSidedLabelOracle(k=k, random_state=seed, path_reporting=path_reporting).fit(g)


def query_distance(o: PathReportingLabelOracle, v: int, lam: int) -> QueryResult:
    return o.query(v, lam)


def query_path(o: PathReportingLabelOracle, v: int, lam: int) -> QueryResult:
    return o.query_path(v, lam)


def query_2k1(o: TwoSidedLabelOracle, v: int, lam: int) -> QueryResult:
    return o.query(v, lam)


def query_2k1_path(o: TwoSidedLabelOracle, v: int, lam: int) -> QueryResult:
    return o.query_path(v, lam)
