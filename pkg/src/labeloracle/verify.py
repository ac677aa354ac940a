"""Ground truth, brute-force references and audits for the label oracles.

Every audit returns an :class:`AuditReport`; violations are collected, never
raised. The brute-force routines recompute each structure from its definition
using an all-pairs distance matrix and are meant for small graphs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .graph import INF, LabeledGraph, multi_source_dijkstra

MAX_LISTED_VIOLATIONS = 20


@dataclass
class AuditReport:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def fail(self, message: str):
        self.violations.append(message)

    def merge(self, other: "AuditReport") -> "AuditReport":
        self.checked += other.checked
        self.violations.extend(other.violations)
        return self

    def summary_line(self) -> str:
        parts = [
            f"AUDIT name={self.name}",
            f"status={'PASS' if self.passed else 'FAIL'}",
            f"checked={self.checked}",
            f"violations={len(self.violations)}",
        ]
        parts += [f"{k}={_fmt(v)}" for k, v in self.stats.items() if not isinstance(v, dict)]
        return " ".join(parts)

    def to_text(self) -> str:
        lines = [f"[{self.name}]", f"status = {'PASS' if self.passed else 'FAIL'}", f"checked = {self.checked}"]
        for key, value in self.stats.items():
            if isinstance(value, dict):
                lines.append(f"{key} = " + ", ".join(f"{a}:{_fmt(b)}" for a, b in value.items()))
            else:
                lines.append(f"{key} = {_fmt(value)}")
        lines.append(f"violations = {len(self.violations)}")
        lines += [f"  - {msg}" for msg in self.violations[:MAX_LISTED_VIOLATIONS]]
        if len(self.violations) > MAX_LISTED_VIOLATIONS:
            lines.append(f"  ... {len(self.violations) - MAX_LISTED_VIOLATIONS} more")
        return "\n".join(lines)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def all_pairs_distances(g: LabeledGraph) -> np.ndarray:
    """Floyd-Warshall distance matrix (``inf`` for disconnected pairs)."""
    D = np.full((g.n, g.n), np.inf)
    np.fill_diagonal(D, 0.0)
    for u, v, w in g.edges:
        if w < D[u, v]:
            D[u, v] = D[v, u] = w
    for k in range(g.n):
        np.minimum(D, D[:, k : k + 1] + D[k : k + 1, :], out=D)
    return D


@dataclass(frozen=True)
class GroundTruth:
    """Exact ``dist(v, V_lam)`` as ``dist[v][lam]`` and the nearest labeled vertex."""

    dist: tuple
    witness: tuple


def compute_ground_truth(g: LabeledGraph) -> GroundTruth:
    dist = [[INF] * g.n_labels for _ in range(g.n)]
    witness = [[None] * g.n_labels for _ in range(g.n)]
    for lam, members in enumerate(g.label_classes()):
        if not members:
            continue
        res = multi_source_dijkstra(g, members)
        for v in range(g.n):
            dist[v][lam] = res.dist[v]
            witness[v][lam] = res.source_of[v]
    return GroundTruth(tuple(map(tuple, dist)), tuple(map(tuple, witness)))


def sweep(oracle, with_path: bool = False) -> list:
    """Answer every ``(v, lam)`` query; returns ``(v, lam, QueryResult)`` triples."""
    # internal entry point: inputs are in range by construction
    answer = oracle._answer
    return [
        (v, lam, answer(v, lam, with_path))
        for v in range(oracle.n_vertices_)
        for lam in range(oracle.n_labels_)
    ]


def audit_stretch(oracle, gt: GroundTruth, bound: Optional[float] = None, results=None) -> AuditReport:
    """Check ``gt <= answer <= bound * gt`` on every query.

    A zero ground truth counts as stretch 1.0 when answered exactly and as a
    violation otherwise; an unreachable label must be answered with infinity.
    """
    bound = oracle.stretch_bound_ if bound is None else bound
    results = sweep(oracle) if results is None else results
    report = AuditReport("stretch")
    ratios = []
    under = 0
    for v, lam, res in results:
        truth = gt.dist[v][lam]
        ans = res.distance
        report.checked += 1
        if truth == INF:
            if ans != INF:
                report.fail(f"({v},{lam}) unreachable but answered {ans}")
            continue
        if ans < truth:
            under += 1
            report.fail(f"({v},{lam}) underestimates: {ans} < {truth}")
            continue
        if truth == 0:
            if ans != 0:
                report.fail(f"({v},{lam}) truth 0 but answered {ans}")
                continue
            ratios.append(1.0)
            continue
        if ans > bound * truth:
            report.fail(f"({v},{lam}) stretch {ans / truth:.4f} > {bound} ({ans} vs {truth})")
        ratios.append(ans / truth)
    arr = np.array(ratios) if ratios else np.array([1.0])
    report.stats.update(
        bound=float(bound),
        max_stretch=float(arr.max()),
        mean_stretch=float(arr.mean()),
        p50_stretch=float(np.percentile(arr, 50)),
        p90_stretch=float(np.percentile(arr, 90)),
        p99_stretch=float(np.percentile(arr, 99)),
        underestimates=under,
    )
    return report


def check_path(g: LabeledGraph, v: int, lam: int, distance: float, path) -> Optional[str]:
    """Replay ``path`` in ``g``; returns a description of the first problem, or None."""
    if distance == INF:
        return None if path is None else "path reported for an infinite answer"
    if not path:
        return "missing path"
    if path[0] != v:
        return f"path starts at {path[0]}, not {v}"
    if g.label_of[path[-1]] != lam:
        return f"path ends at {path[-1]} with label {g.label_of[path[-1]]}"
    total = 0.0
    for a, b in zip(path, path[1:]):
        w = g.weight(a, b)
        if w is None:
            return f"({a},{b}) is not an edge"
        total += w
    if total != distance:
        return f"path weight {total} != reported {distance}"
    return None


def audit_paths(oracle, g: LabeledGraph, results=None) -> AuditReport:
    results = sweep(oracle, with_path=True) if results is None else results
    report = AuditReport("paths")
    phases = {}
    for v, lam, res in results:
        report.checked += 1
        key = res.phase.split(":", 1)[0]
        phases[key] = phases.get(key, 0) + 1
        problem = check_path(g, v, lam, res.distance, res.path)
        if problem:
            report.fail(f"({v},{lam}) [{res.phase}] {problem}")
    report.stats["phases"] = dict(sorted(phases.items()))
    return report


def size_reference(oracle) -> float:
    """``k * n * l^(1/k)`` with the requested ``k``."""
    k = oracle.hierarchy_.k_requested
    return k * oracle.n_vertices_ * max(oracle.n_labels_, 1) ** (1.0 / k)


def audit_size(oracle, limit: float = 8.0) -> AuditReport:
    report = AuditReport("size")
    sizes = oracle.size_breakdown()
    core = oracle.core_words()
    ref = size_reference(oracle)
    constant = core / ref if ref else 0.0
    report.checked = 1
    report.stats.update(words=dict(sizes), core_words=core, reference=ref, constant=constant, limit=limit)
    if constant > limit:
        report.fail(f"core words {core} exceed {limit} * k*n*l^(1/k) = {limit * ref:.1f}")
    tables = getattr(oracle, "pivot_tables_", None)
    if tables is not None:
        bound = oracle.hierarchy_.k_effective * oracle.n_vertices_
        report.stats["pivot_table_entries"] = tables.total()
        if tables.total() > bound:
            report.fail(f"sum |P_i(lam)| = {tables.total()} > k*n = {bound}")
    return report


def audit_probes(oracle, results=None) -> AuditReport:
    """Per-query probe bounds: the oracle's own bound plus, for the two-sided
    oracle, the high-probability cap ``16 l^(1/k) ln n + k``."""
    results = sweep(oracle) if results is None else results
    report = AuditReport("probes")
    k = oracle.hierarchy_.k_requested
    n = oracle.n_vertices_
    cap = None
    if hasattr(oracle, "pivot_tables_") and oracle.pivot_tables_ is not None:
        cap = 16 * max(oracle.n_labels_, 1) ** (1.0 / k) * math.log(max(n, 2)) + k
    hist = {}
    for v, lam, res in results:
        report.checked += 1
        hist[res.probes] = hist.get(res.probes, 0) + 1
        limit = oracle.probe_bound(v)
        if res.probes > limit:
            report.fail(f"({v},{lam}) used {res.probes} probes > {limit}")
        if cap is not None and res.probes > cap:
            report.fail(f"({v},{lam}) used {res.probes} probes > cap {cap:.1f}")
    counts = np.repeat(list(hist), list(hist.values())) if hist else np.array([0])
    report.stats.update(mean_probes=float(counts.mean()), max_probes=int(counts.max()))
    report.stats["histogram"] = dict(sorted(hist.items()))
    return report


def bunch_size_stats(bunches) -> dict:
    sizes = np.array(bunches.sizes(), dtype=float)
    return {"mean": float(sizes.mean()), "max": int(sizes.max()) if sizes.size else 0}


def _in_ball(x, bunch_of_u: dict, level_of, top_level: int) -> bool:
    # x in B(u) = B~(u) ∪ A_{k-1}
    return x is not None and (level_of[x] >= top_level or x in bunch_of_u)


def check_lemmas(g, hierarchy, pivots, bunches, gt: GroundTruth, apsp=None) -> AuditReport:
    """Certify the one-sided and two-sided pivot lemmas on every ``(v, lam(v))`` pair.

    Checks, with ``u = lam(v)`` and ``delta = dist(u, v)``:

    * one-sided: ``j`` minimal with ``p_j(v) in B(u)``; ``dist(v, p_i(v)) <= 2 i delta``
      for ``i <= j`` and ``dist(v, p_j(v)) + dist(u, p_j(v)) <= (4j+1) delta <= (4k-3) delta``;
    * two-sided: ``i`` minimal with ``p_i(v) in B(u)`` or ``p_i(u) in B(v)``; both
      pivots within ``j delta`` for ``j <= i`` and
      ``dist(v, p_i(v)) + dist(p_i(v), u) <= (2i+1) delta``;
    * ``p_i(v) in B(v)`` for all ``v, i``.
    """
    apsp = all_pairs_distances(g) if apsp is None else apsp
    k = hierarchy.k_effective
    top = k - 1
    level_of = hierarchy.level_of
    piv, pd = pivots.pivot, pivots.dist
    B = bunches.bunch
    report = AuditReport("lemmas")
    counts = {"lemma_4k3": 0, "lemma_2k1": 0, "claim_v_in_B": 0}

    for v in range(g.n):
        for i in range(k):
            counts["claim_v_in_B"] += 1
            p = piv[i][v]
            if p is not None and not _in_ball(p, B[v], level_of, top):
                report.fail(f"claim v-in-B: p_{i}({v})={p} not in B({v})")

    seen = set()
    for v in range(g.n):
        for lam in range(g.n_labels):
            u = gt.witness[v][lam]
            if u is None or gt.dist[v][lam] == INF or (v, u) in seen:
                continue
            seen.add((v, u))
            delta = apsp[u, v]

            counts["lemma_4k3"] += 1
            j = next((i for i in range(k) if _in_ball(piv[i][v], B[u], level_of, top)), None)
            if j is None:
                report.fail(f"4k-3: no pivot of {v} in B({u})")
            else:
                for i in range(j + 1):
                    if pd[i][v] > 2 * i * delta:
                        report.fail(f"4k-3 induction: dist({v},p_{i})={pd[i][v]} > {2 * i}*{delta}")
                lhs = pd[j][v] + apsp[u, piv[j][v]]
                if lhs > (4 * j + 1) * delta or lhs > (4 * k - 3) * delta:
                    report.fail(f"4k-3: ({v},{u}) j={j} lhs={lhs} delta={delta}")

            counts["lemma_2k1"] += 1
            i2 = next(
                (
                    i
                    for i in range(k)
                    if _in_ball(piv[i][v], B[u], level_of, top) or _in_ball(piv[i][u], B[v], level_of, top)
                ),
                None,
            )
            if i2 is None:
                report.fail(f"2k-1: no qualifying index for ({v},{u})")
                continue
            for j2 in range(i2 + 1):
                if pd[j2][v] > j2 * delta or pd[j2][u] > j2 * delta:
                    report.fail(f"2k-1 induction: ({v},{u}) level {j2}")
            lhs = pd[i2][v] + apsp[piv[i2][v], u]
            if lhs > (2 * i2 + 1) * delta:
                report.fail(f"2k-1: ({v},{u}) i={i2} lhs={lhs} > {(2 * i2 + 1)}*{delta}")
    report.checked = sum(counts.values())
    report.stats.update(counts)
    return report


def check_cluster_claims(oracle, gt: GroundTruth) -> AuditReport:
    """Label-cluster shortcut is exact; outside it ``dist(v, p_1(v)) <= dist(v, lam(v))``."""
    report = AuditReport("cluster_claims")
    if oracle.hierarchy_.k_effective < 2:
        return report
    lc = oracle.clusters_.label_cluster
    pd1 = oracle.pivots_.dist[1]
    for v in range(oracle.n_vertices_):
        for lam in range(oracle.n_labels_):
            truth = gt.dist[v][lam]
            if truth == INF:
                continue
            report.checked += 1
            entry = lc[lam].get(v)
            if entry is not None:
                if entry[1] != truth:
                    report.fail(f"shortcut ({v},{lam}) gives {entry[1]} != {truth}")
            elif pd1[v] > truth:
                report.fail(f"claim C1: dist({v},p_1)={pd1[v]} > {truth} for label {lam}")
    return report


def check_duality(oracle) -> AuditReport:
    report = AuditReport("duality")
    report.checked = 1
    clusters = sum(len(t) for t in oracle.clusters_.trees.values())
    bunches = oracle.bunches_.total()
    report.stats.update(cluster_total=clusters, bunch_total=bunches)
    if clusters != bunches:
        report.fail(f"sum |C(u)| = {clusters} != sum |B~(v)| = {bunches}")
    return report


def check_case_coverage(oracle, gt: GroundTruth) -> AuditReport:
    """Every two-sided query is certified by the case that applies to it.

    With ``u = lam(v)``, ``i_v`` / ``i_u`` the first levels whose pivot of one side
    lies in the other side's bunch, the named candidate (``D_i``, ``E_j`` or
    ``D_{k-1}``) must be within ``(2k-1) * dist(u, v)``.
    """
    report = AuditReport("case_coverage")
    h, piv = oracle.hierarchy_, oracle.pivots_.pivot
    k, top, level_of = h.k_effective, h.k_effective - 1, h.level_of
    B = oracle.bunches_.bunch
    cases = {1: 0, 2: 0, 3: 0, 4: 0}
    for v in range(oracle.n_vertices_):
        for lam in range(oracle.n_labels_):
            delta = gt.dist[v][lam]
            if delta == INF or oracle.label_of_[v] == lam:
                continue
            u = gt.witness[v][lam]
            report.checked += 1
            i_v = next(i for i in range(k) if _in_ball(piv[i][v], B[u], level_of, top))
            i_u = next(i for i in range(k) if _in_ball(piv[i][u], B[v], level_of, top))
            D, E, _, _ = oracle._candidates(v, lam)
            if i_v <= i_u:
                case = 1 if level_of[piv[i_v][v]] < top else 3
                value = D[i_v] if case == 1 else D[k - 1]
            else:
                vj = piv[i_u][u]
                case = 2 if level_of[vj] < top else 4
                value = E.get(vj, INF) if case == 2 else D[k - 1]
            cases[case] += 1
            if value > (2 * k - 1) * delta:
                report.fail(f"case {case} ({v},{lam}): candidate {value} > {2 * k - 1}*{delta}")
    report.stats["cases"] = cases
    return report


@dataclass
class BruteForce:
    pivot: list
    pivot_dist: list
    bunch: list
    cluster: dict
    label_bunch: list
    label_cluster: list
    pivot_tables: list
    last_level: dict


def _argmin(cands):
    # cands: iterable of (dist, id); returns (id, dist) or None
    best = min(cands, default=None)
    if best is None or best[0] == INF:
        return None
    return best[1], best[0]


def brute_force_structures(g: LabeledGraph, hierarchy, apsp=None) -> BruteForce:
    """Recompute every preprocessing structure straight from its definition."""
    apsp = all_pairs_distances(g) if apsp is None else apsp
    n, k = g.n, hierarchy.k_effective
    levels = hierarchy.levels
    level_of = hierarchy.level_of
    dA = [[min((apsp[v, u] for u in levels[i]), default=INF) for v in range(n)] for i in range(k)]
    dA.append([INF] * n)

    pivot = [[None] * n for _ in range(k)]
    for v in range(n):
        for i in range(k - 1, -1, -1):
            if i < k - 1 and dA[i][v] == dA[i + 1][v]:
                pivot[i][v] = pivot[i + 1][v]
            else:
                best = _argmin((apsp[v, u], u) for u in levels[i])
                pivot[i][v] = best[0] if best else None

    bunch = [dict() for _ in range(n)]
    cluster = {}
    for u in range(n):
        i = level_of[u]
        if i >= k - 1:
            continue
        cluster[u] = {}
        for v in range(n):
            if apsp[u, v] < dA[i + 1][v]:
                cluster[u][v] = float(apsp[u, v])
                bunch[v][u] = float(apsp[u, v])

    label_bunch = [dict() for _ in range(g.n_labels)]
    label_cluster = [dict() for _ in range(g.n_labels)]
    classes = g.label_classes()
    for lam, members in enumerate(classes):
        for u in sorted({u for x in members for u in bunch[x]}):
            label_bunch[lam][u] = _argmin((apsp[u, x], x) for x in members if u in bunch[x])
        if k >= 2:
            roots = [u for u in members if level_of[u] == 0]
            for v in range(n):
                hit = _argmin((apsp[v, u], u) for u in roots if v in cluster[u])
                if hit is not None:
                    label_cluster[lam][v] = hit

    pivot_tables = []
    for i in range(k - 1):
        row = []
        for members in classes:
            table = {}
            for y in sorted({pivot[i][x] for x in members} - {None}):
                table[y] = _argmin((apsp[x, y], x) for x in members if pivot[i][x] == y)
            row.append(table)
        pivot_tables.append(row)

    last_level = {}
    for u in levels[k - 1]:
        last_level[u] = {}
        for lam, members in enumerate(classes):
            hit = _argmin((apsp[u, x], x) for x in members)
            if hit is not None:
                last_level[u][lam] = hit
    return BruteForce(
        pivot, [list(map(float, r)) for r in dA[:k]], bunch, cluster, label_bunch, label_cluster, pivot_tables, last_level
    )


def _as_float_table(t: dict) -> dict:
    return {key: (w, float(d)) for key, (w, d) in t.items()}


def compare_structures(oracle, ref: BruteForce) -> AuditReport:
    """Entry-for-entry comparison of a fitted oracle against :func:`brute_force_structures`."""
    report = AuditReport("structures")

    def same(name, got, want):
        report.checked += 1
        if got != want:
            report.fail(f"{name} differs")

    k = oracle.hierarchy_.k_effective
    same("pivots", [list(r) for r in oracle.pivots_.pivot], ref.pivot)
    same("pivot distances", [list(map(float, r)) for r in oracle.pivots_.dist], ref.pivot_dist)
    same("bunches", [dict(b) for b in oracle.bunches_.bunch], ref.bunch)
    same("label bunches", [_as_float_table(t) for t in oracle.label_bunches_.tables], ref.label_bunch)
    same("last-level label distances", {u: _as_float_table(r) for u, r in oracle.last_level_.table.items()}, ref.last_level)
    clusters = getattr(oracle, "clusters_", None)
    if clusters is not None:
        same("clusters", {u: dict(t.dist) for u, t in clusters.trees.items()}, ref.cluster)
        same("label clusters", [_as_float_table(t) for t in clusters.label_cluster], ref.label_cluster)
    tables = getattr(oracle, "pivot_tables_", None)
    if tables is not None:
        got = [[_as_float_table(t) for t in row] for row in tables.tables]
        same("pivot label tables", got, ref.pivot_tables)
    report.stats["k_effective"] = k
    return report


def check_tree_exactness(clusters, g: LabeledGraph) -> AuditReport:
    """Every tree path ``v -> root`` in ``T(u)`` weighs exactly the stored distance."""
    report = AuditReport("tree_exactness")
    for u, tree in clusters.trees.items():
        for v, d in tree.dist.items():
            report.checked += 1
            path = tree.path_to_root(v)
            total = 0.0
            for a, b in zip(path, path[1:]):
                w = g.weight(a, b)
                if w is None:
                    report.fail(f"T({u}) uses non-edge ({a},{b})")
                    break
                total += w
            else:
                if total != d:
                    report.fail(f"T({u}) path to {v} weighs {total} != {d}")
    return report
