"""Acceptance criteria 1-10, each checked at its stated tolerance.

The shared corpus: n=500, m=3000, integer weights 1..100, 50 seeds for every
(l, k) in {4, 16} x {2, 3}, plus l=64, k=4 for the two-sided oracle. Graph seed
and sampling seed are both the instance index. Only aggregated reports are kept.
"""
import copy
import math
from collections import defaultdict

import numpy as np
import pytest

from conftest import ACCEPTANCE_LOG, SMALL
from labeloracle import GenSpec, PathReportingLabelOracle, TwoSidedLabelOracle, generate
from labeloracle.hierarchy import (
    build_pair_set,
    compute_bunches,
    compute_last_level_label_distances,
    compute_pivots,
    sample_hierarchy,
)
from labeloracle.verify import (
    AuditReport,
    all_pairs_distances,
    audit_paths,
    audit_probes,
    audit_size,
    audit_stretch,
    brute_force_structures,
    check_duality,
    check_lemmas,
    compare_structures,
    compute_ground_truth,
    sweep,
)

SEEDS = range(50)
N, M, W = 500, 3000, 100
CONFIGS = {4: (2, 3), 16: (2, 3), 64: (4,)}


def corpus_graph(labels, seed, n=N, m=M):
    return generate(GenSpec(n=n, m=m, weight_max=W, labels=labels, seed=seed))


def record(criterion, ok, detail):
    line = f"ACCEPTANCE criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LOG.append(line)
    print(line)
    return ok


class Tally:
    def __init__(self):
        self.reports = defaultdict(lambda: None)
        self.max_stats = defaultdict(float)
        self.instances = defaultdict(int)

    def add(self, key, report, stat=None):
        if self.reports[key] is None:
            self.reports[key] = AuditReport(report.name)
        self.reports[key].merge(report)
        if stat is not None:
            self.max_stats[key] = max(self.max_stats[key], report.stats[stat])
        self.instances[key] += 1

    def violations(self, prefix):
        return [v for key, r in self.reports.items() if key[0] == prefix for v in r.violations]

    def checked(self, prefix):
        return sum(r.checked for key, r in self.reports.items() if key[0] == prefix)


@pytest.fixture(scope="module")
def corpus():
    t = Tally()
    for labels, ks in CONFIGS.items():
        for seed in SEEDS:
            g = corpus_graph(labels, seed)
            gt = compute_ground_truth(g)
            apsp = all_pairs_distances(g)

            exact = TwoSidedLabelOracle(k=1, random_state=seed).fit(g)
            t.add(("exact", labels), audit_stretch(exact, gt, bound=1.0), "max_stretch")

            for k in ks:
                ts = TwoSidedLabelOracle(k=k, random_state=seed, path_reporting=True).fit(g)
                res = sweep(ts, with_path=True)
                t.add(("stretch2k1", labels, k), audit_stretch(ts, gt, bound=2 * k - 1, results=res), "max_stretch")
                t.add(("paths", "2k1"), audit_paths(ts, g, results=res))
                t.add(("probes", "2k1", labels, k), audit_probes(ts, results=res), "max_probes")
                t.add(("size", "2k1", labels, k), audit_size(ts), "constant")
                t.add(("lemmas", labels, k), check_lemmas(g, ts.hierarchy_, ts.pivots_, ts.bunches_, gt, apsp))
                del res
                if labels == 64:
                    continue

                pr = PathReportingLabelOracle(k=k, random_state=seed).fit(g)
                assert pr.hierarchy_ == ts.hierarchy_
                res = sweep(pr, with_path=True)
                t.add(("stretchPR", labels, k, "shortcut"), audit_stretch(pr, gt, bound=4 * k - 5, results=res), "max_stretch")
                t.add(("paths", "pr"), audit_paths(pr, g, results=res))
                t.add(("probes", "pr", labels, k), audit_probes(pr, results=res), "max_probes")
                t.add(("size", "pr", labels, k), audit_size(pr), "constant")
                plain = copy.copy(pr)
                plain.use_cluster_shortcut = False
                res = sweep(plain, with_path=True)
                t.add(("stretchPR", labels, k, "plain"), audit_stretch(plain, gt, bound=4 * k - 3, results=res), "max_stretch")
                t.add(("paths", "pr-plain"), audit_paths(plain, g, results=res))
                t.add(("probes", "pr-plain", labels, k), audit_probes(plain, results=res), "max_probes")
                del res
    return t


def _summary(t, prefix):
    return ", ".join(
        f"{'/'.join(map(str, key[1:]))}: max {t.max_stats[key]:.3f}" for key in sorted(t.reports, key=str) if key[0] == prefix
    )


def test_criterion_1_stretch_path_reporting(corpus):
    bad = corpus.violations("stretchPR")
    ok = not bad and all(corpus.instances[k] == len(SEEDS) for k in corpus.reports if k[0] == "stretchPR")
    record(1, ok, f"{corpus.checked('stretchPR')} queries, {len(bad)} violations; {_summary(corpus, 'stretchPR')}")
    assert ok, bad[:10]


def test_criterion_2_stretch_two_sided(corpus):
    bad = corpus.violations("stretch2k1")
    record(2, not bad, f"{corpus.checked('stretch2k1')} queries, {len(bad)} violations; {_summary(corpus, 'stretch2k1')}")
    assert not bad, bad[:10]


def test_criterion_3_path_validity(corpus):
    bad = corpus.violations("paths")
    phases = defaultdict(int)
    for key, r in corpus.reports.items():
        if key[0] == "paths":
            phases[key[1]] = r.checked
    record(3, not bad, f"{corpus.checked('paths')} paths replayed ({dict(phases)}), {len(bad)} violations")
    assert not bad, bad[:10]


def test_criterion_4_exact_at_k1(corpus):
    bad = corpus.violations("exact")
    worst = max(corpus.max_stats[key] for key in corpus.reports if key[0] == "exact")
    small_bad = []
    for name, g, _ in SMALL:
        gt = compute_ground_truth(g)
        report = audit_stretch(TwoSidedLabelOracle(k=1, random_state=0).fit(g), gt, bound=1.0)
        small_bad += report.violations
        worst = max(worst, report.stats["max_stretch"])
    ok = not bad and not small_bad and worst == 1.0
    record(4, ok, f"{corpus.checked('exact')} corpus queries + {len(SMALL)} small graphs, max stretch {worst}")
    assert ok, (bad + small_bad)[:10]


def test_criterion_5_bunch_sizes():
    n, labels = 1000, 16
    lines, ok = [], True
    for k in (2, 3):
        sizes = []
        for seed in SEEDS:
            g = corpus_graph(labels, seed, n=n, m=6000)
            h = sample_hierarchy(g, k, seed)
            sizes.append(compute_bunches(g, h, compute_pivots(g, h)).sizes())
        sizes = np.array(sizes, dtype=float)
        mean_bound = 1.1 * (k - 1) * labels ** (1 / k)
        max_bound = 16 * labels ** (1 / k) * math.log(n)
        this_ok = sizes.mean() <= mean_bound and sizes.max() <= max_bound
        ok &= this_ok
        lines.append(f"k={k}: mean {sizes.mean():.3f} <= {mean_bound:.3f}, max {sizes.max():.0f} <= {max_bound:.1f}")
    record(5, ok, f"{len(SEEDS)} seeds, n={n}, l={labels}; " + "; ".join(lines))
    assert ok, lines


def test_criterion_6_sampling_and_pair_set_means():
    n, labels, seeds = 1000, 16, range(100)
    lines, ok = [], True
    for k in (2, 3):
        level_sizes, requested, stored = [], [], []
        for seed in seeds:
            g = corpus_graph(labels, seed, n=n, m=6000)
            h = sample_hierarchy(g, k, seed)
            level_sizes.append([len(h.levels[i]) if i < h.k_effective else 0 for i in range(k)])
            p = compute_pivots(g, h)
            ps = build_pair_set(g, h, p, compute_last_level_label_distances(g, h))
            requested.append(ps.n_requested)
            stored.append(len(ps))
        level_sizes = np.array(level_sizes, dtype=float)
        for i in range(k):
            col = level_sizes[:, i]
            expect = n * labels ** (-i / k)
            se = col.std(ddof=1) / math.sqrt(len(col))
            within = abs(col.mean() - expect) <= 3 * se if se > 0 else col.mean() == expect
            ok &= bool(within)
            lines.append(f"k={k} |A_{i}| {col.mean():.2f} vs {expect:.2f} (3SE {3 * se:.2f})")
        req = np.array(requested, dtype=float)
        expect = n + n * labels ** (1 / k)
        se = req.std(ddof=1) / math.sqrt(len(req))
        ok &= bool(abs(req.mean() - expect) <= 3 * se)
        lines.append(f"k={k} |P| {req.mean():.1f} vs {expect:.1f} (3SE {3 * se:.1f}; deduplicated mean {np.mean(stored):.1f})")
    record(6, ok, f"{len(seeds)} seeds, n={n}, l={labels}; " + "; ".join(lines))
    assert ok, lines


def test_criterion_7_size_accounting(corpus):
    bad = corpus.violations("size")
    worst = max(corpus.max_stats[key] for key in corpus.reports if key[0] == "size")
    extra = AuditReport("size")
    n, labels = 1000, 16
    for k in (2, 3, 4):
        for seed in range(20):
            g = corpus_graph(labels, seed, n=n, m=6000)
            for oracle in (PathReportingLabelOracle(k=k, random_state=seed), TwoSidedLabelOracle(k=k, random_state=seed)):
                report = audit_size(oracle.fit(g))
                extra.merge(report)
                worst = max(worst, report.stats["constant"])
    bad += extra.violations
    record(7, not bad, f"{corpus.checked('size') + extra.checked} builds, max words/(k n l^(1/k)) = {worst:.3f} <= 8, {len(bad)} violations")
    assert not bad, bad[:10]


def test_criterion_8_probe_counts(corpus):
    bad = corpus.violations("probes")
    worst_pr = max(corpus.max_stats[key] for key in corpus.reports if key[0] == "probes" and key[1] != "2k1")
    worst_2k1 = max(corpus.max_stats[key] for key in corpus.reports if key[0] == "probes" and key[1] == "2k1")
    record(8, not bad, f"{corpus.checked('probes')} queries; max probes path-reporting {worst_pr:.0f} (<= 2k+3), two-sided {worst_2k1:.0f}; {len(bad)} violations")
    assert not bad, bad[:10]


def test_criterion_9_lemma_certification(corpus):
    bad = list(corpus.violations("lemmas"))
    checked = corpus.checked("lemmas")
    small_checked = 0
    for name, g, k in SMALL:
        gt = compute_ground_truth(g)
        apsp = all_pairs_distances(g)
        for seed in range(5):
            for kk in sorted({1, 2, k, k + 1}):
                o = TwoSidedLabelOracle(k=kk, random_state=seed, path_reporting=True).fit(g)
                for report in (check_lemmas(g, o.hierarchy_, o.pivots_, o.bunches_, gt, apsp), check_duality(o)):
                    small_checked += report.checked
                    bad += [f"{name} seed={seed} k={kk}: {v}" for v in report.violations]
    record(9, not bad, f"{checked} corpus checks + {small_checked} exhaustive small-graph checks, {len(bad)} violations")
    assert not bad, bad[:10]


def test_criterion_10_brute_force_equivalence():
    bad, checked = [], 0
    for name, g, k in SMALL:
        apsp = all_pairs_distances(g)
        for seed in range(5):
            for kk in sorted({1, 2, k, k + 1}):
                oracles = [TwoSidedLabelOracle(k=kk, random_state=seed)]
                if kk >= 2:
                    oracles.append(PathReportingLabelOracle(k=kk, random_state=seed))
                for o in oracles:
                    o.fit(g)
                    report = compare_structures(o, brute_force_structures(g, o.hierarchy_, apsp))
                    checked += report.checked
                    bad += [f"{name} seed={seed} k={kk} {type(o).__name__}: {v}" for v in report.violations]
    record(10, not bad, f"{len(SMALL)} graphs x 5 seeds x several k, {checked} structure comparisons, {len(bad)} mismatches")
    assert not bad, bad[:10]
