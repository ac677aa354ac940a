import math
from dataclasses import replace

import pytest

from conftest import brute_label_distance, floyd_warshall
from labeloracle import GenSpec, LabeledGraph, PathReportingLabelOracle, TwoSidedLabelOracle, generate
from labeloracle.oracles import QueryResult
from labeloracle.verify import (
    AuditReport,
    audit_paths,
    audit_probes,
    audit_size,
    audit_stretch,
    check_case_coverage,
    check_cluster_claims,
    check_duality,
    check_lemmas,
    check_path,
    check_tree_exactness,
    compute_ground_truth,
    size_reference,
    sweep,
)


@pytest.fixture(scope="module")
def graph():
    return generate(GenSpec(n=60, m=160, labels=5, seed=6))


def test_ground_truth_matches_brute_force(graph):
    apsp = floyd_warshall(graph)
    gt = compute_ground_truth(graph)
    for v in range(graph.n):
        for lam in range(graph.n_labels):
            d = brute_label_distance(graph, apsp, v, lam)
            assert gt.dist[v][lam] == d
            w = gt.witness[v][lam]
            assert graph.label_of[w] == lam and apsp[v][w] == d


def test_check_path_cases():
    g = LabeledGraph.from_edges(3, [(0, 1, 2), (1, 2, 3)], [0, 0, 1])
    assert check_path(g, 0, 1, 5.0, (0, 1, 2)) is None
    assert "weight" in check_path(g, 0, 1, 4.0, (0, 1, 2))
    assert "not an edge" in check_path(g, 0, 1, 5.0, (0, 2))
    assert "starts" in check_path(g, 1, 1, 3.0, (0, 1, 2))
    assert "label" in check_path(g, 0, 1, 2.0, (0, 1))
    assert check_path(g, 0, 1, math.inf, None) is None
    assert check_path(g, 0, 1, 5.0, None) == "missing path"


class _Fake:
    """Wraps a fitted oracle and perturbs one answer."""

    def __init__(self, inner, target, result):
        self._inner, self._target, self._result = inner, target, result

    def __getattr__(self, name):
        return getattr(self._inner, name)

    def _answer(self, v, lam, with_path):
        if (v, lam) == self._target:
            return self._result
        return self._inner._answer(v, lam, with_path)


def _target(graph):
    v = 0
    lam = next(l for l in range(graph.n_labels) if l != graph.label_of[v])
    return v, lam


def test_audits_pass_on_real_oracles(graph):
    gt = compute_ground_truth(graph)
    for o in (PathReportingLabelOracle(k=3, random_state=0), TwoSidedLabelOracle(k=3, random_state=0, path_reporting=True)):
        o.fit(graph)
        results = sweep(o, with_path=True)
        for report in (
            audit_stretch(o, gt, results=results),
            audit_paths(o, graph, results=results),
            audit_size(o),
            audit_probes(o, results=results),
            check_lemmas(graph, o.hierarchy_, o.pivots_, o.bunches_, gt),
            check_duality(o),
            check_tree_exactness(o.clusters_, graph),
        ):
            assert report.passed, report.to_text()
            assert report.checked > 0
    assert check_cluster_claims(PathReportingLabelOracle(k=3, random_state=0).fit(graph), gt).passed
    assert check_case_coverage(TwoSidedLabelOracle(k=3, random_state=0).fit(graph), gt).passed


def test_stretch_audit_flags_under_and_over(graph):
    gt = compute_ground_truth(graph)
    o = PathReportingLabelOracle(k=2, random_state=0).fit(graph)
    v, lam = _target(graph)
    truth = gt.dist[v][lam]
    low = _Fake(o, (v, lam), QueryResult(truth - 1, None, "x", 0))
    report = audit_stretch(low, gt, results=sweep(low))
    assert not report.passed and "underestimates" in report.violations[0]
    high = _Fake(o, (v, lam), QueryResult(truth * 10, None, "x", 0))
    assert not audit_stretch(high, gt, bound=3.0, results=sweep(high)).passed


def test_path_and_probe_audits_flag_bad_results(graph):
    o = PathReportingLabelOracle(k=2, random_state=0).fit(graph)
    v, lam = _target(graph)
    good = o.query_path(v, lam)
    broken = _Fake(o, (v, lam), replace(good, path=good.path[:-1] + (v,)))
    assert not audit_paths(broken, graph, results=sweep(broken, True)).passed
    greedy = _Fake(o, (v, lam), replace(good, probes=100))
    assert not audit_probes(greedy, results=sweep(greedy)).passed


def test_size_audit_limit(graph):
    o = TwoSidedLabelOracle(k=2, random_state=0).fit(graph)
    report = audit_size(o)
    assert report.passed
    assert report.stats["reference"] == size_reference(o) == 2 * graph.n * 5**0.5
    assert not audit_size(o, limit=0.01).passed


def test_report_text():
    r = AuditReport("demo", checked=3, stats={"mean": 1.5, "h": {1: 2}})
    r.fail("oops")
    assert r.summary_line().startswith("AUDIT name=demo status=FAIL checked=3 violations=1")
    assert "oops" in r.to_text() and "h = 1:2" in r.to_text()
    assert r.merge(AuditReport("x", checked=2)).checked == 5
