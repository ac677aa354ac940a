import math
import random

import pytest

from labeloracle import GenSpec, LabeledGraph, generate


def floyd_warshall(g):
    """Plain-Python all-pairs distances, independent of the package code."""
    n = g.n
    d = [[math.inf] * n for _ in range(n)]
    for v in range(n):
        d[v][v] = 0.0
    for u, v, w in g.edges:
        d[u][v] = d[v][u] = min(d[u][v], w)
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == math.inf:
                continue
            row = d[i]
            for j in range(n):
                if dik + dk[j] < row[j]:
                    row[j] = dik + dk[j]
    return d


def brute_label_distance(g, apsp, v, lam):
    return min((apsp[v][x] for x in range(g.n) if g.label_of[x] == lam), default=math.inf)


def random_graph(n, m, labels, seed, weight_max=20):
    rnd = random.Random(seed)
    edges = []
    for _ in range(m):
        u, v = rnd.sample(range(n), 2)
        edges.append((u, v, rnd.randint(1, weight_max)))
    return LabeledGraph.from_edges(n, edges, [rnd.randrange(labels) for _ in range(n)], labels)


def small_instances():
    """The n <= 64 corpus: random, sparse/disconnected, grid, path, star, ties."""
    out = []
    for seed in range(6):
        out.append((f"random-{seed}", generate(GenSpec(n=40 + 4 * seed, m=120, labels=3 + seed, seed=seed)), 2 + seed % 3))
    for seed in range(3):
        out.append((f"disconnected-{seed}", random_graph(50, 30, 5, seed), 3))
    out.append(("grid", generate(GenSpec(family="grid", n=64, rows=8, labels=6, seed=1, weight_max=3)), 3))
    out.append(("path", generate(GenSpec(family="path", n=40, labels=4, seed=2)), 2))
    out.append(("star", generate(GenSpec(family="star", n=33, labels=5, seed=3)), 3))
    out.append(("unit-weights", generate(GenSpec(n=48, m=100, labels=4, weight_max=1, seed=4)), 3))
    out.append(("clustered", generate(GenSpec(n=60, m=150, labels=6, label_scheme="clustered", seed=5)), 4))
    out.append(("empty-label", LabeledGraph.from_edges(30, random_graph(30, 60, 3, 9).edges, [i % 3 for i in range(30)], 5), 2))
    return out


SMALL = small_instances()


@pytest.fixture(params=SMALL, ids=[name for name, _, _ in SMALL])
def small_instance(request):
    return request.param


ACCEPTANCE_LOG = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)
