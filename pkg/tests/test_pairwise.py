import pytest

from conftest import floyd_warshall, random_graph
from labeloracle import LabeledGraph
from labeloracle.pairwise import DisconnectedPairError, ExactPairwiseOracle, MissingPairError, build_exact_pairwise


def weight_of(g, path):
    return sum(g.weight(a, b) for a, b in zip(path, path[1:]))


def test_reflexive_pair():
    g = LabeledGraph.from_edges(2, [(0, 1, 4)], [0, 0])
    o = build_exact_pairwise(g, [(1, 1)])
    assert o.query(1, 1) == (0.0, [1])


def test_single_edge_both_orientations():
    g = LabeledGraph.from_edges(2, [(0, 1, 4)], [0, 0])
    o = build_exact_pairwise(g, [(1, 0)])
    assert o.query(0, 1) == (4.0, [0, 1])
    assert o.query(1, 0) == (4.0, [1, 0])
    assert (1, 0) in o and len(o) == 1


def test_missing_and_disconnected():
    g = LabeledGraph.from_edges(3, [(0, 1, 1)], [0, 0, 0])
    o = build_exact_pairwise(g, [(0, 1)])
    with pytest.raises(MissingPairError):
        o.query(0, 2)
    with pytest.raises(DisconnectedPairError):
        build_exact_pairwise(g, [(0, 2)])


def test_tie_prefers_smaller_predecessor():
    # two equal routes 0-1-3 and 0-2-3
    g = LabeledGraph.from_edges(4, [(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)], [0] * 4)
    assert build_exact_pairwise(g, [(0, 3)]).query(0, 3)[1] == [0, 1, 3]


@pytest.mark.parametrize("seed", range(5))
def test_random_pairs_against_floyd_warshall(seed):
    g = random_graph(40, 90, 3, seed)
    apsp = floyd_warshall(g)
    pairs = [(a, b) for a in range(0, 40, 3) for b in range(1, 40, 7) if apsp[a][b] < float("inf")]
    o = build_exact_pairwise(g, pairs)
    for a, b in pairs:
        for x, y in ((a, b), (b, a)):
            length, path = o.query(x, y)
            assert length == apsp[x][y]
            assert path[0] == x and path[-1] == y
            assert weight_of(g, path) == length


def test_payload_roundtrip():
    g = random_graph(20, 50, 2, 3)
    o = build_exact_pairwise(g, [(0, 5), (3, 7), (2, 2)])
    back = ExactPairwiseOracle.from_payload(o.to_payload())
    assert back.to_payload() == o.to_payload()
    assert back.path_words() == o.path_words()
