import numpy as np
import pytest

from npforge.errors import InstanceTooLarge, ParseError
from npforge.grassmann import (
    AdjacencyMatrix, GrassmannElement, derivative_trace, gmul, graph_report,
    hamilton_oracle, hamilton_trace, matrix_rep, paired_diag, parse_graph,
    signed_cycle_sum, single_diag_trace,
)


def test_generator_algebra():
    g0, g1 = GrassmannElement.generator(0), GrassmannElement.generator(1)
    assert gmul(g0, g1).terms == {0b11: 1}
    assert gmul(g1, g0).terms == {0b11: -1}
    assert gmul(g0, g0).is_zero()
    # associativity on a small product
    g2 = GrassmannElement.generator(2)
    assert gmul(gmul(g0, g1), g2) == gmul(g0, gmul(g1, g2))


def test_paired_elements_commute_and_square_to_zero():
    d = paired_diag(3)
    for i in range(3):
        assert gmul(d[i], d[i]).is_zero()
        for j in range(3):
            assert gmul(d[i], d[j]) == gmul(d[j], d[i])


def test_matrix_rep_anticommutes():
    for k in range(1, 6):
        mats = matrix_rep(k)
        assert all(m.shape == (2 ** k, 2 ** k) for m in mats)
        for i in range(k):
            for j in range(k):
                assert not (mats[i] @ mats[j] + mats[j] @ mats[i]).any()


def test_matrix_rep_k2_explicit():
    m1, m2 = matrix_rep(2)
    low = np.array([[0, 0], [1, 0]])
    assert (m1 == np.kron(np.eye(2, dtype=int), low)).all()
    assert (m2 == np.kron(low, np.diag([1, -1]))).all()


def test_trace_counts_on_known_graphs():
    assert hamilton_trace(AdjacencyMatrix.complete(3)) == 6
    assert hamilton_trace(AdjacencyMatrix.complete(4)) == 24
    assert hamilton_trace(AdjacencyMatrix.cycle(5)) == 10
    path = AdjacencyMatrix.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert hamilton_trace(path) == 0
    assert hamilton_oracle(path) == 0


def test_trace_is_n_times_directed_count():
    rng = np.random.default_rng(0)
    for _ in range(25):
        n = int(rng.integers(3, 8))
        ent = [[False] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.5:
                    ent[i][j] = ent[j][i] = True
        g = AdjacencyMatrix(n, ent)
        assert hamilton_trace(g) == n * hamilton_oracle(g)
        assert derivative_trace(g) == hamilton_trace(g)


def test_single_diag_cancellation():
    rng = np.random.default_rng(1)
    saw_cancellation = False
    for _ in range(40):
        n = int(rng.integers(3, 7))
        ent = [[False] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.6:
                    ent[i][j] = ent[j][i] = True
        g = AdjacencyMatrix(n, ent)
        sd = single_diag_trace(g)
        assert sd == signed_cycle_sum(g)
        if hamilton_oracle(g) > 0 and abs(sd) < hamilton_trace(g):
            saw_cancellation = True
    assert saw_cancellation  # the unpaired diagonal really does lose cycles


def test_size_bounds():
    big = AdjacencyMatrix(15, [[False] * 15 for _ in range(15)])
    with pytest.raises(InstanceTooLarge):
        hamilton_trace(big)


def test_parse_graph_formats():
    dimacs = "c comment\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n"
    edge_list = "3 3\n0 1\n1 2\n0 2\n"
    for text in (dimacs, edge_list):
        g = parse_graph(text)
        assert hamilton_oracle(g) == 2
    with pytest.raises(ParseError):
        parse_graph("p edge 2\n")
    with pytest.raises(ParseError):
        parse_graph("2 1\n0 5\n")


def test_graph_report():
    r = graph_report(AdjacencyMatrix.complete(4))
    assert r == {"n": 4, "trace": 24, "directed_cycles": 6, "has_hamilton": True}
