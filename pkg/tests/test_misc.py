import itertools
import math

import numpy as np
import pytest

from npforge.grassmann import AdjacencyMatrix
from npforge.misc_encodings import (
    clique_brute_force, clique_objective, coloring_descent, coloring_objective,
    cone_test, factorization_objective, is_proper_coloring, is_vertex_cover,
    round_to_coloring, sat_monomial_brute, sat_monomial_count,
    sigmoid_substitute, vertex_cover_feasible,
)
from npforge.polynomial import SparsePolynomial as SP
from npforge.sat_encode import CnfFormula, Literal, random_cnf, sat_oracle


def random_graph(rng, n, p=0.5):
    ent = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                ent[i][j] = ent[j][i] = True
    return AdjacencyMatrix(n, ent)


def test_factorization_values():
    for n, x in [(15, 3), (15, 5), (35, 5)]:
        assert abs(factorization_objective(n, x) - 2) < 1e-12
    assert factorization_objective(15, 4) < 2
    with pytest.raises(ValueError):
        factorization_objective(15, 0)


def test_factorization_bounded_by_two():
    rng = np.random.default_rng(0)
    for _ in range(200):
        x = float(rng.uniform(0.5, 20))
        assert factorization_objective(21, x) <= 2 + 1e-12


def test_sigmoid_values_and_gradient():
    p = SP(2, {((0, 2),): 1, ((0, 1), (1, 1)): -2, ((1, 2),): 3, (): 1})
    for kind in ("logistic", "arctan"):
        obj = sigmoid_substitute(p, kind)
        assert abs(obj.value([0, 0]) - p.evaluate([0.5, 0.5])) < 1e-12
        # large z approaches p at all-ones (arctan converges only like 1/t)
        big = 40 if kind == "logistic" else 1e4
        assert abs(obj.value([big, big]) - p.evaluate([1.0, 1.0])) < 1e-2
        z = np.array([0.3, -0.7])
        g = obj.gradient(z)
        for i in range(2):
            e = np.zeros(2)
            e[i] = 1e-6
            fd = (obj.value(z + e) - obj.value(z - e)) / 2e-6
            assert abs(fd - g[i]) < 1e-6 * max(1, abs(g[i]))


def test_clique_objective_and_oracle():
    tri = AdjacencyMatrix.complete(3)
    assert clique_objective(tri, [1, 1, 1], 3) == 6
    empty = AdjacencyMatrix(4, [[False] * 4 for _ in range(4)])
    assert clique_objective(empty, [1, 1, 0, 0], 2) == 0
    rng = np.random.default_rng(1)
    for _ in range(15):
        n = int(rng.integers(4, 9))
        k = int(rng.integers(2, n))
        g = random_graph(rng, n)
        best, arg = clique_brute_force(g, k)
        has = any(all(g.entries[i][j] for i in s for j in s if i != j)
                  for s in itertools.combinations(range(n), k))
        assert (best == k * (k - 1)) == has
        if has:
            assert clique_objective(g, [i in arg for i in range(n)], k) == best


def test_vertex_cover_cone_relation():
    e01 = AdjacencyMatrix.from_edges(2, [(0, 1)])
    assert vertex_cover_feasible(e01, [1, 0], 1)
    assert not vertex_cover_feasible(e01, [0, 0], 0)
    tri = AdjacencyMatrix.complete(3)
    # the row test is a relaxation: passes here though an edge is uncovered
    assert cone_test(tri, [1, 0, 0])
    assert not is_vertex_cover(tri, [1, 0, 0])
    rng = np.random.default_rng(2)
    checked = 0
    while checked < 100:
        g = random_graph(rng, int(rng.integers(2, 9)), 0.5)
        if any(not any(row) for row in g.entries):
            continue  # isolated vertex: the relaxation is allowed to differ
        v = [bool(rng.integers(0, 2)) for _ in range(g.n)]
        if is_vertex_cover(g, v):
            assert vertex_cover_feasible(g, v, sum(v))
        checked += 1


def test_coloring_objective():
    tri = AdjacencyMatrix.complete(3)
    exact = [0.0, 2 * math.pi / 3, 4 * math.pi / 3]
    assert coloring_objective(tri, exact) < 1e-15
    e01 = AdjacencyMatrix.from_edges(2, [(0, 1)])
    assert abs(coloring_objective(e01, [1.0, 1.0]) - 2.25) < 1e-12
    assert is_proper_coloring(tri, round_to_coloring(exact))


def test_coloring_descent_triangle_and_k4():
    tri = AdjacencyMatrix.complete(3)
    v, angles = coloring_descent(tri, seed=3)
    assert v < 1e-15
    assert is_proper_coloring(tri, round_to_coloring(angles))
    # K4 is not 3-colorable: no zero should appear
    v4, _ = coloring_descent(AdjacencyMatrix.complete(4), seed=3, starts=60)
    assert v4 > 1e-6


def test_monomial_count_small_cases():
    # sum over the 8 assignments of the number of true literals in the
    # clause: each variable is true in 4 assignments, giving 3 * 4 = 12
    one = CnfFormula(3, [(Literal(0, False), Literal(1, False), Literal(2, False))])
    assert sat_monomial_count(one) == 12
    unsat = CnfFormula(1, [(Literal(0, False),), (Literal(0, True),)])
    assert sat_monomial_count(unsat) == 0


def test_monomial_count_matches_enumeration():
    rng = np.random.default_rng(3)
    for _ in range(60):
        f = random_cnf(rng, int(rng.integers(3, 11)), int(rng.integers(1, 7)))
        c = sat_monomial_count(f)
        assert c == sat_monomial_brute(f)
        assert (c > 0) == (sat_oracle(f) is not None)
