import random
from fractions import Fraction

import pytest

from fixcheck import simplex
from fixcheck.liftings import optimal_transport, transport_vertices
from fixcheck.mv import REAL, MVAlgebra
from fixcheck.valuations import FiniteSet, Valuation

from gen import random_distribution


def test_small_lp():
    # min -x - y  s.t.  x + y + s = 4, x + 3y + t = 6
    value, x = simplex.solve([-1, -1, 0, 0], [[1, 1, 1, 0], [1, 3, 0, 1]], [4, 6])
    assert value == -4
    assert x[0] + x[1] == 4


def test_exact_fraction_optimum():
    value, x = simplex.solve([1, 2], [[3, 7]], [1])
    assert value == Fraction(2, 7) and x == [0, Fraction(1, 7)]


def test_negative_rhs_and_redundant_rows():
    value, x = simplex.solve([1, 1], [[-1, -1], [2, 2]], [-2, 4])
    assert value == 2 and sum(x) == 2


def test_infeasible():
    with pytest.raises(simplex.Infeasible):
        simplex.solve([1, 1], [[1, 1]], [-1])


def test_unbounded():
    with pytest.raises(simplex.Unbounded):
        simplex.solve([-1, 0], [[1, -1]], [0])


def test_row_length_checked():
    with pytest.raises(ValueError):
        simplex.solve([1, 1], [[1]], [1])


def test_transport_lp_matches_vertex_minimum():
    rng = random.Random(7)
    alg = MVAlgebra(REAL, 1)
    X = FiniteSet(["a", "b", "c", "d"])
    pairs = X.product(X)
    for _ in range(60):
        p1 = random_distribution(rng, "p", X)
        p2 = random_distribution(rng, "q", X)
        d = Valuation(pairs, alg, {c: Fraction(rng.randint(0, 6), 6) for c in pairs})
        value, plan = optimal_transport(d, p1, p2)
        costs = [sum(w * d[c] for c, w in v.items()) for v in transport_vertices(p1, p2)]
        assert value == min(costs)
        assert sum(plan.values()) == 1


def test_bland_rule_on_degenerate_problem():
    # a classic cycling example for the largest-coefficient rule
    c = [Fraction(-3, 4), 20, Fraction(-1, 2), 6, 0, 0, 0]
    A = [[Fraction(1, 4), -8, -1, 9, 1, 0, 0],
         [Fraction(1, 2), -12, Fraction(-1, 2), 3, 0, 1, 0],
         [0, 0, 1, 0, 0, 0, 1]]
    value, x = simplex.solve(c, A, [0, 0, 1])
    assert value == Fraction(-5, 4)
    for row, rhs in zip(A, [0, 0, 1]):
        assert sum(a * v for a, v in zip(row, x)) == rhs
    assert all(v >= 0 for v in x)
