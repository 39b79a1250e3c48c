import numpy as np
import pytest

from npforge.optimize import (
    OptimizerConfig, gradient_descent, line_minima_step, local_minima_census,
    multi_start, round_and_test, round_point, smoothed_descent,
)
from npforge.polynomial import SparsePolynomial as SP
from npforge.sat_encode import CnfFormula, Literal, boolean_penalty, encode_deg6, sat_oracle

CFG = OptimizerConfig(seed=1)


def bp(n):
    return boolean_penalty(range(n), n)


def double_well():
    # x^2 (1-x)^2
    return SP(1, {((0, 2),): 1, ((0, 3),): -2, ((0, 4),): 1})


def test_convex_descent():
    p = SP(1, {((0, 2),): 1, ((0, 1),): -2, (): 1})  # (x-1)^2
    r = gradient_descent(p, [0.0], CFG)
    assert abs(r.final_point[0] - 1) < 2e-3
    assert r.final_value < 1e-5


def test_double_well_dynamics():
    r = gradient_descent(double_well(), [0.4], CFG)
    assert abs(r.final_point[0]) < 2e-3


def test_zero_found_yields_sat_witness():
    f = CnfFormula(3, [(Literal(0, False), Literal(1, False), Literal(2, False))])
    enc = encode_deg6(f)
    r = gradient_descent(enc.poly, [0.9, 0.1, 0.2], CFG, formula=f)
    assert r.verdict == "ZeroFound"
    assert r.rounded_assignment is not None
    assert f.satisfied(r.rounded_assignment)


def test_descent_monotone_trace():
    r = gradient_descent(double_well(), [0.45], CFG, keep_trace=True)
    vals = [v for _, v, _ in r.trace]
    assert all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))


def test_multi_start_deterministic():
    p = bp(3)
    runs1, s1 = multi_start(p, 200, CFG)
    runs2, s2 = multi_start(p, 200, CFG)
    assert s1 == s2
    assert [r.to_dict() for r in runs1] == [r.to_dict() for r in runs2]
    assert s1["distinct_minima"] >= 7


def test_multi_start_convex_agrees():
    p = SP(2, {((0, 2),): 1, ((1, 2),): 1, ((0, 1),): -1, ((1, 1),): -1})
    runs, s = multi_start(p, 10, CFG)
    finals = [r.final_value for r in runs]
    assert max(finals) - min(finals) < 1e-6
    assert s["distinct_minima"] == 1


def test_smoothed_lambda_zero_is_plain_descent():
    cfg = OptimizerConfig(seed=1, lambda_schedule=[0.0])
    r1 = gradient_descent(double_well(), [0.4], cfg)
    r2 = smoothed_descent(double_well(), [0.4], cfg)
    assert r1.to_dict() == r2.to_dict()


def test_smoothed_schedule_nonnegative_final():
    cfg = OptimizerConfig(seed=1, lambda_schedule=[0.5, 0.1, 0.0])
    r = smoothed_descent(double_well(), [0.9], cfg)
    assert r.final_value >= -1e-12


def test_large_lambda_convexifies():
    # f + lambda f'' for f = x^2(1-x)^2: at lambda = 1 the second derivative
    # of the smoothed objective is positive on [0,1]
    f = double_well()
    lap = f.laplacian()
    ts = np.linspace(0, 1, 101)
    smoothed = [f.evaluate([t]) + 1.0 * lap.evaluate([t]) for t in ts]
    diffs2 = np.diff(smoothed, 2)
    assert (diffs2 > -1e-9).all()


def test_line_minima_quadratic_newton():
    p = SP(2, {((0, 2),): 1, ((1, 2),): 2, ((0, 1),): -2, ((1, 1),): -4, (): 3})
    pt, v = line_minima_step(p, [0.0, 0.0], [1.0, 1.0])
    assert v <= p.evaluate([0.0, 0.0]) + 1e-12
    # never increases from an arbitrary point either
    pt2, v2 = line_minima_step(p, [0.3, -0.2], [1.0, 0.5])
    assert v2 <= p.evaluate([0.3, -0.2]) + 1e-12


def test_line_strategy_reaches_zero():
    _, s = multi_start(bp(3), 20, CFG, strategy="line")
    assert s["best_value"] < 1e-9


def test_census_counts():
    assert local_minima_census(bp(1), 100, CFG)[0] == 2
    assert local_minima_census(bp(3), 500, CFG)[0] == 8
    convex = SP(2, {((0, 2),): 1, ((1, 2),): 1})
    assert local_minima_census(convex, 50, CFG)[0] == 1


def test_census_deterministic():
    c1, reps1 = local_minima_census(bp(2), 100, CFG)
    c2, reps2 = local_minima_census(bp(2), 100, CFG)
    assert c1 == c2 == 4
    assert all((a == b).all() for a, b in zip(reps1, reps2))


def test_rounding_rules():
    assert round_point([0.5, 0.49, 0.51]) == [True, False, True]
    f = CnfFormula(2, [(Literal(0, False), Literal(1, True))])
    assert round_and_test([0.9, 0.1], f) == [True, False]
    assert round_and_test([0.1, 0.9], f) is None


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(step=-1)
    with pytest.raises(ValueError):
        OptimizerConfig(lambda_schedule=[0.5])  # must end at 0
