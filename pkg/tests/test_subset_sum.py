import math
from fractions import Fraction

import numpy as np
import pytest

from npforge.subset_sum import (
    INFINITE, SignedInstance, SubsetSumInstance, brute_force_zero,
    cosine_integral, expected_integral, inverse_square_probe, l1_sphere_check,
    normalize, parse_instance_file, power_sum_brute, power_sum_identity,
    random_signed_instance, subset_sum_solvable,
)


def test_normalize_basics():
    res = normalize(SubsetSumInstance([3, -1, 0, 2], 4))
    assert res.dropped_zeros == 1
    assert all(v >= 1 for v in res.signed.values)
    # solvability is preserved through the signed form
    inst = SubsetSumInstance([3, 1, 2], 4)
    assert subset_sum_solvable(inst)
    assert brute_force_zero(normalize(inst).signed) > 0


def test_solvability_iff_zero_signed_sum():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(2, 9))
        values = [int(v) for v in rng.integers(-8, 9, size=n)]
        target = int(rng.integers(-10, 11))
        inst = SubsetSumInstance(values, target)
        res = normalize(inst)
        assert subset_sum_solvable(inst) == (brute_force_zero(res.signed) > 0)


def test_power_sums_closed_forms():
    rng = np.random.default_rng(1)
    for _ in range(40):
        si = random_signed_instance(rng, int(rng.integers(1, 10)), 30)
        for k in (0, 2, 4, 6):
            assert power_sum_identity(k, si) == power_sum_brute(k, si)
        assert power_sum_identity(3, si) == 0  # odd powers cancel


def test_power_sum_worked_example():
    si = SignedInstance([1, 2])
    assert power_sum_identity(2, si) == 20
    assert power_sum_identity(4, si) == 164


def test_cosine_integral_matches_count():
    rng = np.random.default_rng(2)
    for _ in range(30):
        si = random_signed_instance(rng, int(rng.integers(1, 9)), 15)
        val = cosine_integral(si)
        assert abs(val - expected_integral(si)) < 1e-8 * (1 + 2 * math.pi)


def test_cosine_integral_single_pair():
    # integral of cos^2 over a period
    assert abs(cosine_integral(SignedInstance([1, 1])) - math.pi) < 1e-10


def test_cosine_integral_refuses_undersampling():
    si = SignedInstance([5, 7])
    with pytest.raises(ValueError):
        cosine_integral(si, samples=2 * 12)


def test_simpson_close():
    si = SignedInstance([1, 2, 3])
    v = cosine_integral(si, samples=4001, method="simpson")
    assert abs(v - expected_integral(si)) < 1e-6


def test_monte_carlo_is_weak_but_unbiased_scale():
    si = SignedInstance([1, 1])
    v = cosine_integral(si, samples=20000, method="monte-carlo",
                        rng=np.random.default_rng(3))
    assert abs(v - math.pi) < 0.2


def test_inverse_square_probe():
    assert inverse_square_probe(SignedInstance([1, 2])) == Fraction(20, 9)
    assert inverse_square_probe(SignedInstance([2, 3])) == Fraction(52, 25)
    assert inverse_square_probe(SignedInstance([1, 1])) == INFINITE


def test_l1_sphere_check():
    si = SignedInstance([1, 2, 3])
    assert isinstance(l1_sphere_check(si, 7.0), bool)
    with pytest.raises(ValueError):
        l1_sphere_check(si, 2.0)


def test_parse_instance_file():
    inst = parse_instance_file("# comment\n1 2 3\nt 3\n")
    assert inst.values == [1, 2, 3] and inst.target == 3
    inst2 = parse_instance_file("2\n4\n")
    assert inst2.target == 3  # half the total by default
