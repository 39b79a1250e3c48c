"""Subset-Sum normalizations, exact power-sum identities, and the
cosine-product integral.

The signed form asks whether some sign pattern a in {-1,1}^n zeroes
sum a_i y_i.  Power sums t_k over all 2^n signed sums have closed forms in
the instance power sums s_k = sum y_i^k; the Fourier-style integral of
prod cos(phi y_i) over [0, 2pi] equals 2pi * 2^-n * (number of zero sign
patterns).  Every identity here is paired with a brute-force enumeration.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .errors import InstanceTooLarge, ParseError


@dataclass
class SubsetSumInstance:
    values: List[int]
    target: int

    def __post_init__(self):
        if not self.values:
            raise ValueError("instance needs at least one value")


@dataclass
class SignedInstance:
    values: List[int]  # all >= 1

    def __post_init__(self):
        if not self.values:
            raise ValueError("instance needs at least one value")
        if any(v < 1 for v in self.values):
            raise ValueError("signed-instance values must be positive")

    @property
    def n(self) -> int:
        return len(self.values)

    def digest(self) -> str:
        h = hashlib.sha256(",".join(map(str, self.values)).encode())
        return h.hexdigest()[:12]


@dataclass
class NormalizeResult:
    signed: SignedInstance
    dropped_zeros: int   # zero values are free choices; multiplicity doubles per drop
    s: int               # the doubled shifted target 2 s' - sum x_i


def normalize(inst: SubsetSumInstance) -> NormalizeResult:
    """0/1 Subset-Sum -> signed +-1 form with positive values.

    Doubling both sides of sum a_i x_i = s' - (1/2) sum x_i keeps everything
    in integers: s = 2 s' - sum x_i, y_i = |x_i|, and |s| is appended to the
    value set.  Zeros (including a zero s) are dropped and counted.
    """
    s = 2 * inst.target - sum(inst.values)
    vals = [abs(v) for v in inst.values] + [abs(s)]
    dropped = sum(1 for v in vals if v == 0)
    kept = [v for v in vals if v > 0]
    if not kept:
        # degenerate all-zero instance: represent as a single unsatisfiable value
        kept = [1]
        dropped -= 1  # the placeholder is not a dropped zero
    return NormalizeResult(SignedInstance(kept), dropped, s)


def subset_sum_solvable(inst: SubsetSumInstance) -> bool:
    """Brute-force 0/1 subset-sum oracle (meet-in-the-middle)."""
    n = len(inst.values)
    if n > 40:
        raise InstanceTooLarge(f"n={n} exceeds oracle bound 40")
    half = n // 2
    left = inst.values[:half]
    right = inst.values[half:]
    sums = {0}
    for v in left:
        sums |= {s + v for s in sums}
    rights = {0}
    for v in right:
        rights |= {s + v for s in rights}
    return any(inst.target - s in rights for s in sums)


def _signed_sum_counts(values: List[int]) -> Dict[int, int]:
    """Multiset of all 2^k signed sums, as value -> count."""
    counts = {0: 1}
    for y in values:
        nxt: Dict[int, int] = {}
        for s, c in counts.items():
            nxt[s + y] = nxt.get(s + y, 0) + c
            nxt[s - y] = nxt.get(s - y, 0) + c
        counts = nxt
    return counts


def brute_force_zero(si: SignedInstance) -> int:
    """Exact number of sign patterns a with sum a_i y_i = 0.

    Meet-in-the-middle: split, enumerate both halves' signed-sum multisets,
    match.  Handles n up to 40.
    """
    n = si.n
    if n > 40:
        raise InstanceTooLarge(f"n={n} exceeds oracle bound 40")
    half = n // 2
    left = _signed_sum_counts(si.values[:half])
    right = _signed_sum_counts(si.values[half:])
    return sum(c * right.get(-s, 0) for s, c in left.items())


_POWER_SUM_KS = (0, 2, 4, 6)


def power_sum_identity(k: int, si: SignedInstance) -> int:
    """Closed form for t_k = sum over all 2^n signed sums of (sum a_i y_i)^k."""
    if k % 2 == 1:
        return 0
    if k not in _POWER_SUM_KS:
        raise ValueError(f"k={k} unsupported; use one of {_POWER_SUM_KS} or odd k")
    n = si.n
    if k == 0:
        return 2 ** n
    s2 = sum(y ** 2 for y in si.values)
    if k == 2:
        return 2 ** n * s2
    s4 = sum(y ** 4 for y in si.values)
    if k == 4:
        return 2 ** n * (3 * s2 ** 2 - 2 * s4)
    s6 = sum(y ** 6 for y in si.values)
    return 2 ** n * (16 * s6 - 30 * s2 * s4 + 15 * s2 ** 3)


def power_sum_brute(k: int, si: SignedInstance) -> int:
    """t_k by exhaustive enumeration of the signed-sum multiset."""
    if si.n > 24:
        raise InstanceTooLarge(f"n={si.n} exceeds enumeration bound 24")
    counts = _signed_sum_counts(si.values)
    return sum(c * s ** k for s, c in counts.items())


def cosine_integral(si: SignedInstance, samples: Optional[int] = None,
                    method: str = "trapezoid",
                    rng: Optional[np.random.Generator] = None) -> float:
    """Numeric integral of prod_i cos(phi y_i) over [0, 2pi].

    The integrand is a trigonometric polynomial of degree sum y_i, for which
    the uniform trapezoid rule on a periodic interval is exact (up to
    roundoff) once the node count exceeds the degree.  Default node count is
    4*sum(y) + 1; anything at or below the Nyquist bound 2*sum(y) is refused.

    method="monte-carlo" is a deliberately weak demonstrator (the nonzero
    average shrinks like 2^-n, so uniform sampling cannot resolve it).
    """
    if si.n > 20:
        raise InstanceTooLarge(f"n={si.n} exceeds bound 20")
    total_freq = sum(si.values)
    if samples is None:
        samples = 4 * total_freq + 1
    if method == "monte-carlo":
        if rng is None:
            rng = np.random.default_rng(0)
        phi = rng.uniform(0.0, 2 * math.pi, size=samples)
        vals = np.prod(np.cos(np.outer(phi, si.values)), axis=1)
        return float(2 * math.pi * vals.mean())
    if samples <= 2 * total_freq:
        raise ValueError(
            f"{samples} samples below Nyquist bound {2 * total_freq + 1} "
            f"for frequency {total_freq}")
    if method == "trapezoid":
        # uniform nodes on the periodic interval: trapezoid == rectangle rule
        phi = np.arange(samples) * (2 * math.pi / samples)
        vals = np.prod(np.cos(np.outer(phi, si.values)), axis=1)
        return float(2 * math.pi * vals.mean())
    if method == "simpson":
        if samples % 2 == 0:
            samples += 1
        phi = np.linspace(0.0, 2 * math.pi, samples)
        vals = np.prod(np.cos(np.outer(phi, si.values)), axis=1)
        h = phi[1] - phi[0]
        weights = np.ones(samples)
        weights[1:-1:2] = 4.0
        weights[2:-1:2] = 2.0
        return float(h / 3 * np.dot(weights, vals))
    raise ValueError(f"unknown method {method!r}")


def expected_integral(si: SignedInstance) -> float:
    """Analytic value 2pi * 2^-n * brute_force_zero(si)."""
    return 2 * math.pi * brute_force_zero(si) / 2 ** si.n


def l1_sphere_check(si: SignedInstance, d: float) -> bool:
    """True iff the scaled point (y_i/d) lies on some l^1 sphere S_1(c, n)
    with c in {-1,1}^n; equivalent to the signed instance having a zero."""
    if d <= max(si.values):
        raise ValueError(f"d={d} must exceed max value {max(si.values)}")
    if si.n > 20:
        raise InstanceTooLarge(f"n={si.n} exceeds bound 20")
    n = si.n
    scaled = [y / d for y in si.values]
    for mask in range(1 << n):
        total = 0.0
        for i in range(n):
            c = 1.0 if (mask >> i) & 1 else -1.0
            total += abs(scaled[i] - c)
        if abs(total - n) < 1e-9:
            return True
    return False


INFINITE = "infinite"


def inverse_square_probe(si: SignedInstance) -> Union[str, Fraction]:
    """Sum over sign patterns of 1/(sum a_i y_i)^2; INFINITE when a zero
    pattern exists (the divergence is the membership signal)."""
    if si.n > 24:
        raise InstanceTooLarge(f"n={si.n} exceeds bound 24")
    counts = _signed_sum_counts(si.values)
    if counts.get(0, 0) > 0:
        return INFINITE
    return sum(Fraction(c, s * s) for s, c in counts.items())


# -- instance file format (one integer per line, optional "t <target>" line)


def parse_instance_file(text: str) -> SubsetSumInstance:
    values: List[int] = []
    target: Optional[int] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("t "):
            try:
                target = int(line[2:])
            except ValueError:
                raise ParseError(f"line {lineno}: bad target line {line!r}")
            continue
        for tok in line.split():
            try:
                values.append(int(tok))
            except ValueError:
                raise ParseError(f"line {lineno}: expected integer, got {tok!r}")
    if not values:
        raise ParseError("no values in instance file")
    if target is None:
        # no explicit target: interpret as the two-equal-subsets question
        total = sum(values)
        target = total // 2
    return SubsetSumInstance(values, target)


def random_signed_instance(rng: np.random.Generator, n: int,
                           max_value: int) -> SignedInstance:
    return SignedInstance([int(rng.integers(1, max_value + 1)) for _ in range(n)])
