"""Plane / sphere crossing-the-hypercube reductions.

A degree-2 polynomial is rewritten as (1/2) x^T A' x - x^T b' + a0 with an
integer symmetric A'.  Its zero set, when the minimum value is zero, is the
plane {x : Ax = b} for a maximal linearly independent row subset A of A'.
The plane is then intersected with the circumscribing sphere of the hypercube
(center (1/2,...,1/2)), and its columns can be packed digit-wise into a
Subset-Sum instance.

All rank and projection computations use exact rational arithmetic
(fractions.Fraction); there are no floating tolerances in the reductions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import InstanceTooLarge, UnsupportedDegree
from .polynomial import SparsePolynomial
from .subset_sum import SubsetSumInstance


@dataclass
class QuadraticForm:
    a_full: List[List[int]]   # N x N symmetric integer matrix A'
    b_full: List[int]         # integer N-vector b'
    a0: int                   # constant term, nonnegative for SOS inputs

    @property
    def num_vars(self) -> int:
        return len(self.b_full)

    def evaluate(self, x: Sequence[float]) -> float:
        n = self.num_vars
        q = 0.0
        for i in range(n):
            for j in range(n):
                q += self.a_full[i][j] * x[i] * x[j]
        lin = sum(self.b_full[i] * x[i] for i in range(n))
        return 0.5 * q - lin + self.a0

    def max_abs_entry(self) -> int:
        return max((abs(v) for row in self.a_full for v in row), default=0)


@dataclass
class PlaneSystem:
    a: List[List[int]]   # d x N, rows linearly independent
    b: List[int]

    @property
    def d(self) -> int:
        return len(self.a)

    @property
    def num_vars(self) -> int:
        return len(self.a[0]) if self.a else 0


@dataclass
class Sphere:
    center: List[Fraction]
    radius_sq: Fraction

    @property
    def num_vars(self) -> int:
        return len(self.center)


@dataclass
class NoZero:
    """Distinguished verdict: the quadratic never reaches zero."""
    reason: str


@dataclass
class EmptyIntersection:
    """The plane misses the circumscribing sphere entirely."""
    reason: str


def to_quadratic_form(p: SparsePolynomial) -> QuadraticForm:
    """Exact rewrite of a degree <= 2 integer polynomial as (A', b', a0)."""
    if p.degree() > 2:
        raise UnsupportedDegree(f"degree {p.degree()} > 2")
    n = p.num_vars
    a = [[0] * n for _ in range(n)]
    b = [0] * n
    a0 = 0
    for mono, coeff in p.terms.items():
        if not mono:
            a0 += coeff
        elif len(mono) == 1 and mono[0][1] == 1:
            b[mono[0][0]] -= coeff
        elif len(mono) == 1 and mono[0][1] == 2:
            a[mono[0][0]][mono[0][0]] += 2 * coeff
        else:  # cross term x_i x_j
            (i, _), (j, _) = mono
            a[i][j] += coeff
            a[j][i] += coeff
    return QuadraticForm(a, b, a0)


# -- exact rational helpers -------------------------------------------------


def _gram_schmidt_row_select(rows: List[List[Fraction]]) -> List[int]:
    """Indices of a maximal linearly independent subset, by exact Gram-Schmidt."""
    basis: List[List[Fraction]] = []
    chosen: List[int] = []
    for idx, row in enumerate(rows):
        v = list(row)
        for b in basis:
            denom = sum(x * x for x in b)
            num = sum(x * y for x, y in zip(v, b))
            if denom:
                coef = num / denom
                v = [x - coef * y for x, y in zip(v, b)]
        if any(x != 0 for x in v):
            basis.append(v)
            chosen.append(idx)
    return chosen


def _solve_fraction(mat: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    """Solve a square rational system by Gaussian elimination; None if singular."""
    n = len(mat)
    aug = [list(mat[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def _least_squares_solution(a: List[List[int]], b: List[int]) -> Optional[List[Fraction]]:
    """One exact solution of Ax=b (minimum-norm via A^T (AA^T)^-1 b), or None
    if the system is inconsistent."""
    d = len(a)
    n = len(a[0])
    gram = [[Fraction(sum(a[i][k] * a[j][k] for k in range(n)))
             for j in range(d)] for i in range(d)]
    lam = _solve_fraction(gram, [Fraction(v) for v in b])
    if lam is None:
        return None  # should not happen with independent rows
    x = [sum(lam[i] * a[i][k] for i in range(d)) for k in range(n)]
    # consistency check (rows independent => always consistent, but verify)
    for i in range(d):
        if sum(Fraction(a[i][k]) * x[k] for k in range(n)) != b[i]:
            return None
    return x


def reduce_plane(q: QuadraticForm):
    """PlaneSystem for the zero set of the quadratic, or a NoZero verdict.

    The quadratic (assumed nonnegative, A' PSD) reaches zero exactly when
    A'x = b' is consistent and the minimum value a0 - (1/2) b'.x* is zero.
    """
    n = q.num_vars
    rows = [[Fraction(v) for v in row] for row in q.a_full]
    chosen = _gram_schmidt_row_select(rows)
    a = [list(q.a_full[i]) for i in chosen]
    b = [q.b_full[i] for i in chosen]
    if not chosen:
        # A' = 0: quadratic is -x.b' + a0; zero plane only if b' = 0, a0 = 0
        if any(v != 0 for v in q.b_full):
            # linear polynomial: zero set is the level set b'.x = a0
            return PlaneSystem([list(q.b_full)], [q.a0])
        if q.a0 != 0:
            return NoZero("constant polynomial is nonzero")
        return PlaneSystem([], [])
    x_star = _least_squares_solution(a, b)
    if x_star is None:
        return NoZero("b' outside the column space of A'")
    # rows of A' not in the chosen set must agree (else inconsistent system)
    for i in range(n):
        lhs = sum(Fraction(q.a_full[i][k]) * x_star[k] for k in range(n))
        if lhs != q.b_full[i]:
            return NoZero("b' outside the column space of A'")
    min_val = Fraction(q.a0) - Fraction(1, 2) * sum(
        Fraction(q.b_full[k]) * x_star[k] for k in range(n))
    if min_val > 0:
        return NoZero(f"minimum value {min_val} > 0")
    return PlaneSystem(a, b)


def aggregate_rows(ps: PlaneSystem) -> PlaneSystem:
    """Collapse a multi-row system into one row with the same lattice solutions.

    Row residuals on {0,1}^N are bounded by R = N*M + M; weighting row i by
    B^i with B > 2R makes the weighted sum vanish exactly when every residual
    does, so {x in {0,1}^N : Ax=b} is unchanged.  Needed because a sphere
    around the projection of the hypercube center constrains lattice points
    by a single hyperplane only: projecting onto the original d-codimension
    plane would admit lattice points outside it whenever d > 1.
    """
    if ps.d <= 1:
        return ps
    n = ps.num_vars
    m = max(max(abs(v) for row in ps.a for v in row),
            max(abs(v) for v in ps.b), 1)
    bound = 2 * (n * m + m)
    base = 1
    while base <= bound:
        base <<= 1
    row = [0] * n
    rhs = 0
    w = 1
    for i in range(ps.d):
        for k in range(n):
            row[k] += w * ps.a[i][k]
        rhs += w * ps.b[i]
        w *= base
    return PlaneSystem([row], [rhs])


def plane_to_sphere(ps: PlaneSystem, num_vars: int):
    """Sphere whose {0,1}^N intersection equals the plane's.

    The plane is first aggregated to a single lattice-equivalent row (see
    aggregate_rows); the center is the exact orthogonal projection of
    (1/2,...,1/2) onto that hyperplane and radius^2 = N/4 - ||c - c'||^2.
    """
    half = Fraction(1, 2)
    if ps.d == 0:
        return Sphere([half] * num_vars, Fraction(num_vars, 4))
    ps = aggregate_rows(ps)
    a, b = ps.a, ps.b
    d, n = ps.d, ps.num_vars
    if n != num_vars:
        raise ValueError("plane dimension disagrees with num_vars")
    gram = [[Fraction(sum(a[i][k] * a[j][k] for k in range(n)))
             for j in range(d)] for i in range(d)]
    resid = [Fraction(b[i]) - sum(Fraction(a[i][k]) * half for k in range(n))
             for i in range(d)]
    lam = _solve_fraction(gram, resid)
    if lam is None:
        raise ValueError("plane rows are not independent")
    c = [half + sum(lam[i] * a[i][k] for i in range(d)) for k in range(n)]
    dist_sq = sum((ci - half) ** 2 for ci in c)
    r_sq = Fraction(num_vars, 4) - dist_sq
    if r_sq < 0:
        return EmptyIntersection(f"radius^2 = {r_sq} < 0")
    return Sphere(c, r_sq)


# -- Subset-Sum packing -----------------------------------------------------


@dataclass
class PackedSubsetSum:
    values: List[int]
    target: int
    base: int
    num_rows: int

    @property
    def instance(self) -> SubsetSumInstance:
        return SubsetSumInstance(list(self.values), self.target)

    def unpack(self, packed: int) -> List[int]:
        """Recover the balanced base-B digit column from a packed value."""
        digits = []
        v = packed
        for _ in range(self.num_rows):
            r = v % self.base
            if r > self.base // 2:
                r -= self.base
            digits.append(r)
            v = (v - r) // self.base
        return digits


def pack_subset_sum(ps: PlaneSystem) -> PackedSubsetSum:
    """Pack the columns of A into integers so that a subset of columns sums
    to b exactly when the packed subset sums to the packed target.

    Digits are balanced (may be negative, bounded by N*M in absolute value),
    with base the smallest power of two exceeding 2*(N*M + 1); since every
    digit sum stays below base/2 in absolute value, no carries can occur and
    the packing is exact over arbitrary-precision integers.
    """
    if ps.d == 0:
        return PackedSubsetSum([0] * ps.num_vars, 0, 2, 0)
    n = ps.num_vars
    m = max(max(abs(v) for row in ps.a for v in row),
            max(abs(v) for v in ps.b), 1)
    bound = 2 * (n * m + 1)
    base = 1
    while base <= bound:
        base <<= 1
    values = []
    for col in range(n):
        v = 0
        for row in range(ps.d - 1, -1, -1):
            v = v * base + ps.a[row][col]
        values.append(v)
    target = 0
    for row in range(ps.d - 1, -1, -1):
        target = target * base + ps.b[row]
    return PackedSubsetSum(values, target, base, ps.d)


# -- enumeration oracles ----------------------------------------------------


def plane_hypercube_vertices(ps: PlaneSystem, num_vars: int) -> List[int]:
    """All vertices of {0,1}^N on the plane, as bitmasks (bit i = x_i)."""
    if num_vars > 26:
        raise InstanceTooLarge(f"N={num_vars} exceeds enumeration bound 26")
    if ps.d == 0:
        return list(range(1 << num_vars))
    masks = np.arange(1 << num_vars, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(num_vars)) & 1).astype(np.int64)
    a = np.asarray(ps.a, dtype=np.int64)
    b = np.asarray(ps.b, dtype=np.int64)
    ok = np.all(bits @ a.T == b, axis=1)
    return [int(m) for m in masks[ok]]


def plane_hypercube_oracle(ps: PlaneSystem, num_vars: int) -> Optional[Tuple[int, ...]]:
    """First witness vertex (as a 0/1 tuple) or None."""
    sols = plane_hypercube_vertices(ps, num_vars)
    if not sols:
        return None
    m = sols[0]
    return tuple((m >> i) & 1 for i in range(num_vars))


def sphere_hypercube_vertices(s: Sphere) -> List[int]:
    """All vertices of {0,1}^N on the sphere (exact rational test), as bitmasks.

    Enumerates in Gray-code order so each step updates the squared distance
    in O(1) exact integer arithmetic.
    """
    n = s.num_vars
    if n > 26:
        raise InstanceTooLarge(f"N={n} exceeds enumeration bound 26")
    # common denominator q: squared distance * q^2 must be integer-comparable
    q = 1
    for c in s.center:
        q = q * c.denominator // math.gcd(q, c.denominator)
    q = q * s.radius_sq.denominator // math.gcd(q, s.radius_sq.denominator)
    # q is a multiple of radius_sq's denominator, so q^2 * radius_sq is integral
    target = q * q * s.radius_sq.numerator // s.radius_sq.denominator
    p = [int(q * c) for c in s.center]
    at0 = [pi * pi for pi in p]
    at1 = [(q - pi) ** 2 for pi in p]
    delta = [a1 - a0 for a0, a1 in zip(at0, at1)]
    total = sum(at0)
    out = []
    gray_prev = 0
    if total == target:
        out.append(0)
    for k in range(1, 1 << n):
        gray = k ^ (k >> 1)
        bit = (gray ^ gray_prev).bit_length() - 1
        if gray > gray_prev:
            total += delta[bit]
        else:
            total -= delta[bit]
        gray_prev = gray
        if total == target:
            out.append(gray)
    out.sort()
    return out


def sphere_hypercube_oracle(s: Sphere) -> Optional[Tuple[int, ...]]:
    sols = sphere_hypercube_vertices(s)
    if not sols:
        return None
    m = sols[0]
    return tuple((m >> i) & 1 for i in range(s.num_vars))


# -- JSON serialization -----------------------------------------------------


def plane_to_json_dict(ps: PlaneSystem) -> dict:
    return {
        "d": ps.d,
        "num_vars": ps.num_vars,
        "a": [[str(v) for v in row] for row in ps.a],
        "b": [str(v) for v in ps.b],
    }


def sphere_to_json_dict(s: Sphere) -> dict:
    return {
        "num_vars": s.num_vars,
        "center": [str(c) for c in s.center],
        "radius_sq": str(s.radius_sq),
    }
