"""Smaller reformulations: factorization penalty, sigmoid substitution,
clique and vertex-cover objectives, angle-based 3-coloring, and the monomial
counting identity for 3-SAT."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ArityMismatch, InstanceTooLarge
from .grassmann import AdjacencyMatrix
from .polynomial import SparsePolynomial
from .sat_encode import CnfFormula


# ---------------------------------------------------------------------------
# factorization


def factorization_objective(n: int, x: float) -> float:
    """cos(2 pi x) + cos(2 pi n/x); equals 2 exactly when x and n/x are both
    integers, i.e. when x divides n."""
    if n <= 0:
        raise ValueError("n must be a positive integer")
    if x <= 0:
        raise ValueError("x must be positive")
    return math.cos(2 * math.pi * x) + math.cos(2 * math.pi * n / x)


def factorization_grid_max(n: int, lo: int = 2, hi: Optional[int] = None,
                           per_unit: int = 50) -> Tuple[float, float]:
    """Dense scan of the objective on [lo, hi]; returns (best x, best value).
    Desk-scale helper, not a factoring algorithm."""
    if hi is None:
        hi = n
    best_x, best_v = float(lo), factorization_objective(n, lo)
    steps = (hi - lo) * per_unit
    for i in range(steps + 1):
        x = lo + i / per_unit
        v = factorization_objective(n, x)
        if v > best_v:
            best_x, best_v = x, v
    return best_x, best_v


# ---------------------------------------------------------------------------
# sigmoid substitution


def _logistic(z):
    return 1.0 / (1.0 + np.exp(-z))


def _logistic_d(z):
    s = _logistic(z)
    return s * (1.0 - s)


def _arctan01(z):
    return np.arctan(z) / math.pi + 0.5


def _arctan01_d(z):
    return 1.0 / (math.pi * (1.0 + z * z))


@dataclass
class SubstitutedObjective:
    """p composed with a coordinatewise squashing map onto (0,1), turning the
    box-constrained problem into an unconstrained one."""
    poly: SparsePolynomial
    kind: str

    def __post_init__(self):
        if self.kind not in ("logistic", "arctan"):
            raise ValueError(f"unknown sigmoid kind {self.kind!r}")
        self._f = _logistic if self.kind == "logistic" else _arctan01
        self._fd = _logistic_d if self.kind == "logistic" else _arctan01_d
        self._grads = self.poly.gradient()

    def value(self, z: Sequence[float]) -> float:
        return self.poly.evaluate(self._f(np.asarray(z, dtype=float)))

    def gradient(self, z: Sequence[float]) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        x = self._f(z)
        inner = np.array([g.evaluate(x) for g in self._grads])
        return inner * self._fd(z)


def sigmoid_substitute(p: SparsePolynomial, kind: str = "logistic") -> SubstitutedObjective:
    return SubstitutedObjective(p, kind)


# ---------------------------------------------------------------------------
# clique


def clique_objective(a: AdjacencyMatrix, v: Sequence[bool], k: int) -> int:
    """v^T A v with zero diagonal: twice the number of edges inside the
    selected set.  A clique of size k scores k(k-1); with a unit diagonal the
    same set would score k^2.  The brute-force companion below is the ground
    truth for what the maximum is."""
    if len(v) != a.n:
        raise ArityMismatch(f"selector length {len(v)} != n {a.n}")
    if sum(map(bool, v)) != k:
        raise ArityMismatch(f"selector weight {sum(map(bool, v))} != k {k}")
    sel = [i for i, b in enumerate(v) if b]
    return sum(1 for i in sel for j in sel if a.entries[i][j])


def clique_brute_force(a: AdjacencyMatrix, k: int) -> Tuple[int, Tuple[int, ...]]:
    """Max of the objective over all weight-k selectors; returns the value
    and one argmax set."""
    if a.n > 20:
        raise InstanceTooLarge(f"n={a.n} clique scan too large")
    best, arg = -1, ()
    for sel in itertools.combinations(range(a.n), k):
        val = sum(1 for i in sel for j in sel if a.entries[i][j])
        if val > best:
            best, arg = val, sel
    return best, arg


def has_clique(a: AdjacencyMatrix, k: int) -> bool:
    if k <= 1:
        return a.n >= k
    best, _ = clique_brute_force(a, k)
    return best == k * (k - 1)


# ---------------------------------------------------------------------------
# vertex cover


def vertex_cover_feasible(a: AdjacencyMatrix, v: Sequence[bool], k: int) -> bool:
    """With a unit diagonal added, Av >= 1 componentwise says every vertex is
    selected or has a selected neighbor (the shifted-cone membership test).

    This is a relaxation of covering: on a graph without isolated vertices
    every vertex cover passes it, but the converse fails (in a triangle a
    single selected vertex dominates all rows yet leaves an edge uncovered),
    and an unselected isolated vertex fails the row test despite having
    nothing to cover.  is_vertex_cover is the ground-truth edge check.
    """
    if len(v) != a.n:
        raise ArityMismatch(f"selector length {len(v)} != n {a.n}")
    if sum(map(bool, v)) != k:
        raise ArityMismatch(f"selector weight {sum(map(bool, v))} != k {k}")
    return cone_test(a, v)


def is_vertex_cover(a: AdjacencyMatrix, v: Sequence[bool]) -> bool:
    return all(v[i] or v[j] for i, j in a.edges())


def cone_test(a: AdjacencyMatrix, v: Sequence[bool]) -> bool:
    """The raw componentwise test (A + I)v >= 1, without the weight check."""
    vec = [1 if b else 0 for b in v]
    return all(sum(vec[j] for j in range(a.n) if a.entries[i][j]) + vec[i] >= 1
               for i in range(a.n))


# ---------------------------------------------------------------------------
# 3-coloring by angles


THIRD = 2 * math.pi / 3


def coloring_objective(a: AdjacencyMatrix, angles: Sequence[float]) -> float:
    """Sum over edges of (cos(phi_i - phi_j) + 1/2)^2: zero exactly when all
    neighboring angles differ by 120 degrees mod 360."""
    if len(angles) != a.n:
        raise ArityMismatch(f"{len(angles)} angles for {a.n} vertices")
    total = 0.0
    for i, j in a.edges():
        total += (math.cos(angles[i] - angles[j]) + 0.5) ** 2
    return total


def coloring_gradient(a: AdjacencyMatrix, angles: Sequence[float]) -> np.ndarray:
    g = np.zeros(a.n)
    for i, j in a.edges():
        d = angles[i] - angles[j]
        t = -2.0 * (math.cos(d) + 0.5) * math.sin(d)
        g[i] += t
        g[j] -= t
    return g


def round_to_coloring(angles: Sequence[float]) -> List[int]:
    """Shift all angles so the first vertex sits at 0, then snap each to the
    nearest of {0, 120, 240} degrees."""
    if not len(angles):
        return []
    shifted = [(a - angles[0]) % (2 * math.pi) for a in angles]
    colors = []
    for s in shifted:
        c = int(round(s / THIRD)) % 3
        colors.append(c)
    return colors


def is_proper_coloring(a: AdjacencyMatrix, colors: Sequence[int]) -> bool:
    return all(colors[i] != colors[j] for i, j in a.edges())


def coloring_descent(a: AdjacencyMatrix, seed: int, starts: int = 50,
                     iters: int = 3000, step: float = 0.1) -> Tuple[float, np.ndarray]:
    """Plain multi-start descent on the angle objective; returns the best
    value and its angle vector."""
    rng = np.random.default_rng(np.random.PCG64(seed))
    best_v, best_a = math.inf, None
    for _ in range(starts):
        ang = rng.random(a.n) * 2 * math.pi
        st = step
        val = coloring_objective(a, ang)
        for _ in range(iters):
            g = coloring_gradient(a, ang)
            if np.linalg.norm(g) < 1e-10:
                break
            cand = ang - st * g
            cval = coloring_objective(a, cand)
            if cval <= val:
                ang, val = cand, cval
            else:
                st *= 0.5
                if st < 1e-14:
                    break
        if val < best_v:
            best_v, best_a = val, ang
        if best_v < 1e-18:
            break
    return best_v, best_a


# ---------------------------------------------------------------------------
# monomial counting


def sat_monomial_count(f: CnfFormula) -> int:
    """Sum over assignments of the product of per-clause literal sums.

    Expanding the product gives 3^m monomials; one with k distinct variables
    and no complementary literal pair sums to 2^(n-k) over the cube, and any
    pair x, 1-x from the same variable kills the monomial's surplus so the
    contribution is handled by the substitution below.  The count is positive
    exactly when the formula is satisfiable, since each satisfying assignment
    contributes at least 1.
    """
    m = len(f.clauses)
    if m > 14:
        raise InstanceTooLarge(f"{m} clauses exceeds the 3^14 expansion bound")
    n = f.num_vars

    # DFS over clause choices; state per variable: 0 unseen, 1 positive
    # literal present, 2 negated literal present, 3 both (factor x(1-x))
    total = 0

    def rec(ci: int, state: dict, weight: int):
        nonlocal total
        if ci == m:
            # each x_v or (1-x_v) factor sums to 1 over that variable's two
            # values, so the monomial contributes 2^(untouched variables)
            total += weight * (1 << (n - len(state)))
            return
        for lit in f.clauses[ci]:
            s = state.get(lit.var, 0)
            add = 2 if lit.negated else 1
            ns = s | add
            if ns == 3:
                continue  # complementary pair: zero on the cube
            prev = state.get(lit.var)
            state[lit.var] = ns
            rec(ci + 1, state, weight)
            if prev is None:
                del state[lit.var]
            else:
                state[lit.var] = prev

    rec(0, {}, 1)
    return total


def sat_monomial_brute(f: CnfFormula) -> int:
    """Direct sum over all assignments of the product of clause literal
    sums (each literal contributing its 0/1 value)."""
    if f.num_vars > 20:
        raise InstanceTooLarge(f"n={f.num_vars} enumeration too large")
    total = 0
    for bits in itertools.product((False, True), repeat=f.num_vars):
        prod = 1
        for cl in f.clauses:
            s = sum((not bits[l.var]) if l.negated else bits[l.var] for l in cl)
            prod *= s
            if prod == 0:
                break
        total += prod
    return total
