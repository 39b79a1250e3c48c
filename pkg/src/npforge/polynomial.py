"""Exact sparse multivariate polynomial arithmetic.

A monomial is a tuple of (variable index, exponent) pairs, sorted by index,
with all exponents positive.  A polynomial maps monomials to exact integer
coefficients (Python ints, so arbitrary precision) and records its number of
variables.  Real-valued evaluation converts to floats at the last moment;
integer-point evaluation stays exact.

Term order everywhere is graded lexicographic, so serialization and
summation are deterministic.
"""

from __future__ import annotations

import json
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatch, UnsupportedDegree

Monomial = Tuple[Tuple[int, int], ...]

_CONST: Monomial = ()


def monomial_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps: Dict[int, int] = dict(a)
    for var, e in b:
        exps[var] = exps.get(var, 0) + e
    return tuple(sorted(exps.items()))


def _grlex_key(m: Monomial):
    # graded lex: total degree first, then the exponent sequence
    return (monomial_degree(m), m)


class SparsePolynomial:
    """Immutable-by-convention sparse polynomial with integer coefficients."""

    __slots__ = ("num_vars", "terms")

    def __init__(self, num_vars: int, terms: Dict[Monomial, int] | None = None):
        self.num_vars = int(num_vars)
        clean: Dict[Monomial, int] = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff == 0:
                    continue
                for var, exp in mono:
                    if not (0 <= var < self.num_vars):
                        raise DimensionMismatch(
                            f"variable {var} out of range for num_vars={self.num_vars}")
                    if exp <= 0:
                        raise ValueError(f"non-positive exponent in monomial {mono}")
                clean[mono] = coeff
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, num_vars: int) -> "SparsePolynomial":
        return cls(num_vars, {})

    @classmethod
    def constant(cls, num_vars: int, c: int) -> "SparsePolynomial":
        return cls(num_vars, {_CONST: int(c)})

    @classmethod
    def variable(cls, num_vars: int, idx: int) -> "SparsePolynomial":
        return cls(num_vars, {((idx, 1),): 1})

    @classmethod
    def linear(cls, num_vars: int, coeffs: Dict[int, int], const: int = 0) -> "SparsePolynomial":
        """const + sum coeffs[i] * x_i."""
        terms: Dict[Monomial, int] = {}
        if const:
            terms[_CONST] = const
        for var, c in coeffs.items():
            if c:
                terms[((var, 1),)] = c
        return cls(num_vars, terms)

    # -- basic queries -------------------------------------------------

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(monomial_degree(m) for m in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> List[Tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]))

    # -- arithmetic ----------------------------------------------------

    def add(self, other: "SparsePolynomial") -> "SparsePolynomial":
        nv = max(self.num_vars, other.num_vars)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            s = out.get(mono, 0) + coeff
            if s:
                out[mono] = s
            elif mono in out:
                del out[mono]
        return SparsePolynomial(nv, out)

    def neg(self) -> "SparsePolynomial":
        return SparsePolynomial(self.num_vars, {m: -c for m, c in self.terms.items()})

    def sub(self, other: "SparsePolynomial") -> "SparsePolynomial":
        return self.add(other.neg())

    def mul(self, other: "SparsePolynomial") -> "SparsePolynomial":
        nv = max(self.num_vars, other.num_vars)
        out: Dict[Monomial, int] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = monomial_mul(ma, mb)
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                elif m in out:
                    del out[m]
        return SparsePolynomial(nv, out)

    def scale(self, c: int) -> "SparsePolynomial":
        if c == 0:
            return SparsePolynomial.zero(self.num_vars)
        return SparsePolynomial(self.num_vars, {m: c * v for m, v in self.terms.items()})

    def square(self) -> "SparsePolynomial":
        return self.mul(self)

    def __add__(self, other):
        return self.add(other)

    def __sub__(self, other):
        return self.sub(other)

    def __neg__(self):
        return self.neg()

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return self.mul(other)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, SparsePolynomial)
                and self.num_vars == other.num_vars
                and self.terms == other.terms)

    def __repr__(self):
        if not self.terms:
            return "SparsePolynomial(0)"
        parts = []
        for mono, coeff in self.sorted_terms():
            mono_s = "*".join(f"x{v}^{e}" if e > 1 else f"x{v}" for v, e in mono) or "1"
            parts.append(f"{coeff}*{mono_s}")
        return "SparsePolynomial(" + " + ".join(parts) + ")"

    def rename_vars(self, mapping: Dict[int, int], num_vars: int) -> "SparsePolynomial":
        """Reindex variables; mapping must be injective on the used variables."""
        out: Dict[Monomial, int] = {}
        for mono, coeff in self.terms.items():
            new = tuple(sorted((mapping[v], e) for v, e in mono))
            out[new] = coeff
        return SparsePolynomial(num_vars, out)

    def embed(self, num_vars: int) -> "SparsePolynomial":
        """Same polynomial viewed in a larger variable space."""
        if num_vars < self.num_vars:
            raise DimensionMismatch("cannot shrink variable space")
        return SparsePolynomial(num_vars, dict(self.terms))

    # -- evaluation ----------------------------------------------------

    def evaluate(self, pt: Sequence[float]) -> float:
        if len(pt) != self.num_vars:
            raise DimensionMismatch(
                f"point has length {len(pt)}, expected {self.num_vars}")
        total = 0.0
        for mono, coeff in self.sorted_terms():
            v = float(coeff)
            for var, exp in mono:
                v *= float(pt[var]) ** exp
            total += v
        return total

    def evaluate_int(self, pt: Sequence[int]) -> int:
        """Exact evaluation at an integer point."""
        if len(pt) != self.num_vars:
            raise DimensionMismatch(
                f"point has length {len(pt)}, expected {self.num_vars}")
        total = 0
        for mono, coeff in self.terms.items():
            v = coeff
            for var, exp in mono:
                v *= pt[var] ** exp
            total += v
        return total

    # -- calculus ------------------------------------------------------

    def partial(self, i: int) -> "SparsePolynomial":
        out: Dict[Monomial, int] = {}
        for mono, coeff in self.terms.items():
            exps = dict(mono)
            e = exps.get(i, 0)
            if e == 0:
                continue
            if e == 1:
                del exps[i]
            else:
                exps[i] = e - 1
            m = tuple(sorted(exps.items()))
            out[m] = out.get(m, 0) + coeff * e
        return SparsePolynomial(self.num_vars, out)

    def gradient(self) -> List["SparsePolynomial"]:
        return [self.partial(i) for i in range(self.num_vars)]

    def laplacian(self) -> "SparsePolynomial":
        out = SparsePolynomial.zero(self.num_vars)
        for i in range(self.num_vars):
            out = out.add(self.partial(i).partial(i))
        return out

    # -- line restriction ----------------------------------------------

    def restrict_to_line(self, base: Sequence[float], direction: Sequence[float]) -> List[float]:
        """Coefficients (ascending) of t -> p(base + t*direction)."""
        if len(base) != self.num_vars or len(direction) != self.num_vars:
            raise DimensionMismatch("base/direction length mismatch")
        if not any(d != 0 for d in direction):
            raise ValueError("direction must be nonzero")
        acc = [0.0]
        for mono, coeff in self.sorted_terms():
            term = [float(coeff)]
            for var, exp in mono:
                lin = [float(base[var]), float(direction[var])]
                for _ in range(exp):
                    term = _uni_mul(term, lin)
            acc = _uni_add(acc, term)
        return acc

    # -- serialization ---------------------------------------------------
    # Schema: {"num_vars": n, "terms": [{"exps": [[var, exp], ...],
    #          "coeff": "decimal-string"}]}.  Coefficients are strings so
    # arbitrary precision survives the round trip.

    def to_json_dict(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "terms": [
                {"exps": [[v, e] for v, e in mono], "coeff": str(coeff)}
                for mono, coeff in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "SparsePolynomial":
        terms: Dict[Monomial, int] = {}
        for t in d["terms"]:
            mono = tuple(sorted((int(v), int(e)) for v, e in t["exps"]))
            terms[mono] = int(t["coeff"])
        return cls(int(d["num_vars"]), terms)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> "SparsePolynomial":
        return cls.from_json_dict(json.loads(s))


def _uni_add(a: List[float], b: List[float]) -> List[float]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return out


def _uni_mul(a: List[float], b: List[float]) -> List[float]:
    out = [0.0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0.0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return out


def uni_evaluate(coeffs: Sequence[float], t: float) -> float:
    v = 0.0
    for c in reversed(coeffs):
        v = v * t + c
    return v


def univariate_minima(coeffs: Sequence[float], tol: float = 1e-9) -> List[Tuple[float, float]]:
    """All real local minima of a univariate polynomial of degree <= 6.

    Minima are located as real roots of the derivative (companion-matrix
    eigenvalues via numpy.roots); each candidate is kept when the second
    derivative is positive, or, for flat candidates, when nearby probes
    confirm a local minimum.  Returned sorted by t.
    """
    cs = list(coeffs)
    while cs and abs(cs[-1]) <= tol:
        cs.pop()
    deg = len(cs) - 1
    if deg > 6:
        raise UnsupportedDegree(f"degree {deg} > 6")
    if deg <= 1:
        return []
    dcs = [cs[i] * i for i in range(1, len(cs))]
    roots = np.roots(list(reversed(dcs)))
    scale = max(1.0, max(abs(c) for c in cs))
    cands = sorted(float(r.real) for r in roots if abs(r.imag) < 1e-7 * max(1.0, abs(r)))
    out: List[Tuple[float, float]] = []
    d2cs = [dcs[i] * i for i in range(1, len(dcs))]
    h = 1e-4 * max(1.0, max((abs(t) for t in cands), default=1.0))
    for t in cands:
        if out and abs(t - out[-1][0]) < 1e-8 * max(1.0, abs(t)):
            continue
        curv = uni_evaluate(d2cs, t) if d2cs else 0.0
        val = uni_evaluate(cs, t)
        if curv > tol * scale:
            out.append((t, val))
        elif abs(curv) <= tol * scale:
            # flat second derivative (e.g. higher-order root): probe both sides
            if uni_evaluate(cs, t - h) >= val and uni_evaluate(cs, t + h) >= val:
                out.append((t, val))
    return out
