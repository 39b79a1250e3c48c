"""Hamilton-cycle detection through anticommuting generators.

A Grassmann element is a map from generator subsets (bitmasks) to integer
coefficients; products pick up the parity of the merge permutation and vanish
when masks overlap, so walks that revisit a vertex annihilate.  With the
paired diagonal diag(g_{2i} g_{2i+1}) every surviving Hamilton-cycle term has
sign +1, and the trace of (A D')^n is n times the directed cycle count.

All public counts are directed; for n >= 3 the undirected count is half.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InstanceTooLarge, ParseError


# ---------------------------------------------------------------------------
# exterior algebra


def _merge_sign(a_mask: int, b_mask: int) -> int:
    """Parity of interleaving two sorted disjoint index sets: for each
    generator in b, count the generators of a above it."""
    sign = 1
    m = b_mask
    while m:
        low = m & -m
        idx = low.bit_length() - 1
        if bin(a_mask >> (idx + 1)).count("1") & 1:
            sign = -sign
        m ^= low
    return sign


class GrassmannElement:
    """Sum of products of anticommuting generators with integer coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[int, int]] = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def scalar(cls, c: int) -> "GrassmannElement":
        return cls({0: c})

    @classmethod
    def generator(cls, i: int) -> "GrassmannElement":
        return cls({1 << i: 1})

    @classmethod
    def generators(cls, *idx: int) -> "GrassmannElement":
        """Ordered product of distinct generators."""
        el = cls.scalar(1)
        for i in idx:
            el = gmul(el, cls.generator(i))
        return el

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, mask: int) -> int:
        return self.terms.get(mask, 0)

    def __add__(self, other: "GrassmannElement") -> "GrassmannElement":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            elif m in out:
                del out[m]
        return GrassmannElement(out)

    def __neg__(self) -> "GrassmannElement":
        return GrassmannElement({m: -c for m, c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, GrassmannElement) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "GrassmannElement(0)"
        parts = []
        for m in sorted(self.terms):
            gens = "".join(f"g{i}" for i in range(m.bit_length()) if m >> i & 1) or "1"
            parts.append(f"{self.terms[m]}*{gens}")
        return "GrassmannElement(" + " + ".join(parts) + ")"


def gmul(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    out: Dict[int, int] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            if ma & mb:
                continue
            m = ma | mb
            s = out.get(m, 0) + _merge_sign(ma, mb) * ca * cb
            if s:
                out[m] = s
            elif m in out:
                del out[m]
    return GrassmannElement(out)


def paired_diag(n: int) -> List[GrassmannElement]:
    """Degree-2 diagonal entries g_{2i} g_{2i+1}; they commute pairwise and
    square to zero."""
    return [GrassmannElement({(1 << (2 * i)) | (1 << (2 * i + 1)): 1})
            for i in range(n)]


# ---------------------------------------------------------------------------
# graphs


@dataclass
class AdjacencyMatrix:
    n: int
    entries: List[List[bool]]

    def __post_init__(self):
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise ValueError("adjacency matrix shape mismatch")
        for i in range(self.n):
            if self.entries[i][i]:
                raise ValueError("self-loops are not allowed")
            for j in range(self.n):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ValueError("adjacency matrix must be symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[Tuple[int, int]]) -> "AdjacencyMatrix":
        ent = [[False] * n for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop {u}")
            ent[u][v] = ent[v][u] = True
        return cls(n, ent)

    @classmethod
    def complete(cls, n: int) -> "AdjacencyMatrix":
        return cls(n, [[i != j for j in range(n)] for i in range(n)])

    @classmethod
    def cycle(cls, n: int) -> "AdjacencyMatrix":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    def neighbors(self) -> List[List[int]]:
        return [[j for j in range(self.n) if self.entries[i][j]]
                for i in range(self.n)]

    def edges(self) -> List[Tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)
                if self.entries[i][j]]


def parse_graph(text: str) -> AdjacencyMatrix:
    """Edge-list ("n m" header then "u v" lines, 0-based) or DIMACS graph
    format ("p edge n m" then "e u v" lines, 1-based)."""
    lines = [l.strip() for l in text.splitlines() if l.strip() and not l.startswith("c")]
    if not lines:
        raise ParseError("empty graph file")
    edges: List[Tuple[int, int]] = []
    if lines[0].startswith("p"):
        parts = lines[0].split()
        if len(parts) != 4 or parts[1] not in ("edge", "edges"):
            raise ParseError(f"malformed DIMACS graph header {lines[0]!r}")
        n = int(parts[2])
        for ln in lines[1:]:
            toks = ln.split()
            if toks[0] != "e" or len(toks) != 3:
                raise ParseError(f"malformed edge line {ln!r}")
            edges.append((int(toks[1]) - 1, int(toks[2]) - 1))
    else:
        head = lines[0].split()
        if len(head) != 2:
            raise ParseError(f"expected 'n m' header, got {lines[0]!r}")
        n = int(head[0])
        for ln in lines[1:]:
            toks = ln.split()
            if len(toks) != 2:
                raise ParseError(f"malformed edge line {ln!r}")
            edges.append((int(toks[0]), int(toks[1])))
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"edge ({u},{v}) out of range for n={n}")
    return AdjacencyMatrix.from_edges(n, edges)


# ---------------------------------------------------------------------------
# Hamilton detection

_MAX_N = 14


def _check_size(a: AdjacencyMatrix, min_n: int = 1):
    if a.n < min_n:
        raise ValueError(f"need at least {min_n} vertices, got {a.n}")
    if a.n > _MAX_N:
        raise InstanceTooLarge(f"n={a.n} exceeds bound {_MAX_N}")


def hamilton_trace(a: AdjacencyMatrix) -> int:
    """Coefficient of the full generator monomial in Tr((A D')^n).

    Anticommutation with the paired diagonal means a walk term survives
    exactly when no vertex repeats, and pairs make every surviving sign +1;
    so the DFS simply counts closed length-n walks covering every vertex
    (n times the directed Hamilton cycle count).
    """
    _check_size(a, 3)
    n = a.n
    nbr = a.neighbors()
    full = (1 << n) - 1
    total = 0
    for start in range(n):
        stack = [(start, 1 << start, 1)]
        while stack:
            v, mask, depth = stack.pop()
            if depth == n:
                if a.entries[v][start]:
                    total += 1
                continue
            for w in nbr[v]:
                if not mask >> w & 1:
                    stack.append((w, mask | 1 << w, depth + 1))
    assert total % n == 0
    return total


def single_diag_trace(a: AdjacencyMatrix) -> int:
    """Same walk sum with the unpaired diagonal diag(g_i): each Hamilton
    cycle contributes the sign of its vertex permutation, so cancellation can
    hide cycles (the reason the paired construction exists)."""
    _check_size(a, 3)
    n = a.n
    nbr = a.neighbors()
    total = 0
    for start in range(n):
        # product grows on the right; appending generator w flips the sign
        # once per already-present generator with a larger index
        stack = [(start, 1 << start, 1, _merge_sign(0, 1 << start))]
        while stack:
            v, mask, depth, sign = stack.pop()
            if depth == n:
                if a.entries[v][start]:
                    total += sign
                continue
            for w in nbr[v]:
                if not mask >> w & 1:
                    flips = bin(mask >> (w + 1)).count("1")
                    stack.append((w, mask | 1 << w, depth + 1,
                                  -sign if flips & 1 else sign))
        # closing the walk multiplies by the start generator, already in mask:
        # with D the closing factor is A[v][start] only, no extra generator
    return total


def hamilton_oracle(a: AdjacencyMatrix) -> int:
    """Directed Hamilton cycle count by DFS from a fixed start vertex."""
    _check_size(a, 1)
    n = a.n
    if n == 1:
        return 0
    nbr = a.neighbors()
    count = 0
    stack = [(0, 1, 1)]
    while stack:
        v, mask, depth = stack.pop()
        if depth == n:
            if a.entries[v][0]:
                count += 1
            continue
        for w in nbr[v]:
            if not mask >> w & 1:
                stack.append((w, mask | 1 << w, depth + 1))
    return count


def derivative_trace(a: AdjacencyMatrix) -> int:
    """d^n/dx_1..dx_n Tr((A diag(x))^n): the multilinear part of the closed
    walk sum.  Computed by subset DP (Held-Karp style) over walks from a
    fixed start, times n for the choice of trace position."""
    _check_size(a, 3)
    n = a.n
    adj = a.entries
    # dp[(mask, v)] = number of simple paths 0 -> v visiting exactly mask
    dp = {(1, 0): 1}
    for mask in range(1, 1 << n):
        if not mask & 1:
            continue
        for v in range(n):
            if not mask >> v & 1:
                continue
            cnt = dp.get((mask, v))
            if not cnt:
                continue
            for w in range(n):
                if mask >> w & 1 or not adj[v][w]:
                    continue
                key = (mask | 1 << w, w)
                dp[key] = dp.get(key, 0) + cnt
    full = (1 << n) - 1
    cycles = sum(cnt for (mask, v), cnt in dp.items()
                 if mask == full and adj[v][0])
    return n * cycles


def signed_cycle_sum(a: AdjacencyMatrix) -> int:
    """Independent check for single_diag_trace: enumerate directed Hamilton
    cycles as vertex sequences and sum permutation signs of the generator
    products, including all n trace starting points."""
    import itertools
    _check_size(a, 3)
    n = a.n
    total = 0
    for start in range(n):
        rest = [v for v in range(n) if v != start]
        for perm in itertools.permutations(rest):
            seq = (start,) + perm
            ok = all(a.entries[seq[i]][seq[(i + 1) % n]] for i in range(n))
            if not ok:
                continue
            # walk start -> perm... -> start appends generators in order
            # perm[0], ..., perm[-1], start
            order = list(perm) + [start]
            sign = 1
            for i in range(n):
                for j in range(i + 1, n):
                    if order[i] > order[j]:
                        sign = -sign
            total += sign
    return total


# ---------------------------------------------------------------------------
# explicit matrix representation


def matrix_rep(k: int) -> List[np.ndarray]:
    """Integer 2^k x 2^k matrices realizing k anticommuting generators.

    Fermionic ladder construction with generator i built as
    I^(k-1-i) (x) L (x) Z^i, where L = [[0,0],[1,0]] and Z = diag(1,-1); this
    ordering reproduces the standard explicit 4x4 pair at k = 2.
    """
    if k > 12:
        raise InstanceTooLarge(f"k={k} gives 2^{k} matrices; bound is 12")
    eye = np.eye(2, dtype=np.int64)
    low = np.array([[0, 0], [1, 0]], dtype=np.int64)
    z = np.array([[1, 0], [0, -1]], dtype=np.int64)
    mats = []
    for i in range(k):
        m = np.eye(1, dtype=np.int64)
        for _ in range(k - 1 - i):
            m = np.kron(m, eye)
        m = np.kron(m, low)
        for _ in range(i):
            m = np.kron(m, z)
        mats.append(m)
    return mats


def graph_report(a: AdjacencyMatrix) -> dict:
    trace = hamilton_trace(a)
    directed = hamilton_oracle(a)
    return {
        "n": a.n,
        "trace": trace,
        "directed_cycles": directed,
        "has_hamilton": directed > 0,
    }
