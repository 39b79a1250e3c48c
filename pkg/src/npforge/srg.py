"""Strongly regular graphs as point clouds, and rotation-invariant
fingerprints for comparing them.

The pipeline: validate SRG parameters, compute the analytic eigenstructure,
take an eigenspace's orthonormal basis and read its columns as m unit
vectors, describe that cloud by quadratic and degree-6 polynomials, and
export rotation invariants.  Two graphs whose invariant vectors differ are
certainly non-isomorphic; agreement proves nothing, so the comparison
verdicts are DISTINCT and INDISTINGUISHABLE, never "isomorphic".

Thick-cycle invariants are computed through the Gram matrix rather than the
n^6 coefficient tensor; see docs/thick_cycles.md for the derivation and the
dense cross-check used in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DegenerateDirection, DimensionMismatch
from .grassmann import AdjacencyMatrix


# ---------------------------------------------------------------------------
# parameters and eigenstructure


@dataclass(frozen=True)
class SrgParams:
    m: int
    k: int
    nu: int
    mu: int


@dataclass(frozen=True)
class NotSrg:
    reason: str


def check_srg(g: AdjacencyMatrix) -> Union[SrgParams, NotSrg]:
    """Direct counting check of regularity and the two common-neighbor
    constants, plus the (m-k-1) mu = k (k-nu-1) consistency identity."""
    m = g.n
    if m < 2:
        return NotSrg("too few vertices")
    a = np.array(g.entries, dtype=np.int64)
    degs = a.sum(axis=1)
    k = int(degs[0])
    if not (degs == k).all():
        return NotSrg("not regular")
    common = a @ a
    nu = mu = None
    for i in range(m):
        for j in range(i + 1, m):
            c = int(common[i, j])
            if a[i, j]:
                if nu is None:
                    nu = c
                elif c != nu:
                    return NotSrg("adjacent common-neighbor count varies")
            else:
                if mu is None:
                    mu = c
                elif c != mu:
                    return NotSrg("non-adjacent common-neighbor count varies")
    if nu is None:
        return NotSrg("no edges")
    if mu is None:
        return NotSrg("complete graph: no non-adjacent pairs")
    if (m - k - 1) * mu != k * (k - nu - 1):
        return NotSrg("parameter identity fails")
    return SrgParams(m, k, nu, mu)


def srg_eigen(p: SrgParams) -> List[Tuple[float, int]]:
    """Analytic spectrum [(k,1), (lambda+, mult+), (lambda-, mult-)].

    Multiplicities are rounded to integers; a residual above 1e-6 means the
    parameters are inconsistent and raises.
    """
    disc = (p.nu - p.mu) ** 2 + 4 * (p.k - p.mu)
    if disc <= 0:
        raise ValueError("non-positive discriminant")
    root = math.sqrt(disc)
    out: List[Tuple[float, int]] = [(float(p.k), 1)]
    for sign in (+1, -1):
        lam = 0.5 * ((p.nu - p.mu) + sign * root)
        mult = 0.5 * ((p.m - 1) - sign * (2 * p.k + (p.m - 1) * (p.nu - p.mu)) / root)
        rounded = round(mult)
        if abs(mult - rounded) > 1e-6:
            raise ValueError(f"non-integral multiplicity {mult}")
        out.append((lam, int(rounded)))
    assert out[1][1] + out[2][1] + 1 == p.m
    return out


# ---------------------------------------------------------------------------
# point clouds


@dataclass
class PointCloud:
    points: np.ndarray      # m x n, unit rows
    beta: float
    gamma: float
    adjacency: AdjacencyMatrix

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def n(self) -> int:
        return self.points.shape[1]

    def gram(self) -> np.ndarray:
        return self.points @ self.points.T


def eigenspace_points(g: AdjacencyMatrix, lam: float,
                      tol: float = 1e-6) -> PointCloud:
    """Columns of an orthonormal eigenspace basis of the adjacency matrix,
    read per vertex and scaled to the unit sphere.

    The Gram matrix of the rescaled points takes exactly three values: 1 on
    the diagonal, beta across edges, gamma across non-edges.
    """
    a = np.array(g.entries, dtype=float)
    w, v = np.linalg.eigh(a)
    sel = np.abs(w - lam) < tol
    if not sel.any():
        raise ValueError(f"{lam} is not an eigenvalue (tolerance {tol})")
    basis = v[:, sel]                  # m x n, orthonormal columns
    pts = basis.copy()                 # row i = raw point for vertex i
    norms = np.linalg.norm(pts, axis=1)
    if norms.min() < 1e-12:
        raise ValueError("a vertex projects to zero in this eigenspace")
    pts = pts / norms[:, None]
    gmat = pts @ pts.T
    adj = np.array(g.entries, dtype=bool)
    off = ~np.eye(g.n, dtype=bool)
    betas = gmat[adj]
    gammas = gmat[off & ~adj]
    beta = float(betas.mean()) if betas.size else 0.0
    gamma = float(gammas.mean()) if gammas.size else 0.0
    if betas.size and np.abs(betas - beta).max() > 1e-8:
        raise ValueError("adjacent scalar products are not constant")
    if gammas.size and np.abs(gammas - gamma).max() > 1e-8:
        raise ValueError("non-adjacent scalar products are not constant")
    return PointCloud(pts, beta, gamma, g)


def directional_order(pc: PointCloud, v: Sequence[float],
                      rng: Optional[np.random.Generator] = None,
                      resamples: int = 10) -> Tuple[List[int], np.ndarray]:
    """Vertices sorted by projection onto v; ties trigger a resample of the
    direction (rng required) up to `resamples` times."""
    v = np.asarray(v, dtype=float)
    for _ in range(resamples + 1):
        proj = pc.points @ v
        s = np.sort(proj)
        if np.min(np.diff(s)) > 1e-12 * max(1.0, np.abs(s).max()):
            return list(np.argsort(proj)), v
        if rng is None:
            break
        v = rng.standard_normal(pc.n)
        v /= np.linalg.norm(v)
    raise DegenerateDirection("tied projections persist after resampling")


# ---------------------------------------------------------------------------
# affine space of quadrics through the cloud


def vectorize_symmetric(p: np.ndarray) -> np.ndarray:
    """(P_11..P_nn, sqrt2 P_12, ..., sqrt2 P_{n-1,n}); the euclidean dot of
    two images equals Tr(PQ)."""
    p = np.asarray(p, dtype=float)
    n = p.shape[0]
    if p.shape != (n, n) or np.abs(p - p.T).max() > 1e-12:
        raise ValueError("matrix must be symmetric")
    iu = np.triu_indices(n, 1)
    return np.concatenate([np.diag(p), math.sqrt(2) * p[iu]])


def unvectorize_symmetric(v: np.ndarray, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    p = np.zeros((n, n))
    p[np.diag_indices(n)] = v[:n]
    iu = np.triu_indices(n, 1)
    p[iu] = v[n:] / math.sqrt(2)
    p = p + np.triu(p, 1).T
    return p


@dataclass
class AffineMatrixSpace:
    n: int
    d: int
    basis: List[np.ndarray]   # symmetric n x n, orthonormal in Frobenius
    rank: int                 # rank of the point constraints

    @property
    def ambient(self) -> int:
        return self.n * (self.n + 1) // 2


def build_affine_space(pc: PointCloud) -> AffineMatrixSpace:
    """Orthonormal basis of the homogeneous directions of the quadric family
    through the cloud: vectorize the m point constraints, append the D
    canonical vectors, Gram-Schmidt the lot; the surviving appended vectors
    span the orthogonal complement of the constraints.

    The constant member of the family is the sphere itself (a multiple of
    the identity) and is dropped; only the homogeneous basis is compared
    between graphs.
    """
    n = pc.n
    d_amb = n * (n + 1) // 2
    rows = [vectorize_symmetric(np.outer(x, x)) for x in pc.points]
    vecs = rows + [np.eye(d_amb)[j] for j in range(d_amb)]
    ortho: List[np.ndarray] = []
    appended: List[np.ndarray] = []
    rank = 0
    for idx, v in enumerate(vecs):
        w = v.copy()
        for u in ortho:
            w -= (w @ u) * u
        norm = np.linalg.norm(w)
        if norm < 1e-9:
            continue
        w /= norm
        ortho.append(w)
        if idx < len(rows):
            rank += 1
        else:
            appended.append(w)
    basis = [unvectorize_symmetric(w, n) for w in appended]
    space = AffineMatrixSpace(n, len(basis), basis, rank)
    for p in basis:
        vals = np.einsum("ki,ij,kj->k", pc.points, p, pc.points)
        assert np.abs(vals).max() < 1e-8, "basis matrix not homogeneous on the cloud"
    return space


# ---------------------------------------------------------------------------
# invariants


def invariants_deg2(p: np.ndarray, n: Optional[int] = None) -> List[Tuple[str, float]]:
    """Tr(P^l) for l = 1..n: a complete rotation-invariant description of a
    single quadratic form."""
    p = np.asarray(p, dtype=float)
    if n is None:
        n = p.shape[0]
    w = np.linalg.eigvalsh(p)
    return [(f"tr_pow_{l}", float(np.sum(w ** l))) for l in range(1, n + 1)]


def invariants_deg3(space: AffineMatrixSpace) -> List[Tuple[str, float]]:
    """Contractions of p_ijk = Tr(P_i P_j P_k) with every index summed
    exactly twice.

    These are invariant both under rotating R^n (which conjugates every
    basis matrix by the same orthogonal Q, leaving the traces alone) and
    under re-picking the orthonormal basis of the space (an orthogonal mix
    of the P_i, absorbed by the paired index sums).  Per-matrix quantities
    like Tr(P_1^3) are NOT basis-stable and are deliberately not exported.
    """
    d = space.d
    p = np.zeros((d, d, d))
    prods = [[space.basis[i] @ space.basis[j] for j in range(d)] for i in range(d)]
    for i in range(d):
        for j in range(d):
            for k in range(d):
                p[i, j, k] = np.trace(prods[i][j] @ space.basis[k])
    u = np.einsum("iij->j", p)
    return [
        ("p3_iij_jkk", float(u @ u)),
        ("p3_ijk_ijk", float(np.einsum("ijk,ijk->", p, p))),
        ("p3_ijk_jki", float(np.einsum("ijk,jki->", p, p))),
    ]


@dataclass
class Deg6Description:
    """p(x) = sum_i (x.x^i - 1)^2 (x.x^i - beta)^2 (x.x^i - gamma)^2: a
    nonnegative degree-6 polynomial vanishing exactly on the cloud within
    the unit sphere, evaluated in O(m n) from the stored points."""
    points: np.ndarray
    beta: float
    gamma: float

    def evaluate(self, x: Sequence[float]) -> float:
        t = self.points @ np.asarray(x, dtype=float)
        return float(np.sum(((t - 1) * (t - self.beta) * (t - self.gamma)) ** 2))


def deg6_description(pc: PointCloud) -> Deg6Description:
    return Deg6Description(pc.points.copy(), pc.beta, pc.gamma)


def thick_cycle_invariants(pc: PointCloud, kmax: int) -> Tuple[List[Tuple[str, float]], bool]:
    """k-th full contraction of the iterated triple-index product of the
    degree-6 leading tensor sum_i (x^i)^{(x)6}.

    Because the tensor is a sum of rank-one-per-point blocks, contracting
    three indices between two blocks yields the cubed Gram entry, so the
    k-th invariant collapses to Tr(H^k) with H_ij = (x^i . x^j)^3 (see
    docs/thick_cycles.md).  Returns (invariants, normalized): when the raw
    powers would overflow, eigenvalues are scaled by the spectral radius and
    the normalized flag is set.
    """
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    h = pc.gram() ** 3
    w = np.linalg.eigvalsh(h)
    radius = float(np.abs(w).max())
    normalized = radius > 1.0 and kmax * math.log10(radius) > 250
    if normalized and radius > 0:
        w = w / radius
    vals = [(f"thick_cycle_{k}", float(np.sum(w ** k))) for k in range(1, kmax + 1)]
    return vals, normalized


def thick_cycle_dense(points: np.ndarray, kmax: int) -> List[float]:
    """Literal n^6 tensor computation of the same invariants; cubic cost in
    tensor size, only usable at toy scale, kept as the correctness oracle
    for the Gram shortcut."""
    pts = np.asarray(points, dtype=float)
    m, n = pts.shape
    if n > 4:
        raise ValueError("dense check limited to n <= 4")
    t = np.zeros((n,) * 6)
    for x in pts:
        t += np.einsum("a,b,c,d,e,f->abcdef", x, x, x, x, x, x)
    cur = t
    out = [float(np.einsum("abcabc->", cur))]
    for _ in range(kmax - 1):
        cur = np.einsum("abcijk,ijkdef->abcdef", cur, t)
        out.append(float(np.einsum("abcabc->", cur)))
    return out


def permutation_score_s3(p: np.ndarray) -> float:
    """s3 = sum of cubed entries; an orthogonal matrix has s2 = n and
    s3 <= n, with equality exactly at permutation matrices."""
    p = np.asarray(p, dtype=float)
    return float(np.sum(p ** 3))


def permutation_score_s2(p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float)
    return float(np.sum(p ** 2))


# ---------------------------------------------------------------------------
# fixtures: the classic parameter-sharing pair


def rooks_graph_4x4() -> AdjacencyMatrix:
    """Vertices (i,j) on a 4x4 grid, adjacent when sharing a row or column."""
    def idx(i, j):
        return 4 * i + j
    edges = []
    for i in range(4):
        for j in range(4):
            for jj in range(j + 1, 4):
                edges.append((idx(i, j), idx(i, jj)))
            for ii in range(i + 1, 4):
                edges.append((idx(i, j), idx(ii, j)))
    return AdjacencyMatrix.from_edges(16, edges)


def shrikhande_graph() -> AdjacencyMatrix:
    """Cayley graph on Z4 x Z4 with connection set +-(1,0), +-(0,1), +-(1,1)."""
    conn = {(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)}
    def idx(i, j):
        return 4 * i + j
    edges = []
    for i in range(4):
        for j in range(4):
            for ii in range(4):
                for jj in range(4):
                    if ((ii - i) % 4, (jj - j) % 4) in conn and idx(i, j) < idx(ii, jj):
                        edges.append((idx(i, j), idx(ii, jj)))
    return AdjacencyMatrix.from_edges(16, edges)


def generate_srg_pair_16() -> Tuple[AdjacencyMatrix, AdjacencyMatrix]:
    return rooks_graph_4x4(), shrikhande_graph()


def neighborhood_components(g: AdjacencyMatrix, v: int) -> List[int]:
    """Sorted sizes of connected components of the subgraph induced on the
    neighbors of v."""
    nbrs = [w for w in range(g.n) if g.entries[v][w]]
    pos = {w: i for i, w in enumerate(nbrs)}
    seen = [False] * len(nbrs)
    sizes = []
    for i in range(len(nbrs)):
        if seen[i]:
            continue
        stack, size = [i], 0
        seen[i] = True
        while stack:
            cur = stack.pop()
            size += 1
            for w in nbrs:
                j = pos[w]
                if not seen[j] and g.entries[nbrs[cur]][w]:
                    seen[j] = True
                    stack.append(j)
        sizes.append(size)
    return sorted(sizes)


def local_structure_distinct(g1: AdjacencyMatrix, g2: AdjacencyMatrix) -> bool:
    """Classical non-isomorphism certificate for the 16-vertex pair: in the
    rook's graph every vertex neighborhood splits into two triangles, in the
    Shrikhande graph it is a single 6-cycle."""
    profile1 = sorted(tuple(neighborhood_components(g1, v)) for v in range(g1.n))
    profile2 = sorted(tuple(neighborhood_components(g2, v)) for v in range(g2.n))
    return profile1 != profile2


# ---------------------------------------------------------------------------
# exported invariant vector and comparison


def invariant_vector(g: AdjacencyMatrix, kmax: int = 8,
                     eig_choice: str = "smaller") -> List[Tuple[str, float]]:
    """All exported rotation/relabeling invariants for one graph: SRG
    parameters' analytic spectrum, the cloud angles beta and gamma, thick
    cycles of the degree-6 description, and the degree-3 contractions of the
    quadric space."""
    params = check_srg(g)
    if isinstance(params, NotSrg):
        raise ValueError(f"not strongly regular: {params.reason}")
    eig = srg_eigen(params)
    lam_pairs = sorted(eig[1:], key=lambda t: t[1])
    lam = lam_pairs[0][0] if eig_choice == "smaller" else lam_pairs[1][0]
    pc = eigenspace_points(g, lam)
    out: List[Tuple[str, float]] = [
        ("m", float(params.m)), ("k", float(params.k)),
        ("nu", float(params.nu)), ("mu", float(params.mu)),
        ("lambda", float(lam)), ("beta", pc.beta), ("gamma", pc.gamma),
    ]
    thick, normalized = thick_cycle_invariants(pc, kmax)
    out.extend(thick)
    out.append(("thick_normalized", float(normalized)))
    space = build_affine_space(pc)
    out.append(("quadric_space_dim", float(space.d)))
    if space.d >= 1:
        out.extend(invariants_deg3(space))
    return out


def compare_invariants(a: List[Tuple[str, float]], b: List[Tuple[str, float]],
                       tol: float = 1e-6) -> Dict:
    """Side-by-side report: verdict DISTINCT when some invariant differs by
    more than tol relative, INDISTINGUISHABLE otherwise."""
    if [k for k, _ in a] != [k for k, _ in b]:
        return {"verdict": "DISTINCT", "max_rel_delta": math.inf,
                "per_invariant": [], "note": "label sets differ"}
    per = []
    max_rel = 0.0
    for (label, va), (_, vb) in zip(a, b):
        scale = max(abs(va), abs(vb), 1.0)
        rel = abs(va - vb) / scale
        max_rel = max(max_rel, rel)
        per.append({"label": label, "left": va, "right": vb, "rel_delta": rel})
    verdict = "DISTINCT" if max_rel > tol else "INDISTINGUISHABLE"
    return {"verdict": verdict, "max_rel_delta": max_rel, "per_invariant": per}
